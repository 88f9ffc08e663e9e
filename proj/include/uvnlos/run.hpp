// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/run.hpp
//! Run modes behind the command-line tool.
#pragma once

#include <string>
#include <vector>

#include "uvnlos/config.hpp"
#include "uvnlos/report.hpp"

namespace uvnlos
{
enum class RunMode
{
    analytic,
    mcpt,
    compare,
    sweep_range,
    sweep_offset
};

char const* to_string(RunMode mode);
RunMode run_mode_from_string(std::string const& s);

struct RunOutput
{
    std::vector<ReportRow> rows;
    std::string summary_json;
    std::string svg;     //!< Empty when the mode produces a single point
    std::size_t failures{0};
};

//! Evaluate every point of \p mode. Point failures are recorded in their
//! rows and the summary; an invalid setup throws ValidationError.
RunOutput run(ScenarioConfig const& config, RunMode mode);

}  // namespace uvnlos
