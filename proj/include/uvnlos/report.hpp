// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/report.hpp
//! Result table shared by every run mode, written as CSV and as a
//! self-contained SVG line chart.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace uvnlos
{
struct ReportRow
{
    double range_m{0};
    std::optional<double> x_o_m;
    std::optional<double> pl_total_db;
    std::optional<double> pl_sca_db;
    std::optional<double> pl_ref_db;
    std::optional<double> q_sca_j;
    std::optional<double> q_ref_j;
    std::optional<double> blocked_fraction;
    std::optional<double> mcpt_pl_db;
    std::optional<double> mcpt_stderr_db;
    std::optional<double> delta_db;
    std::string error;  //!< Non-empty for a failed point; values stay empty
};

//! Column names in output order.
std::vector<std::string> csv_columns();

//! Shortest round-trip decimal; "inf" for +infinity.
std::string format_value(double value);

std::string format_csv(std::vector<ReportRow> const& rows);

//! Path-loss curves against range, or against |x_o + s/2| when
//! \p offset_thickness is given.
std::string format_svg(std::vector<ReportRow> const& rows,
                       std::string const& title,
                       std::optional<double> offset_thickness);

}  // namespace uvnlos
