// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/config.hpp
//! Scenario documents: JSON with unit-suffixed quantities, named presets
//! and strict key checking.
#pragma once

#include <string>
#include <vector>

#include "uvnlos/channel.hpp"
#include "uvnlos/mcpt.hpp"

namespace uvnlos
{
struct ScenarioConfig
{
    std::string preset;  //!< Informational; empty when none was named
    Scene scene;
    McptSpec mcpt;
    std::vector<double> sweep_ranges;   //!< [m]
    std::vector<double> sweep_offsets;  //!< Obstacle centres x_o [m]

    friend bool operator==(ScenarioConfig const&, ScenarioConfig const&) = default;
};

//! Names accepted by the "preset" key.
std::vector<std::string> preset_names();

//! Quantity string such as "25 deg", "pi/6 rad", "0.9 km^-1" or
//! "1.92 cm2", converted to SI. \p dimension is one of angle, length,
//! area, inverse_length, energy.
double parse_quantity(std::string const& text, std::string const& dimension);

//! Parse a document; presets expand first, then the document's sections
//! override them key by key.
ScenarioConfig parse_config(std::string const& text);
ScenarioConfig load_config(std::string const& path);

//! Fully expanded SI document that parse_config reads back to an equal
//! config.
std::string emit_config(ScenarioConfig const& config);

}  // namespace uvnlos
