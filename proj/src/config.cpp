// SPDX-License-Identifier: Apache-2.0
//! \file config.cpp
#include "uvnlos/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

namespace uvnlos
{
namespace
{
using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

//---------------------------------------------------------------------------//
// Presets, written in the same unit-string form users write
//---------------------------------------------------------------------------//

// Transceivers, atmosphere and surface common to the validation scenarios.
// The scaled obstacle violates the corner elevation limits at these
// angles, so the exact weighting-factor evaluator is selected.
char const table3_base[] = R"({
  "geometry": {
    "beta_t": "pi/6 rad", "beta_r": "pi/6 rad",
    "alpha_t": "19pi/36 rad", "alpha_r": "-19pi/36 rad",
    "range": "100 m", "aperture_area": "1.92 cm2", "pulse_energy": "1 J"
  },
  "atmosphere": {
    "ks_ray": "0.24 km^-1", "ks_mie": "0.25 km^-1", "ka": "0.90 km^-1",
    "gamma": 0.017, "g": 0.72, "f": 0.5
  },
  "obstacle": {"enabled": true, "scale_with_range": true},
  "surface": {"r_r": 0.1, "m_s": 5, "eta": 0.5},
  "quadrature": {"gwei": "exact"},
  "sweep": {
    "ranges": ["50 m", "75 m", "100 m", "125 m", "150 m", "175 m", "200 m"]
  }
})";

// Fig. 3 scene at r = 100 m, where every corner satisfies the elevation
// limits. The offsets cover |x_o + s/2| = 1..76 m in 3 m steps, the whole
// range over which those limits hold.
char const table4_doc[] = R"({
  "geometry": {
    "beta_t": "pi/12 rad", "beta_r": "pi/12 rad",
    "theta_t": "pi/9 rad", "theta_r": "pi/9 rad",
    "alpha_t": "2pi/3 rad", "alpha_r": "-2pi/3 rad",
    "range": "100 m", "aperture_area": "1.92 cm2", "pulse_energy": "1 J"
  },
  "atmosphere": {
    "ks_ray": "0.24 km^-1", "ks_mie": "0.25 km^-1", "ka": "0.90 km^-1",
    "gamma": 0.017, "g": 0.72, "f": 0.5
  },
  "obstacle": {
    "enabled": true, "scale_with_range": false,
    "thickness": "30 m", "width": "40 m", "height": "80 m",
    "x_o": "-45 m", "y_o": "50 m"
  },
  "surface": {"r_r": 0.1, "m_s": 5, "eta": 0.5},
  "quadrature": {"gwei": "paper"}
})";

Json preset_document(std::string const& name)
{
    if (name == "table4")
    {
        Json doc = Json::parse(table4_doc);
        Json offsets = Json::array();
        for (int d = 1; d <= 76; d += 3)
            offsets.push_back(std::to_string(-15 - d) + " m");
        doc["sweep"]["x_o"] = offsets;
        return doc;
    }
    Json doc = Json::parse(table3_base);
    auto& g = doc["geometry"];
    if (name == "table3-scenario1")
    {
        g["theta_t"] = "25 deg";
        g["theta_r"] = "35 deg";
    }
    else if (name == "table3-scenario2")
    {
        g["theta_t"] = "35 deg";
        g["theta_r"] = "35 deg";
    }
    else if (name == "table3-scenario1-symmetric")
    {
        g["theta_t"] = "25 deg";
        g["theta_r"] = "25 deg";
    }
    else
    {
        std::string known;
        for (auto const& n : preset_names())
            known += (known.empty() ? "" : ", ") + n;
        throw ParseError("unknown preset '" + name + "' (known: " + known + ")");
    }
    return doc;
}

//---------------------------------------------------------------------------//
// Schema
//---------------------------------------------------------------------------//

std::map<std::string, std::set<std::string>> const& schema()
{
    static std::map<std::string, std::set<std::string>> const keys{
        {"geometry",
         {"beta_t", "beta_r", "theta_t", "theta_r", "alpha_t", "alpha_r", "range",
          "aperture_area", "pulse_energy"}},
        {"atmosphere", {"ks_ray", "ks_mie", "ka", "gamma", "g", "f"}},
        {"obstacle",
         {"enabled", "scale_with_range", "thickness", "width", "height", "x_o",
          "y_o"}},
        {"surface", {"r_r", "m_s", "eta"}},
        {"quadrature",
         {"n_vartheta", "n_varpi", "n_tau", "tau_truncation", "epsilon_floor",
          "gwei"}},
        {"mcpt", {"photons", "seed", "batch_size", "survival_threshold"}},
        {"sweep", {"ranges", "x_o"}},
    };
    return keys;
}

char const* const obstacle_dims[] = {"thickness", "width", "height", "x_o", "y_o"};

void check_keys(Json const& doc)
{
    if (!doc.is_object())
        throw ParseError("top level must be a JSON object");
    for (auto const& [key, value] : doc.items())
    {
        if (key == "preset")
        {
            if (!value.is_string())
                throw ParseError("key 'preset' must be a string");
            continue;
        }
        auto const it = schema().find(key);
        if (it == schema().end())
            throw ParseError("unknown key '" + key + "'");
        if (!value.is_object())
            throw ParseError("key '" + key + "' must be an object");
        for (auto const& [sub, unused] : value.items())
        {
            if (!it->second.count(sub))
                throw ParseError("unknown key '" + key + "." + sub + "'");
        }
    }
}

Json merge(Json base, Json const& doc)
{
    for (auto const& [section, value] : doc.items())
    {
        if (section == "preset")
            continue;
        if (section == "obstacle" && value.contains("scale_with_range")
            && value["scale_with_range"] == true && base.contains("obstacle"))
        {
            for (char const* k : obstacle_dims)
                base["obstacle"].erase(k);
        }
        for (auto const& [key, v] : value.items())
            base[section][key] = v;
    }
    return base;
}

//---------------------------------------------------------------------------//
// Field reader that collects every problem before reporting
//---------------------------------------------------------------------------//

class Reader
{
  public:
    explicit Reader(Json const& doc) : doc_(doc) {}

    std::vector<std::string>& problems() { return problems_; }

    bool has(char const* section, char const* key) const
    {
        return doc_.contains(section) && doc_[section].contains(key);
    }

    double quantity(char const* section, char const* key, char const* dim)
    {
        Json const* v = find(section, key, true);
        if (!v)
            return 0;
        return to_quantity(*v, name(section, key), dim);
    }

    double quantity_or(char const* section, char const* key, char const* dim,
                       double fallback)
    {
        return has(section, key) ? quantity(section, key, dim) : fallback;
    }

    double number_or(char const* section, char const* key, double fallback,
                     bool required = false)
    {
        Json const* v = find(section, key, required);
        if (!v)
            return fallback;
        if (!v->is_number())
        {
            problems_.push_back(name(section, key) + ": expected a number");
            return fallback;
        }
        return v->get<double>();
    }

    std::uint64_t count_or(char const* section, char const* key, std::uint64_t fallback)
    {
        Json const* v = find(section, key, false);
        if (!v)
            return fallback;
        double const x = v->is_number() ? v->get<double>() : -1;
        if (!(x >= 0 && x == std::floor(x) && x < 1.8e19))
        {
            problems_.push_back(name(section, key)
                                + ": expected a non-negative integer");
            return fallback;
        }
        if (v->is_number_unsigned())
            return v->get<std::uint64_t>();
        return static_cast<std::uint64_t>(x);
    }

    bool flag_or(char const* section, char const* key, bool fallback)
    {
        Json const* v = find(section, key, false);
        if (!v)
            return fallback;
        if (!v->is_boolean())
        {
            problems_.push_back(name(section, key) + ": expected true or false");
            return fallback;
        }
        return v->get<bool>();
    }

    std::string text_or(char const* section, char const* key, std::string fallback)
    {
        Json const* v = find(section, key, false);
        if (!v)
            return fallback;
        if (!v->is_string())
        {
            problems_.push_back(name(section, key) + ": expected a string");
            return fallback;
        }
        return v->get<std::string>();
    }

    std::vector<double> quantities(char const* section, char const* key, char const* dim)
    {
        std::vector<double> out;
        Json const* v = find(section, key, false);
        if (!v)
            return out;
        if (!v->is_array())
        {
            problems_.push_back(name(section, key) + ": expected an array");
            return out;
        }
        for (std::size_t i = 0; i < v->size(); ++i)
        {
            out.push_back(to_quantity(
                (*v)[i], name(section, key) + "[" + std::to_string(i) + "]", dim));
        }
        return out;
    }

  private:
    static std::string name(char const* section, char const* key)
    {
        return std::string(section) + "." + key;
    }

    Json const* find(char const* section, char const* key, bool required)
    {
        if (has(section, key))
            return &doc_[section][key];
        if (required)
            problems_.push_back(name(section, key) + ": missing mandatory field");
        return nullptr;
    }

    double to_quantity(Json const& v, std::string const& where, char const* dim)
    {
        if (!v.is_string())
        {
            problems_.push_back(where + ": expected a string with a unit suffix");
            return 0;
        }
        try
        {
            return parse_quantity(v.get<std::string>(), dim);
        }
        catch (Error const& e)
        {
            problems_.push_back(where + ": " + e.what());
            return 0;
        }
    }

    Json const& doc_;
    std::vector<std::string> problems_;
};

void append(std::vector<std::string>& out,
            std::string const& prefix,
            ValidityReport const& report)
{
    for (auto const& v : report.violations)
    {
        std::string const line = prefix + v;
        if (std::find(out.begin(), out.end(), line) == out.end())
            out.push_back(line);
    }
}

ScenarioConfig read(Json const& doc, std::string const& preset)
{
    Reader in(doc);
    ScenarioConfig cfg;
    cfg.preset = preset;
    Scene& sc = cfg.scene;

    SystemGeometry& g = sc.geom;
    g.beta_t = in.quantity("geometry", "beta_t", "angle");
    g.beta_r = in.quantity("geometry", "beta_r", "angle");
    g.theta_t = in.quantity("geometry", "theta_t", "angle");
    g.theta_r = in.quantity("geometry", "theta_r", "angle");
    g.alpha_t = in.quantity("geometry", "alpha_t", "angle");
    g.alpha_r = in.quantity("geometry", "alpha_r", "angle");
    g.range_r = in.quantity("geometry", "range", "length");
    g.aperture_area = in.quantity("geometry", "aperture_area", "area");
    g.pulse_energy = in.quantity_or("geometry", "pulse_energy", "energy", 1.0);

    Atmosphere& a = sc.atm;
    a.ks_ray = in.quantity("atmosphere", "ks_ray", "inverse_length");
    a.ks_mie = in.quantity("atmosphere", "ks_mie", "inverse_length");
    a.ka = in.quantity("atmosphere", "ka", "inverse_length");
    a.gamma = in.number_or("atmosphere", "gamma", 0, true);
    a.g = in.number_or("atmosphere", "g", 0, true);
    a.f = in.number_or("atmosphere", "f", 0, true);

    bool const has_obstacle
        = doc.contains("obstacle") && in.flag_or("obstacle", "enabled", true);
    if (has_obstacle)
    {
        sc.scale_obstacle_with_range = in.flag_or("obstacle", "scale_with_range", false);
        if (sc.scale_obstacle_with_range)
        {
            for (char const* k : obstacle_dims)
            {
                if (in.has("obstacle", k))
                {
                    in.problems().push_back(std::string("obstacle.") + k
                                            + ": conflicts with scale_with_range");
                }
            }
            sc.obstacle = range_scaled_obstacle(g.range_r);
        }
        else
        {
            ObstacleBox box;
            box.thickness_s = in.quantity("obstacle", "thickness", "length");
            box.width_w = in.quantity("obstacle", "width", "length");
            box.height_kappa = in.quantity("obstacle", "height", "length");
            box.center_x = in.quantity("obstacle", "x_o", "length");
            box.center_y = in.quantity("obstacle", "y_o", "length");
            sc.obstacle = box;
        }
    }

    sc.material.r_r = in.number_or("surface", "r_r", sc.material.r_r);
    sc.material.m_s = in.number_or("surface", "m_s", sc.material.m_s);
    sc.material.eta = in.number_or("surface", "eta", sc.material.eta);

    QuadratureSpec& q = sc.quad;
    q.n_vartheta = static_cast<int>(in.count_or("quadrature", "n_vartheta", q.n_vartheta));
    q.n_varpi = static_cast<int>(in.count_or("quadrature", "n_varpi", q.n_varpi));
    q.n_tau = static_cast<int>(in.count_or("quadrature", "n_tau", q.n_tau));
    q.tau_truncation = in.number_or("quadrature", "tau_truncation", q.tau_truncation);
    q.epsilon_floor
        = in.quantity_or("quadrature", "epsilon_floor", "length", q.epsilon_floor);
    std::string const mode = in.text_or("quadrature", "gwei", to_string(q.gwei));
    try
    {
        q.gwei = gwei_mode_from_string(mode);
    }
    catch (Error const& e)
    {
        in.problems().push_back(std::string("quadrature.gwei: ") + e.what());
    }

    McptSpec& m = cfg.mcpt;
    m.n_photons = in.count_or("mcpt", "photons", m.n_photons);
    m.rng_seed = in.count_or("mcpt", "seed", m.rng_seed);
    m.batch_size = in.count_or("mcpt", "batch_size", m.batch_size);
    m.survival_threshold
        = in.number_or("mcpt", "survival_threshold", m.survival_threshold);

    cfg.sweep_ranges = in.quantities("sweep", "ranges", "length");
    cfg.sweep_offsets = in.quantities("sweep", "x_o", "length");

    // Invariants, checked only once every field has been read
    std::vector<std::string>& p = in.problems();
    if (p.empty())
    {
        append(p, "geometry: ", validate_system(g));
        append(p, "atmosphere: ", validate_atmosphere(a));
        append(p, "quadrature: ", validate_quadrature(q));
        append(p, "mcpt: ", validate_mcpt(m));
        if (sc.obstacle)
        {
            append(p, "obstacle: ",
                   q.gwei == GweiMode::paper ? validate_geometry(g, *sc.obstacle)
                                             : validate_obstacle(g, *sc.obstacle));
            append(p, "surface: ", validate_surface(sc.surface()));
        }
        for (double r : cfg.sweep_ranges)
        {
            if (!(r > 0))
                p.push_back("sweep.ranges: every range must be > 0");
        }
        if (!cfg.sweep_offsets.empty() && !sc.obstacle)
            p.push_back("sweep.x_o: offsets require an obstacle");
    }
    if (!p.empty())
    {
        std::string msg = "invalid configuration:";
        for (auto const& line : p)
            msg += "\n  " + line;
        throw ValidationError(msg);
    }
    return cfg;
}

std::string si(double value, char const* unit)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g %s", value, unit);
    return buf;
}

}  // namespace

//---------------------------------------------------------------------------//
std::vector<std::string> preset_names()
{
    return {"table3-scenario1", "table3-scenario2", "table3-scenario1-symmetric",
            "table4"};
}

double parse_quantity(std::string const& text, std::string const& dimension)
{
    static std::regex const pattern(
        R"(^\s*([-+]?)\s*((?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*(\*?\s*pi)?)"
        R"(\s*(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))?\s*([A-Za-z][A-Za-z0-9^\-]*)\s*$)");
    static std::map<std::string, std::map<std::string, double>> const units{
        {"angle", {{"deg", pi / 180}, {"rad", 1.0}}},
        {"length", {{"m", 1.0}, {"km", 1e3}, {"cm", 1e-2}}},
        {"area", {{"m2", 1.0}, {"m^2", 1.0}, {"cm2", 1e-4}, {"cm^2", 1e-4}}},
        {"inverse_length", {{"m^-1", 1.0}, {"km^-1", 1e-3}}},
        {"energy", {{"J", 1.0}, {"mJ", 1e-3}}},
    };

    auto const dim = units.find(dimension);
    if (dim == units.end())
        throw DomainError("unknown dimension '" + dimension + "'");

    std::smatch m;
    if (!std::regex_match(text, m, pattern) || (!m[2].matched && !m[3].matched))
    {
        throw ParseError("cannot read '" + text
                         + "' as a number followed by a unit (for example '25 deg')");
    }
    auto const unit = dim->second.find(m[5].str());
    if (unit == dim->second.end())
    {
        std::string known;
        for (auto const& [u, f] : dim->second)
            known += (known.empty() ? "" : "|") + u;
        throw ParseError("unit '" + m[5].str() + "' is not a valid " + dimension
                         + " unit (" + known + ")");
    }
    double value = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (m[3].matched)
        value *= pi;
    if (m[4].matched)
        value /= std::stod(m[4].str());
    if (m[1].str() == "-")
        value = -value;
    return value * unit->second;
}

ScenarioConfig parse_config(std::string const& text)
{
    Json doc;
    try
    {
        doc = Json::parse(text);
    }
    catch (Json::parse_error const& e)
    {
        std::size_t const end = std::min<std::size_t>(e.byte, text.size());
        long const line = 1 + std::count(text.begin(), text.begin() + end, '\n');
        throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    check_keys(doc);

    std::string preset;
    Json base = Json::object();
    if (doc.contains("preset"))
    {
        preset = doc["preset"].get<std::string>();
        base = preset_document(preset);
    }
    return read(merge(base, doc), preset);
}

ScenarioConfig load_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(ScenarioConfig const& cfg)
{
    Scene const& sc = cfg.scene;
    SystemGeometry const& g = sc.geom;
    OrderedJson doc;
    if (!cfg.preset.empty())
        doc["preset"] = cfg.preset;
    doc["geometry"] = {
        {"beta_t", si(g.beta_t, "rad")},
        {"beta_r", si(g.beta_r, "rad")},
        {"theta_t", si(g.theta_t, "rad")},
        {"theta_r", si(g.theta_r, "rad")},
        {"alpha_t", si(g.alpha_t, "rad")},
        {"alpha_r", si(g.alpha_r, "rad")},
        {"range", si(g.range_r, "m")},
        {"aperture_area", si(g.aperture_area, "m2")},
        {"pulse_energy", si(g.pulse_energy, "J")},
    };
    doc["atmosphere"] = {
        {"ks_ray", si(sc.atm.ks_ray, "m^-1")},
        {"ks_mie", si(sc.atm.ks_mie, "m^-1")},
        {"ka", si(sc.atm.ka, "m^-1")},
        {"gamma", sc.atm.gamma},
        {"g", sc.atm.g},
        {"f", sc.atm.f},
    };
    OrderedJson obstacle;
    obstacle["enabled"] = sc.obstacle.has_value();
    if (sc.obstacle)
    {
        obstacle["scale_with_range"] = sc.scale_obstacle_with_range;
        if (!sc.scale_obstacle_with_range)
        {
            ObstacleBox const& b = *sc.obstacle;
            obstacle["thickness"] = si(b.thickness_s, "m");
            obstacle["width"] = si(b.width_w, "m");
            obstacle["height"] = si(b.height_kappa, "m");
            obstacle["x_o"] = si(b.center_x, "m");
            obstacle["y_o"] = si(b.center_y, "m");
        }
    }
    doc["obstacle"] = obstacle;
    doc["surface"] = {
        {"r_r", sc.material.r_r},
        {"m_s", sc.material.m_s},
        {"eta", sc.material.eta},
    };
    doc["quadrature"] = {
        {"n_vartheta", sc.quad.n_vartheta},
        {"n_varpi", sc.quad.n_varpi},
        {"n_tau", sc.quad.n_tau},
        {"tau_truncation", sc.quad.tau_truncation},
        {"epsilon_floor", si(sc.quad.epsilon_floor, "m")},
        {"gwei", to_string(sc.quad.gwei)},
    };
    doc["mcpt"] = {
        {"photons", cfg.mcpt.n_photons},
        {"seed", cfg.mcpt.rng_seed},
        {"batch_size", cfg.mcpt.batch_size},
        {"survival_threshold", cfg.mcpt.survival_threshold},
    };
    OrderedJson ranges = OrderedJson::array();
    for (double r : cfg.sweep_ranges)
        ranges.push_back(si(r, "m"));
    OrderedJson offsets = OrderedJson::array();
    for (double x : cfg.sweep_offsets)
        offsets.push_back(si(x, "m"));
    doc["sweep"] = {{"ranges", ranges}, {"x_o", offsets}};
    return doc.dump(2) + "\n";
}

}  // namespace uvnlos
