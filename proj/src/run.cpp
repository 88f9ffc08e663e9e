// SPDX-License-Identifier: Apache-2.0
//! \file run.cpp
#include "uvnlos/run.hpp"

#include <cmath>

#include <json.hpp>

namespace uvnlos
{
namespace
{
using Json = nlohmann::ordered_json;

Json number(double v)
{
    if (std::isfinite(v))
        return v;
    return format_value(v);
}

void fill_analytic(ReportRow& row, Json& point, ChannelResult const& res, bool obstacle)
{
    row.pl_total_db = res.path_loss_db;
    row.pl_sca_db = res.pl_sca_db;
    row.q_sca_j = res.q_sca;
    if (obstacle)
    {
        row.pl_ref_db = res.pl_ref_db;
        row.q_ref_j = res.q_ref;
        row.blocked_fraction = res.blocked_fraction;
    }
    point["analytic"] = {
        {"q_total_j", res.q_total},
        {"path_loss_db", number(res.path_loss_db)},
        {"no_signal", res.no_signal},
        {"blocked_fraction", res.blocked_fraction},
        {"truncation_bound_j", res.truncation_bound},
        {"active_region_fraction", res.active_region_fraction},
        {"gwei_mismatches", res.gwei_mismatches},
        {"epsilon_underflows", res.epsilon_underflows},
    };
}

void fill_mcpt(ReportRow& row, Json& point, McptEstimate const& est)
{
    row.mcpt_pl_db = est.path_loss_db;
    row.mcpt_stderr_db = est.std_error_db;
    point["mcpt"] = {
        {"q_r_hat_j", est.q_r_hat},
        {"std_error_j", est.std_error},
        {"q_sca_hat_j", est.q_sca_hat},
        {"q_ref_hat_j", est.q_ref_hat},
        {"path_loss_db", number(est.path_loss_db)},
        {"std_error_db", number(est.std_error_db)},
        {"n_photons", est.n_photons},
        {"n_contributing", est.n_contributing},
        {"insufficient_photons", est.insufficient},
    };
}

McptEstimate run_mcpt(Scene const& scene, McptSpec const& spec)
{
    if (!scene.obstacle)
        return trace(scene.geom, scene.atm, nullptr, nullptr, spec);
    ReflectionSurface const surface = scene.surface();
    return trace(scene.geom, scene.atm, &*scene.obstacle, &surface, spec);
}

struct Point
{
    Scene scene;
    double range;
    std::optional<double> x_o;
};

}  // namespace

char const* to_string(RunMode mode)
{
    switch (mode)
    {
        case RunMode::analytic: return "analytic";
        case RunMode::mcpt: return "mcpt";
        case RunMode::compare: return "compare";
        case RunMode::sweep_range: return "sweep-range";
        case RunMode::sweep_offset: return "sweep-offset";
    }
    return "?";
}

RunMode run_mode_from_string(std::string const& s)
{
    for (RunMode m : {RunMode::analytic, RunMode::mcpt, RunMode::compare,
                      RunMode::sweep_range, RunMode::sweep_offset})
    {
        if (s == to_string(m))
            return m;
    }
    throw ValidationError("unknown mode '" + s
                          + "' (expected analytic|mcpt|compare|sweep-range|sweep-offset)");
}

RunOutput run(ScenarioConfig const& config, RunMode mode)
{
    Scene const& base = config.scene;
    std::vector<Point> points;
    switch (mode)
    {
        case RunMode::analytic:
        case RunMode::mcpt:
            points.push_back({base, base.geom.range_r, {}});
            break;
        case RunMode::compare:
        case RunMode::sweep_range: {
            std::vector<double> ranges = config.sweep_ranges;
            if (ranges.empty())
            {
                if (mode == RunMode::sweep_range)
                    throw ValidationError("sweep-range needs sweep.ranges");
                ranges.push_back(base.geom.range_r);
            }
            for (double r : ranges)
                points.push_back({base.at_range(r), r, {}});
            break;
        }
        case RunMode::sweep_offset: {
            if (!base.obstacle)
                throw ValidationError("sweep-offset needs an obstacle");
            if (config.sweep_offsets.empty())
                throw ValidationError("sweep-offset needs sweep.x_o");
            for (double x : config.sweep_offsets)
            {
                Scene s = base;
                s.scale_obstacle_with_range = false;
                s.obstacle->center_x = x;
                points.push_back({s, base.geom.range_r, x});
            }
            break;
        }
    }

    bool const analytic = mode != RunMode::mcpt;
    bool const mc = mode == RunMode::mcpt || mode == RunMode::compare;

    RunOutput out;
    Json summary;
    summary["mode"] = to_string(mode);
    summary["config"] = Json::parse(emit_config(config));
    Json list = Json::array();
    for (Point const& p : points)
    {
        ReportRow row;
        row.range_m = p.range;
        row.x_o_m = p.x_o;
        if (!row.x_o_m && p.scene.obstacle)
            row.x_o_m = p.scene.obstacle->center_x;

        Json point;
        point["range_m"] = row.range_m;
        point["x_o_m"] = row.x_o_m ? Json(*row.x_o_m) : Json(nullptr);
        try
        {
            if (analytic)
                fill_analytic(row, point, p.scene.evaluate(), p.scene.obstacle.has_value());
            if (mc)
                fill_mcpt(row, point, run_mcpt(p.scene, config.mcpt));
            if (row.pl_total_db && row.mcpt_pl_db)
                row.delta_db = *row.pl_total_db - *row.mcpt_pl_db;
            point["status"] = "ok";
        }
        catch (Error const& e)
        {
            ReportRow failed;
            failed.range_m = row.range_m;
            failed.x_o_m = row.x_o_m;
            failed.error = e.what();
            row = failed;
            point.erase("analytic");
            point.erase("mcpt");
            point["status"] = "error";
            point["error"] = e.what();
            ++out.failures;
        }
        list.push_back(point);
        out.rows.push_back(row);
    }
    summary["points"] = list;
    summary["failures"] = out.failures;
    out.summary_json = summary.dump(2) + "\n";

    if (out.rows.size() > 1)
    {
        std::optional<double> thickness;
        if (mode == RunMode::sweep_offset)
            thickness = base.obstacle->thickness_s;
        std::string const title = std::string("Path loss, ") + to_string(mode)
                                  + (config.preset.empty() ? "" : " (" + config.preset + ")");
        out.svg = format_svg(out.rows, title, thickness);
    }
    return out;
}

}  // namespace uvnlos
