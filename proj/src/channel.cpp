// SPDX-License-Identifier: Apache-2.0
//! \file channel.cpp
#include "uvnlos/channel.hpp"

#include <cmath>
#include <limits>

namespace uvnlos
{
double path_loss_db(double q_t, double q)
{
    if (!(q > 0))
        return std::numeric_limits<double>::infinity();
    return 10 * std::log10(q_t / q);
}

namespace
{
void finish(ChannelResult& res, double q_t)
{
    res.q_total = res.q_sca + res.q_ref;
    res.path_loss_db = path_loss_db(q_t, res.q_total);
    res.pl_sca_db = path_loss_db(q_t, res.q_sca);
    res.pl_ref_db = path_loss_db(q_t, res.q_ref);
    res.no_signal = !(res.q_total > 0);
}
}  // namespace

ChannelResult total_energy(SystemGeometry const& geom,
                           Atmosphere const& atm,
                           ObstacleBox const& obstacle,
                           ReflectionSurface const& surface,
                           QuadratureSpec const& quad)
{
    ScatterResult const sca = scattered_energy(geom, atm, &obstacle, quad);
    ReflectionResult const ref = reflected_energy(geom, atm, obstacle, surface, quad);

    ChannelResult res;
    res.q_sca = sca.q_sca;
    res.q_ref = ref.q_ref;
    res.blocked_fraction = sca.diagnostics.blocked_fraction();
    res.truncation_bound = sca.diagnostics.truncation_bound;
    res.gwei_mismatches = sca.diagnostics.gwei_mismatches;
    res.epsilon_underflows = sca.diagnostics.epsilon_underflows;
    res.active_region_fraction = ref.diagnostics.active_fraction();
    finish(res, geom.pulse_energy);
    return res;
}

ChannelResult no_obstacle_baseline(SystemGeometry const& geom,
                                   Atmosphere const& atm,
                                   QuadratureSpec const& quad)
{
    ScatterResult const sca = scattered_energy(geom, atm, nullptr, quad);
    ChannelResult res;
    res.q_sca = sca.q_sca;
    res.truncation_bound = sca.diagnostics.truncation_bound;
    res.epsilon_underflows = sca.diagnostics.epsilon_underflows;
    finish(res, geom.pulse_energy);
    return res;
}

//---------------------------------------------------------------------------//
ObstacleBox range_scaled_obstacle(double range)
{
    ObstacleBox box;
    box.thickness_s = range / 10;
    box.width_w = 2 * range;
    box.height_kappa = 2 * range;
    box.center_x = -1.5 * box.thickness_s;
    box.center_y = range / 2;
    return box;
}

ReflectionSurface Scene::surface() const
{
    if (!obstacle)
        throw InvalidGeometry("scene has no obstacle");
    return ReflectionSurface::facade(*obstacle, material.r_r, material.m_s, material.eta);
}

Scene Scene::at_range(double range) const
{
    Scene s = *this;
    s.geom.range_r = range;
    if (s.obstacle && s.scale_obstacle_with_range)
        s.obstacle = range_scaled_obstacle(range);
    return s;
}

ChannelResult Scene::evaluate() const
{
    if (!obstacle)
        return no_obstacle_baseline(geom, atm, quad);
    return total_energy(geom, atm, *obstacle, surface(), quad);
}

std::vector<SweepRow> sweep_range(Scene const& base, std::vector<double> const& ranges)
{
    std::vector<SweepRow> rows;
    rows.reserve(ranges.size());
    for (double r : ranges)
    {
        SweepRow row;
        row.range = r;
        try
        {
            Scene const scene = base.at_range(r);
            if (scene.obstacle)
                row.x_o = scene.obstacle->center_x;
            row.result = scene.evaluate();
        }
        catch (Error const& e)
        {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow>
sweep_obstacle_offset(Scene const& base, std::vector<double> const& offsets)
{
    if (!base.obstacle)
        throw InvalidGeometry("obstacle offset sweep requires an obstacle");
    std::vector<SweepRow> rows;
    rows.reserve(offsets.size());
    for (double x_o : offsets)
    {
        SweepRow row;
        row.range = base.geom.range_r;
        row.x_o = x_o;
        try
        {
            Scene scene = base;
            scene.obstacle->center_x = x_o;
            row.result = scene.evaluate();
        }
        catch (Error const& e)
        {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace uvnlos
