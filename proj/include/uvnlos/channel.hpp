// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/channel.hpp
//! Total received energy, path loss, the no-obstacle baseline and the
//! range / obstacle-offset sweeps.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uvnlos/reflection.hpp"
#include "uvnlos/scattering.hpp"

namespace uvnlos
{
//! 10 log10(q_t / q); +inf for q <= 0.
double path_loss_db(double q_t, double q);

struct ChannelResult
{
    double q_sca{0};
    double q_ref{0};
    double q_total{0};
    double path_loss_db{0};
    double pl_sca_db{0};
    double pl_ref_db{0};
    bool no_signal{false};

    // Diagnostics
    double blocked_fraction{0};
    double truncation_bound{0};
    double active_region_fraction{0};
    std::size_t gwei_mismatches{0};
    std::size_t epsilon_underflows{0};
};

ChannelResult total_energy(SystemGeometry const& geom,
                           Atmosphere const& atm,
                           ObstacleBox const& obstacle,
                           ReflectionSurface const& surface,
                           QuadratureSpec const& quad);

ChannelResult no_obstacle_baseline(SystemGeometry const& geom,
                                   Atmosphere const& atm,
                                   QuadratureSpec const& quad);

//---------------------------------------------------------------------------//
//! Phong material of the facade, independent of where the obstacle sits.
struct SurfaceMaterial
{
    double r_r{0.1};
    double m_s{5};
    double eta{0.5};

    friend bool operator==(SurfaceMaterial const&, SurfaceMaterial const&) = default;
};

//! Obstacle that follows the range: s = r/10, w = 2r, kappa = 2r,
//! x_o = -3s/2, y_o = r/2.
ObstacleBox range_scaled_obstacle(double range);

//! Everything needed to evaluate one link.
struct Scene
{
    SystemGeometry geom;
    Atmosphere atm;
    std::optional<ObstacleBox> obstacle;
    bool scale_obstacle_with_range{false};
    SurfaceMaterial material;
    QuadratureSpec quad;

    ReflectionSurface surface() const;
    //! Copy with the range changed; rescales the obstacle if requested.
    Scene at_range(double range) const;
    //! Evaluate total_energy, or the baseline when there is no obstacle.
    ChannelResult evaluate() const;

    friend bool operator==(Scene const&, Scene const&) = default;
};

struct SweepRow
{
    double range{0};
    std::optional<double> x_o;
    std::optional<ChannelResult> result;
    std::string error;  //!< Non-empty if the point failed
};

//! One row per range, in input order; failures are recorded per row.
std::vector<SweepRow> sweep_range(Scene const& base, std::vector<double> const& ranges);

//! One row per obstacle centre x_o with scattered and reflected path loss
//! reported separately.
std::vector<SweepRow>
sweep_obstacle_offset(Scene const& base, std::vector<double> const& offsets);

}  // namespace uvnlos
