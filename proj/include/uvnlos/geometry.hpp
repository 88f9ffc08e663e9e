// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/geometry.hpp
//! Transceiver placement, obstacle cuboid, the transmitter-side scatter
//! point parametrization and ray/cone/box intersection primitives.
//!
//! Conventions: the transmitter T sits at the origin and the receiver R at
//! (0, r, 0). Elevations are measured up from the XY plane and azimuths
//! anticlockwise from +X. All quantities are SI (m, rad).
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uvnlos/common.hpp"

namespace uvnlos
{
//---------------------------------------------------------------------------//
// Domain types
//---------------------------------------------------------------------------//

//! Transceiver pointing and link budget parameters.
struct SystemGeometry
{
    double beta_t{};         //!< Transmitter half-beam angle [rad]
    double beta_r{};         //!< Receiver half-FoV angle [rad]
    double theta_t{};        //!< Transmitter elevation [rad]
    double theta_r{};        //!< Receiver elevation [rad]
    double alpha_t{};        //!< Transmitter azimuth [rad]
    double alpha_r{};        //!< Receiver azimuth [rad]
    double range_r{};        //!< T-R baseline [m]
    double aperture_area{};  //!< Receiver detection area [m^2]
    double pulse_energy{1};  //!< Emitted pulse energy [J]

    Vec3 transmitter() const { return Vec3::Zero(); }
    Vec3 receiver() const { return {0.0, range_r, 0.0}; }

    //! Unit beam axis (N_t).
    Vec3 tx_axis() const;
    //! Unit FoV axis (N_r).
    Vec3 rx_axis() const;

    friend bool operator==(SystemGeometry const&, SystemGeometry const&) = default;
};

enum class Corner
{
    a = 0,
    b,
    c,
    d
};

//! Axis-aligned cuboid standing on the XY plane.
struct ObstacleBox
{
    double thickness_s{};   //!< Extent along X [m]
    double width_w{};       //!< Extent along Y [m]
    double height_kappa{};  //!< Height above XY [m]
    double center_x{};      //!< x_o [m]
    double center_y{};      //!< y_o [m]

    double x_far() const { return center_x - 0.5 * thickness_s; }   // x_a, x_b
    double x_near() const { return center_x + 0.5 * thickness_s; }  // x_c, x_d
    double y_low() const { return center_y - 0.5 * width_w; }       // y_b, y_c
    double y_high() const { return center_y + 0.5 * width_w; }      // y_a, y_d

    Vec3 lower() const { return {x_far(), y_low(), 0.0}; }
    Vec3 upper() const { return {x_near(), y_high(), height_kappa}; }

    //! Top corner M (z = kappa).
    Vec3 corner(Corner m) const;
    //! Ground projection M' (z = 0).
    Vec3 ground_corner(Corner m) const;

    friend bool operator==(ObstacleBox const&, ObstacleBox const&) = default;
};

//! Top corners A-D followed by their ground projections A'-D'.
struct ObstacleCorners
{
    std::array<Vec3, 4> top;
    std::array<Vec3, 4> ground;
};

ObstacleCorners obstacle_corners(ObstacleBox const& obstacle);

//! Elevation limits Theta_{t,m}, Theta_{r,m} indexed by Corner.
struct CornerAngleLimits
{
    std::array<double, 4> tx{};
    std::array<double, 4> rx{};

    double tx_min() const;
    double rx_min() const;
};

CornerAngleLimits
corner_angle_limits(SystemGeometry const& geom, ObstacleBox const& obstacle);

//! Structured list of violated inequalities.
struct ValidityReport
{
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

//! Parameter-range checks on the transceivers alone.
ValidityReport validate_system(SystemGeometry const& geom);

//! Transceiver checks plus a well-formed box lying entirely in x < 0.
ValidityReport
validate_obstacle(SystemGeometry const& geom, ObstacleBox const& obstacle);

//! Obstacle checks plus the placement, positive-elevation and corner
//! elevation constraints required by the plane-frame blockage analysis.
ValidityReport
validate_geometry(SystemGeometry const& geom, ObstacleBox const& obstacle);

//---------------------------------------------------------------------------//
// Transmitter-side parametrization
//---------------------------------------------------------------------------//

//! A point in the beam addressed by (tau, varpi, vartheta).
struct ScatterSample
{
    double tau{};
    double varpi{};
    double vartheta{};
    Vec3 point_p{Vec3::Zero()};
    double delta_t{};
    double phi{};
    double epsilon{};
    double theta_s{};  //!< Angle between TP and PR
    double theta_v{};  //!< Angle between RP and the FoV axis

    double cos_theta_s{};
    double cos_theta_v{};
};

//! In-plane ray bound: varpi in [-varpi_max, varpi_max].
std::pair<double, double> varpi_bounds(double vartheta, double beta_t);

//! Unit direction of the ray TF' for (varpi, vartheta).
Vec3 beam_direction(double varpi, double vartheta, SystemGeometry const& geom);

ScatterSample scatter_point(double tau,
                            double varpi,
                            double vartheta,
                            SystemGeometry const& geom);

//! Volume element |J3| of (tau, varpi, vartheta).
double jacobian(double tau, double varpi);

//---------------------------------------------------------------------------//
// Receiver cone
//---------------------------------------------------------------------------//

//! Signed residual of the receiver cone implicit equation; negative inside
//! either nappe, zero on the surface.
double receiver_cone_residual(Vec3 const& point, SystemGeometry const& geom);

//! True if the point lies inside the receiver FoV (correct nappe).
bool in_receiver_fov(Vec3 const& point, SystemGeometry const& geom);

enum class TauKind
{
    half_line_from_tau0,
    half_line_from_tau2,
    segment,
    empty
};

//! Range of tau along TF' that lies inside the receiver FoV.
struct TauInterval
{
    TauKind kind{TauKind::empty};
    double lo{0};
    double hi{0};
    double xi1{0};
    double xi2{0};
    double xi3{0};
    double discriminant{0};

    bool empty() const { return kind == TauKind::empty; }
    bool bounded() const { return kind == TauKind::segment; }
};

//! Classify the roots of xi1 t^2 + xi2 t + xi3 on t > 0 using an inside
//! predicate evaluated between consecutive roots. The admissible set of a
//! ray against one convex cone nappe is always a single interval.
template<class InsideFn>
TauInterval
solve_cone_interval(double xi1, double xi2, double xi3, InsideFn&& inside);

TauInterval
tau_interval(double vartheta, double varpi, SystemGeometry const& geom);

//! Same as tau_interval for an arbitrary unit ray direction from T.
TauInterval tau_interval_dir(Vec3 const& dir, SystemGeometry const& geom);

//! Largest cosine between (P - R) and the FoV axis over P on the ray t*dir,
//! t >= 0, minus cos(beta_r). Positive iff the ray enters the FoV.
double fov_margin(Vec3 const& dir, SystemGeometry const& geom);

//---------------------------------------------------------------------------//
// Boundary rays
//---------------------------------------------------------------------------//

//! Parametric ray origin + omega * direction.
struct ParametricRay
{
    Vec3 origin{Vec3::Zero()};
    Vec3 direction{Vec3::Zero()};

    Vec3 at(double omega) const { return origin + omega * direction; }
};

struct BoundaryRays
{
    ParametricRay tx_plus;
    ParametricRay tx_minus;
    ParametricRay rx_plus;
    ParametricRay rx_minus;
};

BoundaryRays boundary_rays(SystemGeometry const& geom);

//---------------------------------------------------------------------------//
// Box intersection
//---------------------------------------------------------------------------//

//! Parametric overlap of the line origin + t*dir with the closed box;
//! nullopt if the line misses it.
std::optional<std::pair<double, double>>
line_box_overlap(Vec3 const& origin, Vec3 const& dir, ObstacleBox const& box);

//! True iff segment a->b passes through the open box interior.
bool segment_hits_box(Vec3 const& a, Vec3 const& b, ObstacleBox const& box);

enum class BoxFace
{
    none,
    x_low,
    x_high,  //!< Facade CDD'C' (x = x_c, outward normal +X)
    y_low,
    y_high,
    z_low,
    z_high
};

struct RayHit
{
    double t{std::numeric_limits<double>::infinity()};
    BoxFace face{BoxFace::none};
};

//! First entry of the ray origin + t*dir (t > 0) into the box interior.
RayHit ray_box_entry(Vec3 const& origin, Vec3 const& dir, ObstacleBox const& box);

//! Range of tau > 0 for which the segment tau*dir -> R passes through the
//! box (the box shadow seen from R, intersected with the ray). The shadow
//! is convex so the result is one interval.
std::optional<std::pair<double, double>>
receiver_shadow(Vec3 const& dir, SystemGeometry const& geom, ObstacleBox const& box);

//---------------------------------------------------------------------------//
// TEMPLATE DEFINITIONS
//---------------------------------------------------------------------------//

template<class InsideFn>
TauInterval
solve_cone_interval(double xi1, double xi2, double xi3, InsideFn&& inside)
{
    TauInterval result;
    result.xi1 = xi1;
    result.xi2 = xi2;
    result.xi3 = xi3;
    result.discriminant = xi2 * xi2 - 4.0 * xi1 * xi3;

    double const scale = std::abs(xi1) + std::abs(xi2) + std::abs(xi3);
    bool const linear = std::abs(xi1) <= 1e-14 * scale;

    std::array<double, 2> roots{};
    int n_roots = 0;
    if (linear)
    {
        if (xi2 != 0)
            roots[n_roots++] = -xi3 / xi2;
    }
    else if (result.discriminant >= 0)
    {
        double const sq = std::sqrt(result.discriminant);
        double const q = -0.5 * (xi2 + (xi2 >= 0 ? sq : -sq));
        double r1 = q / xi1;
        double r2 = (q != 0) ? xi3 / q : r1;
        if (r1 > r2)
            std::swap(r1, r2);
        roots = {r1, r2};
        n_roots = 2;
    }

    // Breakpoints on (0, inf)
    std::array<double, 4> cuts{};
    int n_cuts = 0;
    cuts[n_cuts++] = 0.0;
    for (int i = 0; i < n_roots; ++i)
    {
        if (roots[i] > 0)
            cuts[n_cuts++] = roots[i];
    }

    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = lo;
    for (int i = 0; i < n_cuts; ++i)
    {
        double const a = cuts[i];
        bool const last = (i + 1 == n_cuts);
        double const b = last ? std::numeric_limits<double>::infinity()
                              : cuts[i + 1];
        double const probe = last ? (2.0 * a + 1.0) : 0.5 * (a + b);
        if (!inside(probe))
            continue;
        if (std::isnan(lo))
            lo = a;
        hi = b;
    }

    if (std::isnan(lo))
    {
        result.kind = TauKind::empty;
        return result;
    }
    result.lo = lo;
    result.hi = hi;
    if (std::isinf(hi))
    {
        result.kind = linear ? TauKind::half_line_from_tau0
                             : TauKind::half_line_from_tau2;
    }
    else
    {
        result.kind = TauKind::segment;
    }
    return result;
}

}  // namespace uvnlos
