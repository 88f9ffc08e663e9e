// SPDX-License-Identifier: Apache-2.0
//! \file geometry.cpp
#include "uvnlos/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace uvnlos
{
namespace
{
double clamp_unit(double x)
{
    return std::clamp(x, -1.0, 1.0);
}

double cot_checked(double alpha, char const* name)
{
    double const s = std::sin(alpha);
    if (std::abs(s) < 1e-12)
    {
        throw DegenerateAzimuth(std::string("cot(") + name
                                + ") undefined: azimuth is 0 or pi");
    }
    return std::cos(alpha) / s;
}

std::string fmt_double(double v)
{
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

char const* corner_name(int m)
{
    static char const* const names[] = {"a", "b", "c", "d"};
    return names[m];
}
}  // namespace

//---------------------------------------------------------------------------//
Vec3 SystemGeometry::tx_axis() const
{
    return {std::cos(theta_t) * std::cos(alpha_t),
            std::cos(theta_t) * std::sin(alpha_t),
            std::sin(theta_t)};
}

Vec3 SystemGeometry::rx_axis() const
{
    return {std::cos(theta_r) * std::cos(alpha_r),
            std::cos(theta_r) * std::sin(alpha_r),
            std::sin(theta_r)};
}

//---------------------------------------------------------------------------//
Vec3 ObstacleBox::corner(Corner m) const
{
    switch (m)
    {
        case Corner::a:
            return {x_far(), y_high(), height_kappa};
        case Corner::b:
            return {x_far(), y_low(), height_kappa};
        case Corner::c:
            return {x_near(), y_low(), height_kappa};
        case Corner::d:
            return {x_near(), y_high(), height_kappa};
    }
    return Vec3::Zero();
}

Vec3 ObstacleBox::ground_corner(Corner m) const
{
    Vec3 p = corner(m);
    p.z() = 0;
    return p;
}

ObstacleCorners obstacle_corners(ObstacleBox const& obstacle)
{
    ObstacleCorners result;
    for (int m = 0; m < 4; ++m)
    {
        result.top[m] = obstacle.corner(static_cast<Corner>(m));
        result.ground[m] = obstacle.ground_corner(static_cast<Corner>(m));
    }
    return result;
}

//---------------------------------------------------------------------------//
double CornerAngleLimits::tx_min() const
{
    return *std::min_element(tx.begin(), tx.end());
}

double CornerAngleLimits::rx_min() const
{
    return *std::min_element(rx.begin(), rx.end());
}

CornerAngleLimits
corner_angle_limits(SystemGeometry const& geom, ObstacleBox const& obstacle)
{
    double const cot_t = cot_checked(geom.alpha_t, "alpha_t");
    double const cot_r = cot_checked(geom.alpha_r, "alpha_r");
    double const kappa = obstacle.height_kappa;

    CornerAngleLimits result;
    for (int m = 0; m < 4; ++m)
    {
        Vec3 const c = obstacle.corner(static_cast<Corner>(m));
        result.tx[m] = std::atan2(kappa * std::sqrt(cot_t * cot_t + 1),
                                  std::abs(c.x() * cot_t + c.y()));
        result.rx[m] = std::atan2(
            kappa * std::sqrt(cot_r * cot_r + 1),
            std::abs(c.x() * cot_r + c.y() - geom.range_r));
    }
    return result;
}

//---------------------------------------------------------------------------//
std::string ValidityReport::summary() const
{
    std::string out;
    for (auto const& v : violations)
    {
        if (!out.empty())
            out += "; ";
        out += v;
    }
    return out;
}

ValidityReport validate_system(SystemGeometry const& geom)
{
    ValidityReport report;
    auto& v = report.violations;
    auto open_quarter = [&v](double x, char const* name) {
        if (!(x > 0 && x < pi / 2))
            v.push_back(std::string(name) + " = " + fmt_double(x)
                        + " not in (0, pi/2)");
    };
    open_quarter(geom.beta_t, "beta_t");
    open_quarter(geom.beta_r, "beta_r");
    open_quarter(geom.theta_t, "theta_t");
    open_quarter(geom.theta_r, "theta_r");

    if (!(geom.alpha_t >= pi / 2 && geom.alpha_t < pi))
        v.push_back("alpha_t = " + fmt_double(geom.alpha_t)
                    + " not in [pi/2, pi)");
    if (!(geom.alpha_r > -pi && geom.alpha_r <= -pi / 2))
        v.push_back("alpha_r = " + fmt_double(geom.alpha_r)
                    + " not in (-pi, -pi/2]");
    if (!(geom.range_r > 0))
        v.push_back("range_r must be positive");
    if (!(geom.aperture_area > 0))
        v.push_back("aperture_area must be positive");
    if (!(geom.pulse_energy > 0))
        v.push_back("pulse_energy must be positive");

    return report;
}

ValidityReport
validate_obstacle(SystemGeometry const& geom, ObstacleBox const& obstacle)
{
    ValidityReport report = validate_system(geom);
    auto& v = report.violations;

    if (!(obstacle.thickness_s > 0))
        v.push_back("obstacle thickness s must be positive");
    if (!(obstacle.width_w > 0))
        v.push_back("obstacle width w must be positive");
    if (!(obstacle.height_kappa > 0))
        v.push_back("obstacle height kappa must be positive");
    if (!(obstacle.center_x < -0.5 * obstacle.thickness_s))
        v.push_back("x_o = " + fmt_double(obstacle.center_x)
                    + " must be < -s/2");

    return report;
}

ValidityReport
validate_geometry(SystemGeometry const& geom, ObstacleBox const& obstacle)
{
    ValidityReport report = validate_obstacle(geom, obstacle);
    auto& v = report.violations;

    double const half_w = 0.5 * obstacle.width_w;
    if (!(obstacle.center_y > half_w
          && obstacle.center_y < geom.range_r - half_w))
        v.push_back("y_o = " + fmt_double(obstacle.center_y)
                    + " not in (w/2, r - w/2)");

    // delta_t = theta_t + vartheta > 0 over the beam
    if (!(geom.theta_t - geom.beta_t > 0))
        v.push_back("theta_t - beta_t = "
                    + fmt_double(geom.theta_t - geom.beta_t)
                    + " must be > 0 (delta_t > 0)");
    if (!(geom.theta_r - geom.beta_r > 0))
        v.push_back("theta_r - beta_r = "
                    + fmt_double(geom.theta_r - geom.beta_r)
                    + " must be > 0 (delta_r > 0)");
    if (!(obstacle.thickness_s > 0 && obstacle.width_w > 0
          && obstacle.height_kappa > 0))
    {
        return report;
    }

    CornerAngleLimits limits;
    try
    {
        limits = corner_angle_limits(geom, obstacle);
    }
    catch (DegenerateAzimuth const& e)
    {
        v.push_back(e.what());
        return report;
    }
    for (int m = 0; m < 4; ++m)
    {
        if (!(geom.theta_t + geom.beta_t <= limits.tx[m]))
            v.push_back("theta_t + beta_t = "
                        + fmt_double(geom.theta_t + geom.beta_t)
                        + " exceeds Theta_t," + corner_name(m) + " = "
                        + fmt_double(limits.tx[m]));
        if (!(geom.theta_r + geom.beta_r <= limits.rx[m]))
            v.push_back("theta_r + beta_r = "
                        + fmt_double(geom.theta_r + geom.beta_r)
                        + " exceeds Theta_r," + corner_name(m) + " = "
                        + fmt_double(limits.rx[m]));
    }
    return report;
}

//---------------------------------------------------------------------------//
std::pair<double, double> varpi_bounds(double vartheta, double beta_t)
{
    if (!(std::abs(vartheta) <= beta_t))
        throw DomainError("|vartheta| exceeds beta_t");
    double const tb = std::tan(beta_t);
    double const tv = std::tan(vartheta);
    double const rad = std::max(0.0, tb * tb - tv * tv);
    double const vmax = std::atan(std::sqrt(rad) * std::cos(vartheta));
    return {-vmax, vmax};
}

Vec3 beam_direction(double varpi, double vartheta, SystemGeometry const& geom)
{
    double const delta = geom.theta_t + vartheta;
    double const cw = std::cos(varpi);
    double const sw = std::sin(varpi);
    double const cd = std::cos(delta);
    double const sa = std::sin(geom.alpha_t);
    double const ca = std::cos(geom.alpha_t);
    // cos(varpi) * F + sin(varpi) * G, the expanded form of the scatter
    // point coordinates divided by tau
    return {cw * cd * ca - sw * sa, cw * cd * sa + sw * ca, cw * std::sin(delta)};
}

ScatterSample scatter_point(double tau,
                            double varpi,
                            double vartheta,
                            SystemGeometry const& geom)
{
    if (!(tau > 0))
        throw DomainError("scatter_point: tau must be positive");
    if (!(std::abs(vartheta) < geom.beta_t))
        throw DomainError("scatter_point: |vartheta| must be < beta_t");
    auto const [vmin, vmax] = varpi_bounds(vartheta, geom.beta_t);
    double const slack = 1e-12 * (1 + std::abs(vmax));
    if (!(varpi >= vmin - slack && varpi <= vmax + slack))
        throw DomainError("scatter_point: varpi outside beam bounds");

    ScatterSample s;
    s.tau = tau;
    s.varpi = varpi;
    s.vartheta = vartheta;
    s.delta_t = geom.theta_t + vartheta;
    s.phi = std::atan(std::tan(varpi) / std::cos(s.delta_t));

    double const common = tau * std::cos(varpi) * std::cos(s.delta_t)
                          / std::cos(s.phi);
    s.point_p = {common * std::cos(geom.alpha_t + s.phi),
                 common * std::sin(geom.alpha_t + s.phi),
                 tau * std::cos(varpi) * std::sin(s.delta_t)};

    Vec3 const to_r = geom.receiver() - s.point_p;
    s.epsilon = to_r.norm();
    Vec3 const dir_in = s.point_p / tau;
    if (s.epsilon > 0)
    {
        s.cos_theta_s = clamp_unit(dir_in.dot(to_r) / s.epsilon);
        s.cos_theta_v = clamp_unit(-to_r.dot(geom.rx_axis()) / s.epsilon);
    }
    else
    {
        s.cos_theta_s = 1;
        s.cos_theta_v = 1;
    }
    s.theta_s = std::acos(s.cos_theta_s);
    s.theta_v = std::acos(s.cos_theta_v);
    return s;
}

double jacobian(double tau, double varpi)
{
    return tau * tau * std::cos(varpi);
}

//---------------------------------------------------------------------------//
double receiver_cone_residual(Vec3 const& point, SystemGeometry const& geom)
{
    Vec3 const rel = point - geom.receiver();
    double const n2 = rel.squaredNorm();
    if (n2 == 0)
        throw DomainError("receiver_cone_residual: point coincides with R");
    Vec3 const axis = geom.rx_axis();
    double const cb = std::cos(geom.beta_r);
    double const proj = axis.x() * point.x() + axis.y() * point.y()
                        + axis.z() * point.z() - axis.y() * geom.range_r;
    return cb * cb * n2 - proj * proj;
}

bool in_receiver_fov(Vec3 const& point, SystemGeometry const& geom)
{
    Vec3 const rel = point - geom.receiver();
    double const n = rel.norm();
    if (n == 0)
        return false;
    return rel.dot(geom.rx_axis()) >= std::cos(geom.beta_r) * n;
}

TauInterval tau_interval_dir(Vec3 const& dir, SystemGeometry const& geom)
{
    double const r = geom.range_r;
    double const cb2 = std::cos(geom.beta_r) * std::cos(geom.beta_r);
    double const ctr = std::cos(geom.theta_r);
    double const sar = std::sin(geom.alpha_r);
    double const proj = ctr * (dir.x() * std::cos(geom.alpha_r) + dir.y() * sar)
                        + dir.z() * std::sin(geom.theta_r);

    double const xi1 = -proj * proj + dir.squaredNorm() * cb2;
    double const xi2 = 2 * r * proj * ctr * sar - 2 * r * dir.y() * cb2;
    double const xi3 = r * r * (cb2 - ctr * ctr * sar * sar);

    Vec3 const rcv = geom.receiver();
    Vec3 const axis = geom.rx_axis();
    double const cb = std::cos(geom.beta_r);
    auto inside = [&](double t) {
        Vec3 const rel = t * dir - rcv;
        return rel.dot(axis) > cb * rel.norm();
    };
    return solve_cone_interval(xi1, xi2, xi3, inside);
}

TauInterval
tau_interval(double vartheta, double varpi, SystemGeometry const& geom)
{
    return tau_interval_dir(beam_direction(varpi, vartheta, geom), geom);
}

double fov_margin(Vec3 const& dir, SystemGeometry const& geom)
{
    Vec3 const axis = geom.rx_axis();
    Vec3 const rcv = geom.receiver();
    double const a = dir.dot(axis);
    double const b = -rcv.dot(axis);
    double const k = dir.dot(rcv);
    double const r2 = rcv.squaredNorm();

    auto cos_at = [&](double t) {
        double const d2 = t * t - 2 * k * t + r2;
        if (d2 <= 0)
            return 1.0;
        return (a * t + b) / std::sqrt(d2);
    };

    double best = std::max(cos_at(0.0), a);
    double const den = a * k + b;
    if (den != 0)
    {
        double const t_star = (a * r2 + b * k) / den;
        if (t_star > 0)
            best = std::max(best, cos_at(t_star));
    }
    return best - std::cos(geom.beta_r);
}

//---------------------------------------------------------------------------//
BoundaryRays boundary_rays(SystemGeometry const& geom)
{
    auto make = [](Vec3 origin, double beta, double delta, double alpha) {
        double const sec = 1.0 / std::cos(beta);
        ParametricRay ray;
        ray.origin = origin;
        ray.direction = {sec * std::cos(delta) * std::cos(alpha),
                         sec * std::cos(delta) * std::sin(alpha),
                         sec * std::sin(delta)};
        return ray;
    };
    BoundaryRays rays;
    rays.tx_plus = make(geom.transmitter(),
                        geom.beta_t,
                        geom.theta_t + geom.beta_t,
                        geom.alpha_t);
    rays.tx_minus = make(geom.transmitter(),
                         geom.beta_t,
                         geom.theta_t - geom.beta_t,
                         geom.alpha_t);
    rays.rx_plus = make(
        geom.receiver(), geom.beta_r, geom.theta_r + geom.beta_r, geom.alpha_r);
    rays.rx_minus = make(
        geom.receiver(), geom.beta_r, geom.theta_r - geom.beta_r, geom.alpha_r);
    return rays;
}

//---------------------------------------------------------------------------//
std::optional<std::pair<double, double>>
line_box_overlap(Vec3 const& origin, Vec3 const& dir, ObstacleBox const& box)
{
    Vec3 const lo = box.lower();
    Vec3 const hi = box.upper();
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k)
    {
        if (dir[k] == 0)
        {
            if (origin[k] < lo[k] || origin[k] > hi[k])
                return std::nullopt;
            continue;
        }
        double ta = (lo[k] - origin[k]) / dir[k];
        double tb = (hi[k] - origin[k]) / dir[k];
        if (ta > tb)
            std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1)
            return std::nullopt;
    }
    return std::make_pair(t0, t1);
}

bool segment_hits_box(Vec3 const& a, Vec3 const& b, ObstacleBox const& box)
{
    Vec3 const dir = b - a;
    auto overlap = line_box_overlap(a, dir, box);
    if (!overlap)
        return false;
    double const t0 = std::max(overlap->first, 0.0);
    double const t1 = std::min(overlap->second, 1.0);
    if (!(t1 > t0))
        return false;
    // Reject segments that only slide along a face or touch an edge
    Vec3 const mid = a + 0.5 * (t0 + t1) * dir;
    Vec3 const lo = box.lower();
    Vec3 const hi = box.upper();
    for (int k = 0; k < 3; ++k)
    {
        double const tol = 1e-12 * (1 + std::abs(hi[k]) + std::abs(lo[k]));
        if (!(mid[k] > lo[k] + tol && mid[k] < hi[k] - tol))
            return false;
    }
    return true;
}

RayHit ray_box_entry(Vec3 const& origin, Vec3 const& dir, ObstacleBox const& box)
{
    Vec3 const lo = box.lower();
    Vec3 const hi = box.upper();
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    BoxFace face = BoxFace::none;
    static constexpr BoxFace low_faces[] = {
        BoxFace::x_low, BoxFace::y_low, BoxFace::z_low};
    static constexpr BoxFace high_faces[] = {
        BoxFace::x_high, BoxFace::y_high, BoxFace::z_high};
    for (int k = 0; k < 3; ++k)
    {
        if (dir[k] == 0)
        {
            if (!(origin[k] > lo[k] && origin[k] < hi[k]))
                return {};
            continue;
        }
        double ta = (lo[k] - origin[k]) / dir[k];
        double tb = (hi[k] - origin[k]) / dir[k];
        BoxFace entry = low_faces[k];
        if (ta > tb)
        {
            std::swap(ta, tb);
            entry = high_faces[k];
        }
        if (ta > t0)
        {
            t0 = ta;
            face = entry;
        }
        t1 = std::min(t1, tb);
    }
    if (!(t1 > t0) || t1 <= 0)
        return {};
    if (t0 <= 0)
        return {0.0, BoxFace::none};  // origin inside
    return {t0, face};
}

std::optional<std::pair<double, double>>
receiver_shadow(Vec3 const& dir, SystemGeometry const& geom, ObstacleBox const& box)
{
    // Points (1 - s) R + q dir with s in [0, 1], q = s tau >= 0 that lie in
    // the box form a convex polygon in (s, q); tau = q / s ranges over an
    // interval whose ends are attained at polygon vertices.
    constexpr double q_cap = 1e12;
    struct P2
    {
        double s, q;
    };
    std::vector<P2> poly{{0, 0}, {1, 0}, {1, q_cap}, {0, q_cap}};
    std::vector<P2> next;

    auto clip = [&](double cs, double cq, double c) {
        // keep cs * s + cq * q <= c
        next.clear();
        std::size_t const n = poly.size();
        for (std::size_t i = 0; i < n; ++i)
        {
            P2 const& p = poly[i];
            P2 const& q = poly[(i + 1) % n];
            double const fp = cs * p.s + cq * p.q - c;
            double const fq = cs * q.s + cq * q.q - c;
            if (fp <= 0)
                next.push_back(p);
            if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0))
            {
                double const t = fp / (fp - fq);
                next.push_back({p.s + t * (q.s - p.s), p.q + t * (q.q - p.q)});
            }
        }
        poly.swap(next);
    };

    Vec3 const rcv = geom.receiver();
    Vec3 const lo = box.lower();
    Vec3 const hi = box.upper();
    for (int k = 0; k < 3 && !poly.empty(); ++k)
    {
        // R_k - s R_k + q d_k <= hi_k  and  >= lo_k
        clip(-rcv[k], dir[k], hi[k] - rcv[k]);
        if (poly.empty())
            break;
        clip(rcv[k], -dir[k], rcv[k] - lo[k]);
    }
    if (poly.size() < 3)
        return std::nullopt;

    double tmin = std::numeric_limits<double>::infinity();
    double tmax = 0;
    for (auto const& p : poly)
    {
        double t;
        if (p.q >= 0.999 * q_cap || p.s <= 1e-15)
            t = std::numeric_limits<double>::infinity();
        else
            t = p.q / p.s;
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    if (!(tmax > tmin))
        return std::nullopt;
    return std::make_pair(tmin, tmax);
}

}  // namespace uvnlos
