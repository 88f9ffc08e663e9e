// SPDX-License-Identifier: Apache-2.0
//! \file reflection.cpp
#include "uvnlos/reflection.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "uvnlos/parallel.hpp"
#include "uvnlos/quadrature.hpp"

namespace uvnlos
{
namespace
{
constexpr int support_probes = 257;
constexpr int bisection_steps = 60;

double clamp_unit(double x)
{
    return std::clamp(x, -1.0, 1.0);
}

//! Part of the vertical segment (x, y, z), z in [z0, z1], inside a cone.
struct ZRange
{
    double lo{0};
    double hi{-1};
    bool empty() const { return !(hi > lo); }
};

ZRange cone_z_range(double x,
                    double y,
                    double z0,
                    double z1,
                    Vec3 const& apex,
                    Vec3 const& axis,
                    double cos_half)
{
    Vec3 const rel0{x - apex.x(), y - apex.y(), -apex.z()};
    double const u0 = axis.dot(rel0);
    double const q0 = rel0.x() * rel0.x() + rel0.y() * rel0.y();
    double const nz = axis.z();
    double const c2 = cos_half * cos_half;
    double const A = nz * nz - c2;
    double const B = 2 * u0 * nz;
    // (u0 + nz z)^2 - c^2 (q0 + (z - apex_z)^2) with apex_z = 0
    double const C = u0 * u0 - c2 * (q0 + apex.z() * apex.z());

    auto inside = [&](double z) {
        Vec3 const rel{rel0.x(), rel0.y(), z - apex.z()};
        return axis.dot(rel) >= cos_half * rel.norm();
    };

    std::array<double, 4> cuts{};
    int n = 0;
    cuts[n++] = z0;
    double const scale = std::abs(A) + std::abs(B) + std::abs(C);
    if (std::abs(A) <= 1e-14 * scale)
    {
        if (B != 0)
        {
            double const r = -C / B;
            if (r > z0 && r < z1)
                cuts[n++] = r;
        }
    }
    else
    {
        double const disc = B * B - 4 * A * C;
        if (disc >= 0)
        {
            double const sq = std::sqrt(disc);
            double const q = -0.5 * (B + (B >= 0 ? sq : -sq));
            double r1 = q / A;
            double r2 = (q != 0) ? C / q : r1;
            if (r1 > r2)
                std::swap(r1, r2);
            for (double r : {r1, r2})
            {
                if (r > z0 && r < z1)
                    cuts[n++] = r;
            }
        }
    }
    cuts[n++] = z1;

    ZRange out;
    bool found = false;
    for (int i = 0; i + 1 < n; ++i)
    {
        if (!(cuts[i + 1] > cuts[i]))
            continue;
        if (!inside(0.5 * (cuts[i] + cuts[i + 1])))
            continue;
        if (!found)
            out.lo = cuts[i];
        out.hi = cuts[i + 1];
        found = true;
    }
    return out;
}

//! Active z-range of the reflection region on the line at y, with the
//! binding constraint at each end (0 facade, 1 beam, 2 FoV).
struct Column
{
    ZRange range;
    int signature{0};
};

Column column(double y, SystemGeometry const& geom, ReflectionSurface const& surf)
{
    double const x = surf.plane_x;
    ZRange const t = cone_z_range(x,
                                  y,
                                  surf.z_lo,
                                  surf.z_hi,
                                  geom.transmitter(),
                                  geom.tx_axis(),
                                  std::cos(geom.beta_t));
    ZRange const r = cone_z_range(x,
                                  y,
                                  surf.z_lo,
                                  surf.z_hi,
                                  geom.receiver(),
                                  geom.rx_axis(),
                                  std::cos(geom.beta_r));
    Column col;
    if (t.empty() || r.empty())
        return col;
    col.range.lo = std::max(t.lo, r.lo);
    col.range.hi = std::min(t.hi, r.hi);
    if (col.range.empty())
        return col;
    auto source = [&](double v, double facade, double beam) {
        if (v == facade)
            return 0;
        return v == beam ? 1 : 2;
    };
    col.signature = 1 + source(col.range.lo, surf.z_lo, t.lo)
                    + 3 * source(col.range.hi, surf.z_hi, t.hi);
    return col;
}

template<class Pred>
double bisect(Pred&& pred, double a, double b)
{
    bool const pa = pred(a);
    for (int i = 0; i < bisection_steps; ++i)
    {
        double const m = 0.5 * (a + b);
        if (m <= std::min(a, b) || m >= std::max(a, b))
            break;
        if (pred(m) == pa)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

//! Breakpoints of the y integral: support ends and constraint switches.
std::vector<double> y_breaks(SystemGeometry const& geom, ReflectionSurface const& surf)
{
    double const a = surf.y_lo;
    double const b = surf.y_hi;
    std::vector<double> ys(support_probes);
    std::vector<int> sig(support_probes);
    for (int i = 0; i < support_probes; ++i)
    {
        ys[i] = a + (b - a) * i / (support_probes - 1);
        sig[i] = column(ys[i], geom, surf).signature;
    }
    auto signature = [&](double y) { return column(y, geom, surf).signature; };

    std::vector<double> breaks;
    for (int i = 0; i < support_probes; ++i)
    {
        if (sig[i] != 0 && (i == 0 || i + 1 == support_probes))
            breaks.push_back(ys[i]);
        if (i > 0 && sig[i] != sig[i - 1])
        {
            int const ref = sig[i - 1];
            breaks.push_back(bisect(
                [&](double y) { return signature(y) == ref; }, ys[i - 1], ys[i]));
        }
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> out;
    for (double v : breaks)
    {
        if (out.empty() || v - out.back() > 1e-12 * (1 + std::abs(v)))
            out.push_back(v);
    }
    return out;
}

}  // namespace

//---------------------------------------------------------------------------//
ReflectionSurface ReflectionSurface::facade(ObstacleBox const& obstacle,
                                            double r_r,
                                            double m_s,
                                            double eta)
{
    ReflectionSurface s;
    s.r_r = r_r;
    s.m_s = m_s;
    s.eta = eta;
    s.plane_x = obstacle.x_near();
    s.y_lo = obstacle.y_low();
    s.y_hi = obstacle.y_high();
    s.z_lo = 0;
    s.z_hi = obstacle.height_kappa;
    return s;
}

ValidityReport validate_surface(ReflectionSurface const& surface)
{
    ValidityReport report;
    auto& v = report.violations;
    if (!(surface.r_r >= 0 && surface.r_r <= 1))
        v.push_back("r_r must lie in [0, 1]");
    if (!(surface.eta >= 0 && surface.eta <= 1))
        v.push_back("eta must lie in [0, 1]");
    if (!(surface.m_s >= 0))
        v.push_back("m_s must be >= 0");
    if (!(surface.y_lo < surface.y_hi))
        v.push_back("facade y span is empty");
    if (!(surface.z_lo < surface.z_hi))
        v.push_back("facade z span is empty");
    return report;
}

ReflectionPatchSample reflection_patch(double y,
                                       double z,
                                       SystemGeometry const& geom,
                                       ReflectionSurface const& surface)
{
    ReflectionPatchSample p;
    p.point = {surface.plane_x, y, z};
    p.tau_vec = p.point - geom.transmitter();
    p.tau = p.tau_vec.norm();
    p.eps_vec = geom.receiver() - p.point;
    p.epsilon = p.eps_vec.norm();
    if (!(p.tau > 0) || !(p.epsilon > 0))
        throw DomainError("reflection_patch: patch coincides with a terminal");

    Vec3 const n = surface.normal;
    Vec3 const t_hat = p.tau_vec / p.tau;
    Vec3 const e_hat = p.eps_vec / p.epsilon;
    p.cos_omega_i = -n.dot(t_hat);
    p.omega_i = std::acos(clamp_unit(p.cos_omega_i));
    p.v_s = t_hat - 2 * t_hat.dot(n) * n;
    p.theta_1 = std::acos(clamp_unit(e_hat.dot(n)));
    p.theta_2 = std::acos(clamp_unit(e_hat.dot(p.v_s)));
    p.cos_theta_v = clamp_unit(-e_hat.dot(geom.rx_axis()));
    p.theta_v = std::acos(p.cos_theta_v);
    return p;
}

bool in_reflection_region(Vec3 const& point,
                          SystemGeometry const& geom,
                          ObstacleBox const& obstacle)
{
    if (point.y() < obstacle.y_low() || point.y() > obstacle.y_high())
        return false;
    if (point.z() < 0 || point.z() > obstacle.height_kappa)
        return false;
    double const tau = point.norm();
    Vec3 const rel = point - geom.receiver();
    double const eps = rel.norm();
    if (!(tau > 0) || !(eps > 0))
        return false;
    return geom.tx_axis().dot(point) / tau >= std::cos(geom.beta_t)
           && geom.rx_axis().dot(rel) / eps >= std::cos(geom.beta_r);
}

double phong_intensity(double theta_1, double theta_2, double eta, double m_s)
{
    if (!(theta_1 >= 0 && theta_1 <= pi / 2))
        throw DomainError("phong_intensity: theta_1 outside [0, pi/2]");
    if (!(theta_2 >= 0 && theta_2 <= pi))
        throw DomainError("phong_intensity: theta_2 outside [0, pi]");
    double const diffuse = eta * std::cos(theta_1) / pi;
    double const c2 = std::cos(theta_2);
    double const lobe = c2 >= 0 ? std::pow(c2, m_s) : 0.0;
    return diffuse + (1 - eta) * (m_s + 1) / (2 * pi) * lobe;
}

double reflection_integrand(ReflectionPatchSample const& patch,
                            SystemGeometry const& geom,
                            Atmosphere const& atm,
                            ReflectionSurface const& surface)
{
    double const solid = 2 * pi * (1 - std::cos(geom.beta_t));
    double const i_r
        = phong_intensity(patch.theta_1, patch.theta_2, surface.eta, surface.m_s);
    return surface.r_r * geom.pulse_energy * geom.aperture_area * i_r
           * patch.cos_theta_v * patch.cos_omega_i
           * std::exp(-atm.ke() * (patch.tau + patch.epsilon))
           / (solid * patch.tau * patch.tau * patch.epsilon * patch.epsilon);
}

//---------------------------------------------------------------------------//
ReflectionResult reflected_energy(SystemGeometry const& geom,
                                  Atmosphere const& atm,
                                  ObstacleBox const& obstacle,
                                  ReflectionSurface const& surface,
                                  QuadratureSpec const& quad)
{
    ValidityReport report = validate_obstacle(geom, obstacle);
    for (ValidityReport const& r :
         {validate_atmosphere(atm), validate_surface(surface), validate_quadrature(quad)})
    {
        report.violations.insert(
            report.violations.end(), r.violations.begin(), r.violations.end());
    }
    if (!report.ok())
        throw InvalidGeometry(report.summary());

    ReflectionResult result;
    ReflectionDiagnostics& diag = result.diagnostics;
    diag.facade_area = (surface.y_hi - surface.y_lo) * (surface.z_hi - surface.z_lo);

    std::vector<double> const breaks = y_breaks(geom, surface);
    std::vector<double> nodes;
    std::vector<double> weights;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
    {
        double const mid = 0.5 * (breaks[k] + breaks[k + 1]);
        if (column(mid, geom, surface).range.empty())
            continue;
        QuadRule const rule = cosine_mapped(breaks[k], breaks[k + 1], quad.n_vartheta);
        nodes.insert(nodes.end(), rule.nodes.begin(), rule.nodes.end());
        weights.insert(weights.end(), rule.weights.begin(), rule.weights.end());
    }
    if (nodes.empty() || surface.r_r == 0)
    {
        diag.empty_region = nodes.empty();
        return result;
    }

    struct Row
    {
        double energy{0};
        double area{0};
        std::size_t nodes{0};
        std::size_t active{0};
    };
    std::vector<Row> rows(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
        double const y = nodes[i];
        Column const col = column(y, geom, surface);
        if (col.range.empty())
            return;
        QuadRule const rule = cosine_mapped(col.range.lo, col.range.hi, quad.n_varpi);
        Row& row = rows[i];
        for (std::size_t j = 0; j < rule.size(); ++j)
        {
            ReflectionPatchSample const p
                = reflection_patch(y, rule.nodes[j], geom, surface);
            ++row.nodes;
            if (!in_reflection_region(p.point, geom, obstacle))
                continue;
            ++row.active;
            row.area += rule.weights[j];
            row.energy += rule.weights[j] * reflection_integrand(p, geom, atm, surface);
        }
    });

    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        result.q_ref += weights[i] * rows[i].energy;
        diag.region_area += weights[i] * rows[i].area;
        diag.nodes += rows[i].nodes;
        diag.active_nodes += rows[i].active;
    }
    return result;
}

}  // namespace uvnlos
