// SPDX-License-Identifier: Apache-2.0
//! \file blockage.cpp
#include "uvnlos/blockage.hpp"

#include <algorithm>
#include <cmath>

namespace uvnlos
{
namespace
{
constexpr int idx(Corner m)
{
    return static_cast<int>(m);
}

double interior_angle(Vec3 const& apex, Vec3 const& p, Vec3 const& q)
{
    Vec3 const u = p - apex;
    Vec3 const v = q - apex;
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

//! Law-of-sines bound on the distance from the origin of the frame along a
//! ray at signed angle \c psi_esp before it meets the line through the
//! reference edge point.
double sine_bound(double ref_dist, double interior, double psi_esp, double psi_ref)
{
    double const den = std::sin(psi_esp + interior - psi_ref);
    if (den <= 0)
        return std::numeric_limits<double>::infinity();
    return ref_dist * std::sin(interior) / den;
}

struct Span
{
    double lo;
    double hi;
    bool lo_closed;
    bool hi_closed;

    bool contains(double x) const
    {
        bool const above = lo_closed ? (x >= lo) : (x > lo);
        bool const below = hi_closed ? (x <= hi) : (x < hi);
        return above && below;
    }
};

Span closed(double lo, double hi)
{
    return {lo, hi, true, true};
}
Span left_closed(double lo, double hi)
{
    return {lo, hi, true, false};
}
Span left_open(double lo, double hi)
{
    return {lo, hi, false, true};
}
}  // namespace

//---------------------------------------------------------------------------//
double TxPlaneFrame::signed_angle(Vec3 const& v) const
{
    return std::atan2(v.dot(basis_g), v.dot(basis_f)) - varpi_k;
}

TxPlaneFrame tx_plane_frame(double vartheta,
                            SystemGeometry const& geom,
                            ObstacleBox const& obstacle)
{
    if (!(std::abs(vartheta) < geom.beta_t))
        throw DomainError("tx_plane_frame: |vartheta| must be < beta_t");

    TxPlaneFrame f;
    f.vartheta = vartheta;
    f.delta_t = geom.theta_t + vartheta;

    double const ca = std::cos(geom.alpha_t);
    double const sa = std::sin(geom.alpha_t);
    double const sec2 = 1.0 / (std::cos(vartheta) * std::cos(vartheta));
    double const tb = std::tan(geom.beta_t);
    double const tv = std::tan(vartheta);
    f.phi_t = std::atan(std::sqrt(std::max(0.0, tb * tb - tv * tv))
                        * std::cos(vartheta) / std::cos(f.delta_t));

    double const s2d = std::sin(2 * f.delta_t);
    double const cd = std::cos(f.delta_t);
    double const tphi = std::tan(f.phi_t);
    f.xi_a = -ca * sec2 * s2d * tphi;
    f.xi_b = -sa * sec2 * s2d * tphi;
    f.xi_c = 2 * sec2 * cd * cd * tphi;

    double const yz_norm = std::hypot(f.xi_b, f.xi_c);
    if (!(yz_norm > 1e-300) || !(std::abs(f.xi_c) > 1e-300))
        throw DegenerateFrame("transmitter plane normal has no Y/Z component");

    for (int m = 0; m < 4; ++m)
    {
        Vec3 const c = obstacle.corner(static_cast<Corner>(m));
        double const z = -(f.xi_a * c.x() + f.xi_b * c.y()) / f.xi_c;
        f.edge_points[m] = {c.x(), c.y(), z};
        double const cosv = (c.y() * f.xi_c - z * f.xi_b)
                            / (yz_norm * f.edge_points[m].norm());
        f.psi_edges[m] = std::acos(std::clamp(cosv, -1.0, 1.0));
    }
    f.psi_min = f.psi_edges[idx(Corner::d)];
    f.psi_max = f.psi_edges[idx(Corner::b)];
    f.psi_cc = f.psi_edges[idx(Corner::c)];
    f.psi_interior_dd = interior_angle(f.edge_points[idx(Corner::d)],
                                       geom.transmitter(),
                                       f.edge_points[idx(Corner::c)]);

    f.basis_f = {cd * ca, cd * sa, std::sin(f.delta_t)};
    f.basis_g = {-sa, ca, 0.0};
    f.varpi_k = std::atan(cd * ca / sa);

    auto const [vmin, vmax] = varpi_bounds(vartheta, geom.beta_t);
    f.omega_min = vmin - f.varpi_k;
    f.omega_max = vmax - f.varpi_k;
    f.omega_min_planar = geom.alpha_t + vmin - pi / 2;
    f.omega_max_planar = geom.alpha_t + vmax - pi / 2;
    return f;
}

//---------------------------------------------------------------------------//
double RxPlaneFrame::signed_angle(Vec3 const& v) const
{
    return u_s - std::atan2(v.dot(basis_g), v.dot(basis_l));
}

double aperture_half_angle(double sigma, double beta_r)
{
    if (!(std::abs(sigma) <= beta_r))
        throw DomainError("aperture_half_angle: |sigma| exceeds beta_r");
    double const tb = std::tan(beta_r);
    double const ts = std::tan(sigma);
    return std::atan(std::cos(sigma) * std::sqrt(std::max(0.0, tb * tb - ts * ts)));
}

RxPlaneFrame rx_plane_frame(double sigma,
                            SystemGeometry const& geom,
                            ObstacleBox const& obstacle)
{
    if (!(std::abs(sigma) < geom.beta_r))
        throw DomainError("rx_plane_frame: |sigma| must be < beta_r");

    RxPlaneFrame f;
    f.sigma = sigma;
    f.delta_r = geom.theta_r + sigma;
    f.cap_c = aperture_half_angle(sigma, geom.beta_r);
    f.receiver = geom.receiver();

    double const r = geom.range_r;
    double const ca = std::cos(geom.alpha_r);
    double const sa = std::sin(geom.alpha_r);
    double const sec2 = 1.0 / (std::cos(sigma) * std::cos(sigma));
    double const tb = std::tan(geom.beta_r);
    double const ts = std::tan(sigma);
    f.phi_r = std::atan(std::sqrt(std::max(0.0, tb * tb - ts * ts))
                        * std::cos(sigma) / std::cos(f.delta_r));

    double const s2d = std::sin(2 * f.delta_r);
    double const cd = std::cos(f.delta_r);
    double const tphi = std::tan(f.phi_r);
    f.xi_a = -ca * sec2 * s2d * tphi;
    f.xi_b = -sa * sec2 * s2d * tphi;
    f.xi_c = 2 * sec2 * cd * cd * tphi;

    double const yz_norm = std::hypot(f.xi_b, f.xi_c);
    if (!(yz_norm > 1e-300) || !(std::abs(f.xi_c) > 1e-300))
        throw DegenerateFrame("receiver plane normal has no Y/Z component");

    for (int m = 0; m < 4; ++m)
    {
        Vec3 const c = obstacle.corner(static_cast<Corner>(m));
        double const z
            = (r * f.xi_b - c.y() * f.xi_b - c.x() * f.xi_a) / f.xi_c;
        f.edge_points[m] = {c.x(), c.y(), z};
        double const cosv = (r * f.xi_c - c.y() * f.xi_c + z * f.xi_b)
                            / (yz_norm * (f.edge_points[m] - f.receiver).norm());
        f.psi_edges[m] = std::acos(std::clamp(cosv, -1.0, 1.0));
    }
    f.psi_min = f.psi_edges[idx(Corner::c)];
    f.psi_max = f.psi_edges[idx(Corner::a)];
    f.psi_dd = f.psi_edges[idx(Corner::d)];
    f.psi_interior_cc = interior_angle(f.edge_points[idx(Corner::c)],
                                       f.receiver,
                                       f.edge_points[idx(Corner::d)]);

    f.basis_l = {cd * ca, cd * sa, std::sin(f.delta_r)};
    f.basis_g = {-sa, ca, 0.0};
    f.u_s = std::atan(cd * ca / sa);

    f.omega_min = f.u_s - f.cap_c;
    f.omega_max = f.u_s + f.cap_c;
    f.omega_min_planar = -geom.alpha_r - pi / 2 - f.cap_c;
    f.omega_max_planar = -geom.alpha_r - pi / 2 + f.cap_c;
    return f;
}

double receiver_plane_angle(Vec3 const& point, SystemGeometry const& geom)
{
    Vec3 const rel = point - geom.receiver();
    double const horiz = rel.x() * std::cos(geom.alpha_r)
                         + rel.y() * std::sin(geom.alpha_r);
    return std::atan2(rel.z(), horiz) - geom.theta_r;
}

//---------------------------------------------------------------------------//
int classify_order(double omega_min, double omega_max, double psi_min, double psi_max)
{
    if (std::isnan(omega_min) || std::isnan(omega_max) || std::isnan(psi_min)
        || std::isnan(psi_max))
    {
        throw UnorderedFrame("NaN in case/condition angles");
    }
    constexpr double tol = classify_tolerance;
    auto ge = [](double a, double b) { return a >= b - tol; };
    auto gt = [](double a, double b) { return a > b + tol; };

    double const wn = omega_min, wx = omega_max, pn = psi_min, px = psi_max;
    if (gt(wx, wn) && ge(wn, px) && gt(px, pn))
        return 1;
    if (gt(wx, px) && gt(px, wn) && ge(wn, pn))
        return 2;
    if (gt(wx, px) && gt(px, pn) && ge(pn, wn))
        return 3;
    if (ge(px, wx) && gt(wx, wn) && ge(wn, pn))
        return 4;
    if (ge(px, wx) && gt(wx, pn) && gt(pn, wn))
        return 5;
    if (gt(px, pn) && ge(pn, wx) && gt(wx, wn))
        return 6;
    throw UnorderedFrame("angles admit no table ordering");
}

BlockageClassification classify(TxPlaneFrame const& tx, RxPlaneFrame const& rx)
{
    BlockageClassification cls;
    cls.tx_case = classify_order(tx.omega_min, tx.omega_max, tx.psi_min, tx.psi_max);
    cls.rx_condition
        = classify_order(rx.omega_min, rx.omega_max, rx.psi_min, rx.psi_max);
    return cls;
}

std::string label(BlockageClassification const& cls)
{
    return "Case " + std::to_string(cls.tx_case) + " / Condition "
           + std::to_string(cls.rx_condition);
}

//---------------------------------------------------------------------------//
bool g_wei_paper(ScatterSample const& sample,
                 BlockageClassification& cls,
                 TxPlaneFrame const& tx,
                 RxPlaneFrame const& rx)
{
    Vec3 const rel_r = sample.point_p - rx.receiver;
    double const a = tx.signed_angle(sample.point_p);
    double const b = rx.signed_angle(rel_r);
    cls.psi_t_esp = a;
    cls.psi_r_esp = b;

    int const cs = cls.tx_case;
    int const cn = cls.rx_condition;
    if (cs == 6 || cn == 6)
        return true;

    // The sample lies inside both cones, so the beam/FoV edges never
    // exclude it; widen them by the comparison tolerance.
    constexpr double tol = classify_tolerance;
    double const t_lo = tx.omega_min - tol;
    double const t_hi = tx.omega_max + tol;
    double const r_lo = rx.omega_min - tol;
    double const r_hi = rx.omega_max + tol;

    double const p_min = tx.psi_min;
    double const p_max = tx.psi_max;
    double const p_cc = tx.psi_cc;
    double const q_min = rx.psi_min;
    double const q_max = rx.psi_max;
    double const q_dd = rx.psi_dd;

    Span const tx_low = left_closed(t_lo, p_min);
    Span const tx_high = left_open(p_max, t_hi);
    Span const rx_low = left_closed(r_lo, q_min);
    Span const rx_high = left_open(q_max, r_hi);

    // ||TP|| and ||RP|| distance constraints against the facade CD
    bool const tp_ok = sample.tau
                       < sine_bound(tx.edge_points[idx(Corner::d)].norm(),
                                    tx.psi_interior_dd,
                                    a,
                                    tx.psi_min);
    bool const rp_ok = sample.epsilon
                       < sine_bound((rx.edge_points[idx(Corner::c)] - rx.receiver).norm(),
                                    rx.psi_interior_cc,
                                    b,
                                    rx.psi_min);

    auto rx_facade = [&]() {
        switch (cn)
        {
            case 2:
                return closed(r_lo, q_dd);
            case 3:
                return closed(q_min, q_dd);
            case 4:
                return closed(r_lo, std::min(r_hi, q_dd));
            case 5:
                return closed(q_min, std::min(r_hi, q_dd));
        }
        return Span{0, -1, false, false};
    };
    bool const cond_2_to_5 = (cn >= 2 && cn <= 5);
    auto facade_pair = [&](Span tx_span) {
        return cond_2_to_5 && tx_span.contains(a) && tp_ok
               && rx_facade().contains(b) && rp_ok;
    };

    switch (cs)
    {
        case 1:
            switch (cn)
            {
                case 1:
                    return true;
                case 2:
                    return rx_high.contains(b);
                case 3:
                    return rx_low.contains(b) || rx_high.contains(b);
                case 5:
                    return rx_low.contains(b);
                default:
                    return false;
            }
        case 2: {
            bool always = false;
            if (cn == 1)
                always = tx_high.contains(a);
            if (cn == 2 || cn == 3)
                always = always || (tx_high.contains(a) && rx_high.contains(b));
            if (cn == 3 || cn == 5)
                always = always || rx_low.contains(b);
            return always || facade_pair(closed(t_lo, p_cc));
        }
        case 3: {
            bool always = false;
            if (cn == 1)
                always = tx_low.contains(a) || tx_high.contains(a);
            if (cond_2_to_5)
                always = always || tx_low.contains(a);
            if (cn == 2)
                always = always || (tx_high.contains(a) && rx_high.contains(b));
            if (cn == 5)
                always = always
                         || (closed(p_min, t_hi).contains(a) && rx_low.contains(b));
            if (cn == 3)
            {
                always = always
                         || (rx_low.contains(b) && closed(p_min, p_max).contains(a))
                         || ((rx_low.contains(b) || rx_high.contains(b))
                             && tx_high.contains(a));
            }
            return always || facade_pair(closed(p_min, p_cc));
        }
        case 4: {
            bool const always = (cn == 3 || cn == 5) && rx_low.contains(b);
            return always || facade_pair(closed(t_lo, std::min(t_hi, p_cc)));
        }
        case 5: {
            bool always = false;
            if (cn >= 1 && cn <= 5)
                always = tx_low.contains(a);
            if (cn == 3 || cn == 5)
                always = always
                         || (closed(p_min, t_hi).contains(a) && rx_low.contains(b));
            return always || facade_pair(closed(p_min, std::min(t_hi, p_cc)));
        }
        default:
            return false;
    }
}

bool g_wei_paper(ScatterSample const& sample,
                 SystemGeometry const& geom,
                 ObstacleBox const& obstacle,
                 BlockageClassification* cls_out)
{
    TxPlaneFrame const tx = tx_plane_frame(sample.vartheta, geom, obstacle);
    RxPlaneFrame const rx = rx_plane_frame(
        receiver_plane_angle(sample.point_p, geom), geom, obstacle);
    BlockageClassification cls = classify(tx, rx);
    bool const result = g_wei_paper(sample, cls, tx, rx);
    if (cls_out)
        *cls_out = cls;
    return result;
}

bool g_wei_oracle(Vec3 const& point_p,
                  SystemGeometry const& geom,
                  ObstacleBox const& obstacle)
{
    return !segment_hits_box(geom.transmitter(), point_p, obstacle)
           && !segment_hits_box(point_p, geom.receiver(), obstacle);
}

char const* to_string(GweiMode mode)
{
    return mode == GweiMode::paper ? "paper" : "exact";
}

GweiMode gwei_mode_from_string(std::string const& s)
{
    if (s == "paper")
        return GweiMode::paper;
    if (s == "exact")
        return GweiMode::exact;
    throw DomainError("unknown weighting-factor evaluator '" + s
                      + "' (expected paper|exact)");
}

}  // namespace uvnlos
