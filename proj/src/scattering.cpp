// SPDX-License-Identifier: Apache-2.0
//! \file scattering.cpp
#include "uvnlos/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "uvnlos/parallel.hpp"
#include "uvnlos/quadrature.hpp"

namespace uvnlos
{
namespace
{
constexpr int support_probes = 33;
constexpr int signature_probes = 48;
constexpr int bisection_steps = 60;

//! Maximum of a quasi-concave function on [a, b]: coarse scan, then golden
//! section around the best probe.
std::pair<double, double>
maximize(std::function<double(double)> const& fn, double a, double b)
{
    double best_x = a;
    double best_f = -std::numeric_limits<double>::infinity();
    double const h = (b - a) / (support_probes - 1);
    for (int i = 0; i < support_probes; ++i)
    {
        double const x = (i + 1 == support_probes) ? b : a + i * h;
        double const v = fn(x);
        if (v > best_f)
        {
            best_f = v;
            best_x = x;
        }
    }
    double lo = std::max(a, best_x - h);
    double hi = std::min(b, best_x + h);
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = fn(x1);
    double f2 = fn(x2);
    for (int i = 0; i < bisection_steps; ++i)
    {
        if (f1 < f2)
        {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = fn(x2);
        }
        else
        {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = fn(x1);
        }
    }
    if (f1 > best_f)
        return {x1, f1};
    if (f2 > best_f)
        return {x2, f2};
    return {best_x, best_f};
}

//! Point where pred changes value between a (pred(a) == pa) and b.
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

//! Positive part of the support of fn on [a, b] given an interior point
//! where it is positive.
std::pair<double, double> support_edges(std::function<double(double)> const& fn,
                                        double a,
                                        double b,
                                        double inside)
{
    auto positive = [&](double x) { return fn(x) > 0; };
    double const lo = positive(a) ? a : bisect(positive, a, inside);
    double const hi = positive(b) ? b : bisect(positive, b, inside);
    return {lo, hi};
}

//! Plane rotation and in-plane angle of an arbitrary direction from T.
std::pair<double, double> beam_coordinates(Vec3 const& u, SystemGeometry const& geom)
{
    double const ca = std::cos(geom.alpha_t);
    double const sa = std::sin(geom.alpha_t);
    double const delta = std::atan2(u.z(), ca * u.x() + sa * u.y());
    Vec3 const f{std::cos(delta) * ca, std::cos(delta) * sa, std::sin(delta)};
    Vec3 const g{-sa, ca, 0.0};
    return {delta - geom.theta_t, std::atan2(u.dot(g), u.dot(f))};
}

//---------------------------------------------------------------------------//
struct Context
{
    SystemGeometry const& geom;
    Atmosphere const& atm;
    ObstacleBox const* obstacle;
    QuadratureSpec const& quad;
};

//! Tau breakpoints along one ray: receiver FoV limits, obstacle
//! transitions and the closest approach to R.
struct RayLayout
{
    bool empty{true};
    bool truncated{false};
    std::vector<double> cuts;
    int signature{0};
};

RayLayout layout_ray(Vec3 const& dir, Context const& ctx)
{
    RayLayout out;
    TauInterval const fov = tau_interval_dir(dir, ctx.geom);
    if (fov.empty())
        return out;
    out.empty = false;
    double const lo = fov.lo;
    double hi = fov.hi;
    if (!fov.bounded())
    {
        hi = lo + ctx.quad.tau_truncation / ctx.atm.ke();
        out.truncated = true;
    }

    int sig = fov.bounded() ? 1 : 2;
    int mult = 3;
    std::vector<double> events;
    auto place = [&](double t) {
        int const s = (t <= lo) ? 0 : (t < hi ? 1 : 2);
        if (s == 1)
            events.push_back(t);
        sig += mult * s;
        mult *= 3;
    };
    if (ctx.obstacle)
    {
        RayHit const hit = ray_box_entry(Vec3::Zero(), dir, *ctx.obstacle);
        place(hit.face == BoxFace::none ? hi : hit.t);
        auto const shadow = receiver_shadow(dir, ctx.geom, *ctx.obstacle);
        place(shadow ? shadow->first : hi);
        place(shadow ? shadow->second : hi);
    }
    out.signature = sig;

    double const t_close = dir.dot(ctx.geom.receiver());
    if (t_close > lo && t_close < hi)
        events.push_back(t_close);

    std::sort(events.begin(), events.end());
    out.cuts.push_back(lo);
    for (double t : events)
    {
        if (t - out.cuts.back() > 1e-12 * (1 + hi))
            out.cuts.push_back(t);
    }
    if (hi - out.cuts.back() > 1e-12 * (1 + hi))
        out.cuts.push_back(hi);
    else
        out.cuts.back() = hi;
    return out;
}

//! Breakpoints of the varpi integral for one plane; empty if the plane
//! misses the overlap volume.
std::vector<double> varpi_breaks(double vartheta, Context const& ctx)
{
    SystemGeometry const& geom = ctx.geom;
    auto const [vmin, vmax] = varpi_bounds(vartheta, geom.beta_t);
    if (!(vmax > vmin))
        return {};
    std::function<double(double)> margin = [&](double varpi) {
        return fov_margin(beam_direction(varpi, vartheta, geom), geom);
    };
    auto const [arg, best] = maximize(margin, vmin, vmax);
    if (!(best > 0))
        return {};
    auto const [lo, hi] = support_edges(margin, vmin, vmax, arg);

    std::vector<double> breaks{lo, hi};
    auto signature = [&](double varpi) {
        return layout_ray(beam_direction(varpi, vartheta, geom), ctx).signature;
    };
    double prev_x = lo + (hi - lo) * 0.5 / signature_probes;
    int prev_sig = signature(prev_x);
    for (int i = 1; i < signature_probes; ++i)
    {
        double const x = lo + (hi - lo) * (i + 0.5) / signature_probes;
        int const sig = signature(x);
        if (sig != prev_sig)
        {
            int const ref = prev_sig;
            breaks.push_back(bisect(
                [&](double v) { return signature(v) == ref; }, prev_x, x));
        }
        prev_x = x;
        prev_sig = sig;
    }

    // In-plane direction closest to R carries the 1/epsilon^2 ridge
    Vec3 const to_r = geom.receiver().normalized();
    double const cd = std::cos(geom.theta_t + vartheta);
    Vec3 const f{cd * std::cos(geom.alpha_t),
                 cd * std::sin(geom.alpha_t),
                 std::sin(geom.theta_t + vartheta)};
    Vec3 const g{-std::sin(geom.alpha_t), std::cos(geom.alpha_t), 0.0};
    double const ridge = std::atan2(to_r.dot(g), to_r.dot(f));
    if (ridge > lo && ridge < hi)
        breaks.push_back(ridge);

    std::sort(breaks.begin(), breaks.end());
    std::vector<double> out;
    for (double b : breaks)
    {
        if (out.empty() || b - out.back() > 1e-13)
            out.push_back(b);
    }
    return out;
}

//! Outer breakpoints in vartheta.
std::vector<double> vartheta_breaks(Context const& ctx)
{
    SystemGeometry const& geom = ctx.geom;
    double const bt = geom.beta_t;
    // Keep strictly inside the beam so plane frames stay defined
    double const a = -bt * (1 - 1e-12);
    double const b = bt * (1 - 1e-12);
    std::function<double(double)> peak = [&](double vartheta) {
        auto const [vmin, vmax] = varpi_bounds(vartheta, bt);
        std::function<double(double)> margin = [&](double varpi) {
            return fov_margin(beam_direction(varpi, vartheta, geom), geom);
        };
        if (!(vmax > vmin))
            return margin(0.0);
        return maximize(margin, vmin, vmax).second;
    };
    auto const [arg, best] = maximize(peak, a, b);
    if (!(best > 0))
        return {};
    auto const [lo, hi] = support_edges(peak, a, b, arg);

    std::vector<double> breaks{lo, hi};
    auto const [ridge, ridge_varpi] = beam_coordinates(geom.receiver().normalized(), geom);
    (void)ridge_varpi;
    if (ridge > lo && ridge < hi)
        breaks.push_back(ridge);
    std::sort(breaks.begin(), breaks.end());
    return breaks;
}

//! Weighting factor evaluator bound to one plane.
struct Weighting
{
    Context const& ctx;
    TxPlaneFrame const* tx{nullptr};

    bool operator()(ScatterSample const& s, ScatterDiagnostics& diag) const
    {
        if (!ctx.obstacle)
            return true;
        bool const exact = g_wei_oracle(s.point_p, ctx.geom, *ctx.obstacle);
        if (ctx.quad.gwei == GweiMode::exact)
            return exact;
        double const br = ctx.geom.beta_r * (1 - 1e-12);
        double const sigma
            = std::clamp(receiver_plane_angle(s.point_p, ctx.geom), -br, br);
        RxPlaneFrame const rx = rx_plane_frame(sigma, ctx.geom, *ctx.obstacle);
        BlockageClassification cls = classify(*tx, rx);
        bool const paper = g_wei_paper(s, cls, *tx, rx);
        if (paper != exact)
            ++diag.gwei_mismatches;
        return paper;
    }
};

double integrate_ray(double varpi,
                     double vartheta,
                     Context const& ctx,
                     Weighting const& weight,
                     ScatterDiagnostics& diag)
{
    SystemGeometry const& geom = ctx.geom;
    Vec3 const dir = beam_direction(varpi, vartheta, geom);
    RayLayout const layout = layout_ray(dir, ctx);
    if (layout.empty)
        return 0;
    if (layout.truncated)
        diag.truncation_bound = geom.pulse_energy
                                * std::exp(-ctx.quad.tau_truncation);

    Vec3 const rcv = geom.receiver();
    double const scale_floor = 1e-9 * geom.range_r;
    double sum = 0;
    for (std::size_t k = 0; k + 1 < layout.cuts.size(); ++k)
    {
        double const a = layout.cuts[k];
        double const b = layout.cuts[k + 1];
        double const eps_a = (a * dir - rcv).norm();
        double const eps_b = (b * dir - rcv).norm();
        bool const toward_end = eps_b < eps_a;
        double const scale = std::max(std::min(eps_a, eps_b), scale_floor);
        QuadRule const rule = log_mapped(a, b, scale, ctx.quad.n_tau);
        for (std::size_t i = 0; i < rule.size(); ++i)
        {
            double const tau = toward_end ? a + b - rule.nodes[i] : rule.nodes[i];
            if (!(tau > 0))
                continue;
            ScatterSample const s = scatter_point(tau, varpi, vartheta, geom);
            if (s.epsilon < ctx.quad.epsilon_floor)
            {
                ++diag.epsilon_underflows;
                continue;
            }
            ++diag.nodes;
            if (!weight(s, diag))
            {
                ++diag.blocked_nodes;
                continue;
            }
            sum += rule.weights[i] * kernel(s, geom, ctx.atm);
        }
    }
    return sum;
}

}  // namespace

//---------------------------------------------------------------------------//
ValidityReport validate_atmosphere(Atmosphere const& atm)
{
    ValidityReport report;
    auto& v = report.violations;
    if (!(atm.ks_ray >= 0))
        v.push_back("ks_ray must be >= 0");
    if (!(atm.ks_mie >= 0))
        v.push_back("ks_mie must be >= 0");
    if (!(atm.ka >= 0))
        v.push_back("ka must be >= 0");
    if (!(atm.ks() > 0))
        v.push_back("ks = ks_ray + ks_mie must be > 0");
    if (!(atm.g > -1 && atm.g < 1))
        v.push_back("g must lie in (-1, 1)");
    if (!(atm.f >= 0 && atm.f <= 1))
        v.push_back("f must lie in [0, 1]");
    if (!(atm.gamma >= 0))
        v.push_back("gamma must be >= 0");
    return report;
}

QuadratureSpec QuadratureSpec::doubled() const
{
    QuadratureSpec q = *this;
    q.n_vartheta *= 2;
    q.n_varpi *= 2;
    q.n_tau *= 2;
    return q;
}

ValidityReport validate_quadrature(QuadratureSpec const& quad)
{
    ValidityReport report;
    auto& v = report.violations;
    if (quad.n_vartheta < 2 || quad.n_varpi < 2 || quad.n_tau < 2)
        v.push_back("node counts must be >= 2");
    if (!(quad.tau_truncation > 0))
        v.push_back("tau_truncation must be > 0");
    if (!(quad.epsilon_floor > 0))
        v.push_back("epsilon_floor must be > 0");
    return report;
}

//---------------------------------------------------------------------------//
double phase_rayleigh(double mu, double gamma)
{
    if (!(mu >= -1 && mu <= 1))
        throw DomainError("phase_rayleigh: mu outside [-1, 1]");
    return 3 * (1 + 3 * gamma + (1 - gamma) * mu * mu)
           / (16 * pi * (1 + 2 * gamma));
}

double phase_mie(double mu, double g, double f)
{
    if (!(mu >= -1 && mu <= 1))
        throw DomainError("phase_mie: mu outside [-1, 1]");
    if (!(std::abs(g) < 1))
        throw DomainError("phase_mie: |g| must be < 1");
    double const g2 = g * g;
    double const hg = std::pow(1 + g2 - 2 * g * mu, -1.5);
    double const corr = f * (3 * mu * mu - 1) / (2 * std::pow(1 + g2, 1.5));
    return (1 - g2) / (4 * pi) * (hg + corr);
}

double phase(double mu, Atmosphere const& atm)
{
    double const ks = atm.ks();
    if (!(ks > 0))
        throw ZeroScattering("total scattering coefficient is zero");
    return (atm.ks_ray / ks) * phase_rayleigh(mu, atm.gamma)
           + (atm.ks_mie / ks) * phase_mie(mu, atm.g, atm.f);
}

double kernel(ScatterSample const& s, SystemGeometry const& geom, Atmosphere const& atm)
{
    double const solid = 2 * pi * (1 - std::cos(geom.beta_t));
    return geom.pulse_energy * s.cos_theta_v * phase(s.cos_theta_s, atm)
           * std::exp(-atm.ke() * (s.tau + s.epsilon)) * geom.aperture_area
           * atm.ks() * std::cos(s.varpi) / (solid * s.epsilon * s.epsilon);
}

//---------------------------------------------------------------------------//
ScatterResult scattered_energy(SystemGeometry const& geom,
                               Atmosphere const& atm,
                               ObstacleBox const* obstacle,
                               QuadratureSpec const& quad)
{
    ValidityReport report = validate_system(geom);
    auto merge = [&report](ValidityReport const& other) {
        report.violations.insert(report.violations.end(),
                                 other.violations.begin(),
                                 other.violations.end());
    };
    merge(validate_atmosphere(atm));
    merge(validate_quadrature(quad));
    if (obstacle)
    {
        ValidityReport const scene = quad.gwei == GweiMode::paper
                                         ? validate_geometry(geom, *obstacle)
                                         : validate_obstacle(geom, *obstacle);
        for (auto const& v : scene.violations)
        {
            if (std::find(report.violations.begin(), report.violations.end(), v)
                == report.violations.end())
                report.violations.push_back(v);
        }
    }
    if (!report.ok())
        throw InvalidGeometry(report.summary());

    Context const ctx{geom, atm, obstacle, quad};
    ScatterResult result;
    std::vector<double> const outer = vartheta_breaks(ctx);
    if (outer.empty())
    {
        result.diagnostics.empty_overlap = true;
        return result;
    }

    std::vector<double> nodes;
    std::vector<double> weights;
    for (std::size_t k = 0; k + 1 < outer.size(); ++k)
    {
        QuadRule const rule = cosine_mapped(outer[k], outer[k + 1], quad.n_vartheta);
        nodes.insert(nodes.end(), rule.nodes.begin(), rule.nodes.end());
        weights.insert(weights.end(), rule.weights.begin(), rule.weights.end());
    }

    std::vector<double> partial(nodes.size(), 0.0);
    std::vector<ScatterDiagnostics> diags(nodes.size());
    bool const paper = obstacle && quad.gwei == GweiMode::paper;
    parallel_for(nodes.size(), [&](std::size_t i) {
        double const vartheta = nodes[i];
        std::optional<TxPlaneFrame> tx;
        if (paper)
            tx = tx_plane_frame(vartheta, geom, *obstacle);
        Weighting const weight{ctx, tx ? &*tx : nullptr};

        std::vector<double> const inner = varpi_breaks(vartheta, ctx);
        double sum = 0;
        for (std::size_t k = 0; k + 1 < inner.size(); ++k)
        {
            QuadRule const rule
                = cosine_mapped(inner[k], inner[k + 1], quad.n_varpi);
            for (std::size_t j = 0; j < rule.size(); ++j)
            {
                sum += rule.weights[j]
                       * integrate_ray(rule.nodes[j], vartheta, ctx, weight, diags[i]);
            }
        }
        partial[i] = weights[i] * sum;
    });

    ScatterDiagnostics& d = result.diagnostics;
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        result.q_sca += partial[i];
        d.nodes += diags[i].nodes;
        d.blocked_nodes += diags[i].blocked_nodes;
        d.gwei_mismatches += diags[i].gwei_mismatches;
        d.epsilon_underflows += diags[i].epsilon_underflows;
        d.truncation_bound = std::max(d.truncation_bound, diags[i].truncation_bound);
    }
    return result;
}

}  // namespace uvnlos
