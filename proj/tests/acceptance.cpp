// SPDX-License-Identifier: Apache-2.0
//! \file acceptance.cpp
//! Acceptance suite: one PASS or FAIL line per criterion, with the
//! measured values on indented lines before it. Exits 0 once every
//! criterion has been evaluated; with --strict any FAIL gives exit 1.
//! --report <path> also writes the lines to a file.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "blockage_sampling.hpp"
#include "scenes.hpp"
#include "uvnlos/mcpt.hpp"

using namespace uvnlos;

namespace
{
int g_failed = 0;
std::FILE* g_report = nullptr;

//! Line to stdout and, when requested, to the report file.
template<class... Args>
void emit(char const* fmt, Args... args)
{
    char buf[1024];
    std::snprintf(buf, sizeof buf, fmt, args...);
    std::fputs(buf, stdout);
    std::fputc('\n', stdout);
    std::fflush(stdout);
    if (g_report)
    {
        std::fputs(buf, g_report);
        std::fputc('\n', g_report);
        std::fflush(g_report);
    }
}

void verdict(int id, bool pass, char const* what)
{
    emit("[%s] criterion %d: %s", pass ? "PASS" : "FAIL", id, what);
    g_failed += !pass;
}

template<class... Args>
void note(char const* fmt, Args... args)
{
    emit((std::string("    ") + fmt).c_str(), args...);
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

McptEstimate trace_scene(Scene const& s, McptSpec const& spec)
{
    if (!s.obstacle)
        return trace(s.geom, s.atm, nullptr, nullptr, spec);
    ReflectionSurface const surf = s.surface();
    return trace(s.geom, s.atm, &*s.obstacle, &surf, spec);
}

//---------------------------------------------------------------------------//
void headline()
{
    bool pass = true;
    for (char const* name : {"table3-scenario1", "table3-scenario1-symmetric"})
    {
        Scene const s = test::preset_scene(name).at_range(100);
        auto const t0 = std::chrono::steady_clock::now();
        ChannelResult const with = s.evaluate();
        double const t_point = seconds_since(t0);
        ChannelResult const open = no_obstacle_baseline(s.geom, s.atm, s.quad);
        double const d_total = with.path_loss_db - 93.81;
        double const d_base = open.path_loss_db - 98.55;
        bool const ok = std::abs(d_total) <= 1.0 && std::abs(d_base) <= 1.0;
        note("%s (theta_t %.0f deg, theta_r %.0f deg): total %.2f dB (%+.2f), "
             "baseline %.2f dB (%+.2f), point %.2f s",
             name, rad_to_deg(s.geom.theta_t), rad_to_deg(s.geom.theta_r),
             with.path_loss_db, d_total, open.path_loss_db, d_base, t_point);
        // The channel preset pair is the first scenario; the symmetric
        // reading is reported for reference only
        if (std::string(name) == "table3-scenario1")
            pass = ok && t_point < 10;
    }
    verdict(1, pass, "headline path loss 93.81 dB and baseline 98.55 dB within 1.0 dB");
}

void mcpt_agreement()
{
    McptSpec spec;
    spec.n_photons = 10000000;
    bool pass = true;
    for (char const* name : {"table3-scenario1", "table3-scenario2"})
    {
        Scene const base = test::preset_scene(name);
        for (double r : {50.0, 100.0, 150.0, 200.0})
        {
            Scene const s = base.at_range(r);
            auto const t0 = std::chrono::steady_clock::now();
            double const pl = s.evaluate().path_loss_db;
            McptEstimate const est = trace_scene(s, spec);
            double const delta = pl - est.path_loss_db;
            bool const ok = std::abs(delta) <= 0.3 && est.std_error_db < 0.1;
            pass = pass && ok;
            note("%s r=%.0f m: analytic %.3f dB, mcpt %.3f dB +- %.3f, delta %+.3f (%.0f s)",
                 name, r, pl, est.path_loss_db, est.std_error_db, delta, seconds_since(t0));
        }
    }
    verdict(2, pass, "analytic and photon tracer within 0.3 dB at 1e7 photons, stderr < 0.1 dB");
}

void blockage_equivalence()
{
    test::BlockageComparison const cmp = test::compare_blockage(100000, 2024, 1e-9);
    for (auto const& line : cmp.log)
        note("disagreement: %s", line.c_str());
    double const agree
        = 1.0 - static_cast<double>(cmp.disagreements) / static_cast<double>(cmp.samples);
    note("%ld samples, %ld blocked, %ld skipped near boundaries, %ld disagreements, "
         "agreement %.6f",
         cmp.samples, cmp.blocked, cmp.skipped_near_boundary, cmp.disagreements, agree);
    for (auto const& [name, count] : cmp.disagreements_per_label)
        note("  %s: %ld", name.c_str(), count);
    verdict(3, cmp.samples == 100000 && agree >= 0.9999,
            "closed-form weighting factor agrees with segment test on >= 99.99%");
}

void jacobian_property()
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    int const n = 10000;
    for (int i = 0; i < n; ++i)
    {
        SystemGeometry g = (i % 2) ? test::table3_geometry(25, 35) : test::table4_geometry();
        g.theta_t = g.beta_t + (1 + 50 * u(rng)) * pi / 180;
        // Keep the difference stencil inside the beam domain
        double const vt = (2 * u(rng) - 1) * 0.8 * g.beta_t;
        auto const [lo, hi] = varpi_bounds(std::abs(vt) + 2e-3, g.beta_t);
        double const vp = lo + 2e-3 + (hi - lo - 4e-3) * u(rng);
        double const tau = 1 + 300 * u(rng);
        double const x[3] = {tau, vp, vt};
        double const h[3] = {1e-3 * tau, 1e-3, 1e-3};
        auto map = [&](double const* y) { return scatter_point(y[0], y[1], y[2], g).point_p; };
        Eigen::Matrix3d jac;
        for (int k = 0; k < 3; ++k)
        {
            // Central differences with one Richardson step
            auto diff = [&](double step) {
                double yp[3] = {x[0], x[1], x[2]}, ym[3] = {x[0], x[1], x[2]};
                yp[k] += step;
                ym[k] -= step;
                return Vec3((map(yp) - map(ym)) / (2 * step));
            };
            jac.col(k) = (4 * diff(h[k] / 2) - diff(h[k])) / 3;
        }
        double const ref = std::abs(jac.determinant());
        worst = std::max(worst, std::abs(jacobian(tau, vp) - ref) / ref);
    }
    note("%d points, worst relative error %.3e", n, worst);
    verdict(4, worst <= 1e-8, "jacobian matches finite-difference determinant within 1e-8");
}

void phase_normalization()
{
    // Composite Simpson over mu with 2e5 intervals
    auto sphere = [](auto&& f) {
        int const m = 200000;
        double const h = 2.0 / m;
        double sum = f(-1.0) + f(1.0);
        for (int i = 1; i < m; ++i)
            sum += (i % 2 ? 4 : 2) * f(-1.0 + i * h);
        return 2 * pi * sum * h / 3;
    };
    Atmosphere const atm = test::table3_atmosphere();
    double const a = sphere([&](double mu) { return phase_rayleigh(mu, atm.gamma); });
    double const b = sphere([&](double mu) { return phase_mie(mu, atm.g, atm.f); });
    double const c = sphere([&](double mu) { return phase(mu, atm); });
    note("rayleigh %.12f, mie %.12f, mixture %.12f", a, b, c);
    verdict(5,
            std::abs(a - 1) < 1e-6 && std::abs(b - 1) < 1e-6 && std::abs(c - 1) < 1e-6,
            "phase functions integrate to 1 within 1e-6");
}

void quadrature_convergence()
{
    bool pass = true;
    for (char const* name :
         {"table3-scenario1", "table3-scenario2", "table3-scenario1-symmetric", "table4"})
    {
        Scene s = test::preset_scene(name);
        double const base = s.evaluate().path_loss_db;
        s.quad.n_vartheta *= 2;
        s.quad.n_varpi *= 2;
        s.quad.n_tau *= 2;
        double const fine = s.evaluate().path_loss_db;
        pass = pass && std::abs(fine - base) < 0.05;
        note("%s r=%.0f m: %.4f dB -> %.4f dB (%+.4f)", name, s.geom.range_r, base, fine,
             fine - base);
    }
    verdict(6, pass, "doubling all node counts changes path loss by < 0.05 dB");
}

void offset_trend()
{
    ScenarioConfig const cfg = parse_config(R"({"preset": "table4"})");
    std::vector<SweepRow> const rows = sweep_obstacle_offset(cfg.scene, cfg.sweep_offsets);
    double const s = cfg.scene.obstacle->thickness_s;

    std::vector<double> dist, ref, sca;
    for (auto const& row : rows)
    {
        if (!row.result)
        {
            note("x_o %.1f failed: %s", *row.x_o, row.error.c_str());
            continue;
        }
        dist.push_back(std::abs(*row.x_o + s / 2));
        ref.push_back(row.result->pl_ref_db);
        sca.push_back(row.result->pl_sca_db);
    }
    int drops = 0;
    for (std::size_t i = 1; i < ref.size(); ++i)
    {
        if (ref[i] < ref[i - 1])
            ++drops;
    }
    // Far region: the half of the sweep farthest from the transceivers
    std::size_t const far_start = ref.size() / 2;
    int above = 0;
    for (std::size_t i = far_start; i < ref.size(); ++i)
    {
        if (!(ref[i] < sca[i]))
            ++above;
    }
    std::size_t lowest = 0;
    for (std::size_t i = 1; i < ref.size(); ++i)
    {
        if (ref[i] < ref[lowest])
            lowest = i;
    }
    for (std::size_t i = 0; i < ref.size(); i += 3)
        note("|x_o + s/2| = %.0f m: reflected %.2f dB, scattered %.2f dB", dist[i], ref[i],
             sca[i]);
    note("%zu points, %d decreasing steps, reflected minimum at %.0f m", ref.size(), drops,
         dist.empty() ? 0.0 : dist[lowest]);
    note("far region from %.0f m: %d of %zu points with reflected >= scattered",
         dist.empty() ? 0.0 : dist[far_start], above, ref.size() - far_start);
    verdict(7, !ref.empty() && drops == 0 && above == 0 && ref.size() == rows.size(),
            "reflected loss non-decreasing in offset and below scattered in the far region");
}

void mcpt_statistics()
{
    Scene const s = test::preset_scene("table3-scenario1");
    QuadratureSpec fine = s.quad;
    fine.n_vartheta *= 2;
    fine.n_varpi *= 2;
    fine.n_tau *= 2;
    double const q = scattered_energy(s.geom, s.atm, nullptr, fine).q_sca;

    int inside = 0;
    McptSpec spec;
    spec.n_photons = 1000000;
    for (int seed = 1; seed <= 30; ++seed)
    {
        spec.rng_seed = static_cast<std::uint64_t>(seed);
        McptEstimate const est = trace(s.geom, s.atm, nullptr, nullptr, spec);
        double const z = (est.q_r_hat - q) / est.std_error;
        inside += std::abs(z) <= 3;
        note("seed %d: z = %+.2f", seed, z);
    }

    std::vector<double> se;
    for (std::uint64_t n : {100000ull, 400000ull, 1600000ull})
    {
        spec.rng_seed = 101;
        spec.n_photons = n;
        se.push_back(trace(s.geom, s.atm, nullptr, nullptr, spec).std_error);
    }
    double const r1 = se[0] / se[1], r2 = se[1] / se[2];
    bool const scaling = std::abs(r1 / 2 - 1) <= 0.2 && std::abs(r2 / 2 - 1) <= 0.2;
    note("%d of 30 seeds within 3 stderr; stderr ratio for 4x photons %.3f and %.3f "
         "(ideal 2)",
         inside, r1, r2);
    verdict(8, inside >= 28 && scaling,
            "open-link estimate within 3 stderr for >= 28/30 seeds, stderr ~ 1/sqrt(n)");
}
}  // namespace

int main(int argc, char** argv)
{
    bool strict = false;
    for (int i = 1; i < argc; ++i)
    {
        if (std::strcmp(argv[i], "--strict") == 0)
            strict = true;
        else if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc)
            g_report = std::fopen(argv[++i], "w");
    }
    auto const t0 = std::chrono::steady_clock::now();
    headline();
    mcpt_agreement();
    blockage_equivalence();
    jacobian_property();
    phase_normalization();
    quadrature_convergence();
    offset_trend();
    mcpt_statistics();
    emit("%d of 8 criteria failed (%.0f s)", g_failed, seconds_since(t0));
    if (g_report)
        std::fclose(g_report);
    return strict && g_failed ? 1 : 0;
}
