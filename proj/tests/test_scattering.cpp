// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <doctest.h>

#include "scenes.hpp"
#include "uvnlos/quadrature.hpp"
#include "uvnlos/scattering.hpp"

using namespace uvnlos;
using doctest::Approx;

namespace
{
//! Composite Simpson rule for 2 pi * integral of f(mu) over [-1, 1].
template<class F>
double sphere_integral(F&& f, int intervals = 200000)
{
    double const h = 2.0 / intervals;
    double sum = f(-1.0) + f(1.0);
    for (int i = 1; i < intervals; ++i)
        sum += (i % 2 ? 4 : 2) * f(-1.0 + i * h);
    return 2 * pi * sum * h / 3;
}

double angle_cos(Vec3 const& a, Vec3 const& b)
{
    return a.dot(b) / (a.norm() * b.norm());
}

Vec3 axis_from_angles(double elevation, double azimuth)
{
    return {std::cos(elevation) * std::cos(azimuth),
            std::cos(elevation) * std::sin(azimuth),
            std::sin(elevation)};
}

//! Single-scattering energy by direct integration over beam directions in
//! spherical coordinates about the beam axis, with the FoV interval of each
//! ray found numerically.
double no_obstacle_oracle(SystemGeometry const& g, Atmosphere const& atm)
{
    Vec3 const na = axis_from_angles(g.theta_t, g.alpha_t);
    Vec3 const nr = axis_from_angles(g.theta_r, g.alpha_r);
    Vec3 const rcv(0, g.range_r, 0);
    Vec3 const e1 = na.cross(Vec3::UnitZ()).normalized();
    Vec3 const e2 = na.cross(e1);
    double const solid = 2 * pi * (1 - std::cos(g.beta_t));
    double const cb = std::cos(g.beta_r);

    auto cosv = [&](Vec3 const& p) { return angle_cos(p - rcv, nr); };
    auto integrand = [&](Vec3 const& dir, double t) {
        Vec3 const p = t * dir;
        Vec3 const pr = rcv - p;
        double const eps = pr.norm();
        double const mu = angle_cos(dir, pr);
        return atm.ks() * phase(mu, atm) * std::exp(-atm.ke() * (t + eps)) * g.aperture_area
               * cosv(p) / (eps * eps);
    };

    QuadRule const rt = gauss_on(0, g.beta_t, 160);
    QuadRule const rp = gauss_on(0, 2 * pi, 320);
    QuadRule const rs = gauss_on(0, 1, 160);
    double total = 0;
    for (std::size_t i = 0; i < rt.size(); ++i)
    {
        double const th = rt.nodes[i];
        for (std::size_t j = 0; j < rp.size(); ++j)
        {
            double const ph = rp.nodes[j];
            Vec3 const dir = std::cos(th) * na
                             + std::sin(th) * (std::cos(ph) * e1 + std::sin(ph) * e2);
            // Most-inside point along the ray by scan + golden section
            int best = 0;
            double best_c = -2;
            std::vector<double> ts;
            for (int k = 0; k <= 400; ++k)
                ts.push_back(std::pow(10.0, -2 + 8.0 * k / 400));
            for (int k = 0; k <= 400; ++k)
            {
                double const c = cosv(ts[k] * dir);
                if (c > best_c)
                {
                    best_c = c;
                    best = k;
                }
            }
            double a = ts[std::max(best - 1, 0)], b = ts[std::min(best + 1, 400)];
            for (int k = 0; k < 200; ++k)
            {
                double const m1 = a + 0.382 * (b - a), m2 = a + 0.618 * (b - a);
                if (cosv(m1 * dir) < cosv(m2 * dir))
                    a = m1;
                else
                    b = m2;
            }
            double const tm = 0.5 * (a + b);
            if (cosv(tm * dir) <= cb)
                continue;
            auto edge = [&](double inside, double outside) {
                for (int k = 0; k < 200; ++k)
                {
                    double const m = 0.5 * (inside + outside);
                    (cosv(m * dir) > cb ? inside : outside) = m;
                }
                return 0.5 * (inside + outside);
            };
            double const lo = cosv(1e-9 * dir) > cb ? 0.0 : edge(tm, 0.0);
            bool const unbounded = angle_cos(dir, nr) > cb;
            double line = 0;
            if (unbounded)
            {
                double const len = 200;
                for (std::size_t k = 0; k < rs.size(); ++k)
                {
                    double const s = rs.nodes[k];
                    double const t = lo + len * s / (1 - s);
                    line += rs.weights[k] * integrand(dir, t) * len / ((1 - s) * (1 - s));
                }
            }
            else
            {
                double const hi = edge(tm, 1e7);
                QuadRule const rtau = gauss_on(lo, hi, 160);
                for (std::size_t k = 0; k < rtau.size(); ++k)
                    line += rtau.weights[k] * integrand(dir, rtau.nodes[k]);
            }
            total += rt.weights[i] * rp.weights[j] * std::sin(th) * line;
        }
    }
    return g.pulse_energy * total / solid;
}
}  // namespace

TEST_CASE("phase functions")
{
    CHECK(phase_rayleigh(0, 0) == Approx(3 / (16 * pi)));
    CHECK(phase_mie(0.3, 0, 0) == Approx(1 / (4 * pi)));
    CHECK(phase_mie(-0.8, 0, 0) == Approx(1 / (4 * pi)));
    CHECK(phase_mie(1, 0.72, 0.5) > phase_mie(-1, 0.72, 0.5));
    for (double mu : {0.0, 0.2, 0.7, 1.0})
        CHECK(phase_rayleigh(mu, 0.017) == Approx(phase_rayleigh(-mu, 0.017)));
    CHECK_THROWS_AS(phase_rayleigh(1.5, 0.017), DomainError);

    Atmosphere const atm = test::table3_atmosphere();
    double const w_ray = atm.ks_ray / atm.ks();
    CHECK(w_ray == Approx(0.4898).epsilon(1e-4));
    CHECK(phase(0.4, atm)
          == Approx(w_ray * phase_rayleigh(0.4, atm.gamma)
                    + (1 - w_ray) * phase_mie(0.4, atm.g, atm.f)));

    Atmosphere ray_only = atm;
    ray_only.ks_mie = 0;
    CHECK(phase(0.4, ray_only) == Approx(phase_rayleigh(0.4, atm.gamma)));
    Atmosphere none = atm;
    none.ks_ray = none.ks_mie = 0;
    CHECK_THROWS_AS(phase(0.4, none), ZeroScattering);
}

TEST_CASE("phase functions integrate to one over the sphere")
{
    Atmosphere const atm = test::table3_atmosphere();
    CHECK(sphere_integral([&](double mu) { return phase_rayleigh(mu, atm.gamma); })
          == Approx(1).epsilon(1e-9));
    CHECK(sphere_integral([&](double mu) { return phase_mie(mu, atm.g, atm.f); })
          == Approx(1).epsilon(1e-9));
    CHECK(sphere_integral([&](double mu) { return phase(mu, atm); }) == Approx(1).epsilon(1e-9));
}

TEST_CASE("kernel matches a term-by-term evaluation")
{
    SystemGeometry const g = test::table3_geometry(25, 35);
    Atmosphere const atm = test::table3_atmosphere();
    Vec3 const rcv(0, g.range_r, 0);
    Vec3 const nr = axis_from_angles(g.theta_r, g.alpha_r);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 500; ++i)
    {
        double const vt = (2 * u(rng) - 1) * g.beta_t;
        auto const [lo, hi] = varpi_bounds(vt, g.beta_t);
        double const vp = lo + (hi - lo) * u(rng);
        double const tau = 1 + 300 * u(rng);
        ScatterSample const s = scatter_point(tau, vp, vt, g);

        Vec3 const p = s.point_p;
        Vec3 const pr = rcv - p;
        double const eps = pr.norm();
        double const cos_s = angle_cos(p, pr);
        double const cos_v = angle_cos(p - rcv, nr);
        double const solid = 2 * pi * (1 - std::cos(g.beta_t));
        double const emitted = g.pulse_energy / solid;             // per steradian
        double const reach_p = std::exp(-atm.ke() * tau) / (tau * tau);
        double const scattered = atm.ks() * phase(cos_s, atm);
        double const collected = g.aperture_area * cos_v * std::exp(-atm.ke() * eps) / (eps * eps);
        double const volume = tau * tau * std::cos(vp);
        double const expected = emitted * reach_p * scattered * collected * volume;
        CHECK(kernel(s, g, atm) == Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("kernel without extinction and with isotropic scattering")
{
    SystemGeometry const g = test::table3_geometry(25, 35);
    Atmosphere atm;
    atm.ks_mie = 1e-3;
    atm.g = 0;
    atm.f = 0;
    ScatterSample const s = scatter_point(60, 0.1, 0.05, g);
    double const factor = std::exp(-atm.ke() * (s.tau + s.epsilon));
    double const expected = s.cos_theta_v * g.aperture_area * atm.ks() * std::cos(s.varpi)
                            / (8 * pi * pi * (1 - std::cos(g.beta_t)) * s.epsilon * s.epsilon);
    CHECK(kernel(s, g, atm) / factor == Approx(expected).epsilon(1e-12));
}

TEST_CASE("no-obstacle scattered energy against an independent integrator")
{
    SystemGeometry const g = test::table4_geometry();
    Atmosphere const atm = test::table3_atmosphere();
    QuadratureSpec quad;
    double const lib = scattered_energy(g, atm, nullptr, quad).q_sca;
    double const oracle = no_obstacle_oracle(g, atm);
    CHECK(lib == Approx(oracle).epsilon(2e-3));
}

TEST_CASE("scattered energy limits")
{
    SystemGeometry const g = test::table4_geometry();
    Atmosphere const atm = test::table3_atmosphere();
    QuadratureSpec quad;
    quad.n_vartheta = quad.n_varpi = 24;
    quad.n_tau = 48;

    SUBCASE("obstacle covering the whole overlap")
    {
        ObstacleBox const box = test::table4_obstacle(100, -22);
        ScatterResult const res = scattered_energy(g, atm, &box, quad);
        CHECK(res.q_sca == 0);
        CHECK(res.diagnostics.blocked_fraction() == Approx(1));
    }
    SUBCASE("distant obstacle reproduces the open link")
    {
        ObstacleBox const box = test::table4_obstacle(100, -1e6);
        quad.gwei = GweiMode::exact;
        double const open = scattered_energy(g, atm, nullptr, quad).q_sca;
        double const far = scattered_energy(g, atm, &box, quad).q_sca;
        CHECK(far == Approx(open).epsilon(1e-12));
    }
    SUBCASE("bounded by the emitted energy")
    {
        ScatterResult const res = scattered_energy(g, atm, nullptr, quad);
        CHECK(res.q_sca > 0);
        CHECK(res.q_sca < g.pulse_energy);
    }
    SUBCASE("quadrature validation")
    {
        QuadratureSpec bad = quad;
        bad.n_tau = 1;
        CHECK_FALSE(validate_quadrature(bad).ok());
        CHECK_THROWS_AS(scattered_energy(g, atm, nullptr, bad), InvalidGeometry);
    }
}

TEST_CASE("quadrature rules")
{
    QuadRule const gl = gauss_legendre(20);
    double sum = 0, x8 = 0;
    for (std::size_t i = 0; i < gl.size(); ++i)
    {
        sum += gl.weights[i];
        x8 += gl.weights[i] * std::pow(gl.nodes[i], 8);
    }
    CHECK(sum == Approx(2).epsilon(1e-14));
    CHECK(x8 == Approx(2.0 / 9).epsilon(1e-14));

    QuadRule const cm = cosine_mapped(1, 3, 40);
    double s2 = 0;
    for (std::size_t i = 0; i < cm.size(); ++i)
        s2 += cm.weights[i] * std::sqrt(cm.nodes[i] - 1);
    CHECK(s2 == Approx(2.0 / 3 * std::pow(2.0, 1.5)).epsilon(1e-9));

    QuadRule const lm = log_mapped(0, 100, 0.01, 80);
    double s3 = 0;
    for (std::size_t i = 0; i < lm.size(); ++i)
        s3 += lm.weights[i] / (lm.nodes[i] + 0.01);
    CHECK(s3 == Approx(std::log(100.01 / 0.01)).epsilon(1e-9));
}
