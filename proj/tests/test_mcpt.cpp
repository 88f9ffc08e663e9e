// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "scenes.hpp"
#include "uvnlos/mcpt.hpp"
#include "uvnlos/parallel.hpp"

using namespace uvnlos;
using doctest::Approx;

TEST_CASE("beam directions fill the cap uniformly")
{
    SystemGeometry const g = test::table3_geometry(25, 35);
    Vec3 const axis = g.tx_axis();
    Vec3 const e1 = axis.cross(Vec3(1, 0, 0)).normalized();
    Vec3 const e2 = axis.cross(e1);
    double const cb = std::cos(g.beta_t);

    int const n_cos = 10, n_phi = 10;
    std::vector<long> bins(n_cos * n_phi, 0);
    PhotonRng rng = batch_rng(12345, 0);
    long const n = 1000000;
    Vec3 mean = Vec3::Zero();
    for (long i = 0; i < n; ++i)
    {
        Vec3 const d = sample_beam_direction(rng, g);
        REQUIRE(d.norm() == Approx(1).epsilon(1e-12));
        double const c = d.dot(axis);
        REQUIRE(c >= cb - 1e-12);
        mean += d;
        double const phi = std::atan2(d.dot(e2), d.dot(e1)) + pi;
        int const ic = std::min(n_cos - 1, static_cast<int>((1 - c) / (1 - cb) * n_cos));
        int const ip = std::min(n_phi - 1, static_cast<int>(phi / (2 * pi) * n_phi));
        ++bins[ic * n_phi + ip];
    }
    // Bins of equal solid angle
    double const expected = static_cast<double>(n) / bins.size();
    double chi2 = 0;
    for (long b : bins)
        chi2 += (b - expected) * (b - expected) / expected;
    // Upper 1% point of chi-square with 99 degrees of freedom
    CHECK(chi2 < 134.64);
    CHECK((mean / n).normalized().dot(axis) > 1 - 1e-5);
}

TEST_CASE("estimate does not depend on the number of workers")
{
    SystemGeometry const g = test::table3_geometry(25, 35);
    Atmosphere const atm = test::table3_atmosphere();
    ObstacleBox const box = range_scaled_obstacle(100);
    ReflectionSurface const surf = ReflectionSurface::facade(box, 0.1, 5, 0.5);
    McptSpec spec;
    spec.n_photons = 200000;
    spec.batch_size = 7000;

    set_worker_override(1);
    McptEstimate const one = trace(g, atm, &box, &surf, spec);
    set_worker_override(4);
    McptEstimate const four = trace(g, atm, &box, &surf, spec);
    set_worker_override(0);
    CHECK(one.q_r_hat == four.q_r_hat);
    CHECK(one.std_error == four.std_error);
    CHECK(one.q_ref_hat == four.q_ref_hat);
    CHECK(one.n_contributing == four.n_contributing);

    spec.rng_seed = 2;
    McptEstimate const other = trace(g, atm, &box, &surf, spec);
    CHECK(other.q_r_hat != one.q_r_hat);
}

TEST_CASE("open link estimate agrees with the integral")
{
    SystemGeometry const g = test::table3_geometry(25, 35);
    Atmosphere const atm = test::table3_atmosphere();
    double const q = scattered_energy(g, atm, nullptr, QuadratureSpec{}).q_sca;
    McptSpec spec;
    spec.n_photons = 1000000;
    McptEstimate const est = trace(g, atm, nullptr, nullptr, spec);
    CHECK(std::abs(est.q_r_hat - q) < 3 * est.std_error);
    CHECK(est.q_ref_hat == 0);
    CHECK(est.q_sca_hat == est.q_r_hat);
    CHECK(est.std_error_db < 0.1);
    CHECK_FALSE(est.insufficient);
}

TEST_CASE("fully blocked dark scene gives nothing")
{
    SystemGeometry const g = test::table4_geometry();
    Atmosphere const atm = test::table3_atmosphere();
    ObstacleBox const box = test::table4_obstacle(100, -22);
    ReflectionSurface const dark = ReflectionSurface::facade(box, 0.0, 5, 0.5);
    McptSpec spec;
    spec.n_photons = 200000;
    McptEstimate const est = trace(g, atm, &box, &dark, spec);
    CHECK(est.q_r_hat == 0);
    CHECK(est.insufficient);
    CHECK(std::isinf(est.path_loss_db));
}

TEST_CASE("tracer settings are validated")
{
    McptSpec spec;
    CHECK(validate_mcpt(spec).ok());
    spec.survival_threshold = 1;
    CHECK_FALSE(validate_mcpt(spec).ok());
    spec = McptSpec{};
    spec.n_photons = 0;
    CHECK_FALSE(validate_mcpt(spec).ok());
    CHECK_THROWS_AS(trace(test::table4_geometry(), test::table3_atmosphere(), nullptr,
                          nullptr, spec),
                    InvalidGeometry);
}

TEST_CASE("batch substreams differ")
{
    PhotonRng a = batch_rng(1, 0);
    PhotonRng b = batch_rng(1, 1);
    PhotonRng c = batch_rng(1, 0);
    auto const x = a();
    CHECK(x != b());
    CHECK(x == c());
}

TEST_CASE("standard error falls as one over root n with the receiver inside the beam")
{
    // The receiver direction is about 25 deg off the beam axis here
    SystemGeometry const g = test::table3_geometry(25, 35);
    Vec3 const to_r = g.receiver().normalized();
    REQUIRE(std::acos(to_r.dot(g.tx_axis())) < g.beta_t);
    Atmosphere const atm = test::table3_atmosphere();
    McptSpec spec;
    spec.rng_seed = 5;
    spec.n_photons = 100000;
    double const coarse = trace(g, atm, nullptr, nullptr, spec).std_error;
    spec.n_photons = 400000;
    double const fine = trace(g, atm, nullptr, nullptr, spec).std_error;
    CHECK(coarse / fine == Approx(2).epsilon(0.2));
}
