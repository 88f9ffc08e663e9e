// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "scenes.hpp"
#include "uvnlos/quadrature.hpp"
#include "uvnlos/reflection.hpp"

using namespace uvnlos;
using doctest::Approx;

namespace
{
double angle_between(Vec3 const& a, Vec3 const& b)
{
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

Vec3 axis_from_angles(double elevation, double azimuth)
{
    return {std::cos(elevation) * std::cos(azimuth),
            std::cos(elevation) * std::sin(azimuth),
            std::sin(elevation)};
}

struct RasterResult
{
    double area{0};
    double energy{0};
};

//! Rasterize the facade: first mark the cells lit by the beam and seen by
//! the receiver, then sum the reflected energy of the marked cells.
RasterResult raster_reflection(SystemGeometry const& g,
                               Atmosphere const& atm,
                               ObstacleBox const& box,
                               double r_r,
                               double m_s,
                               double eta,
                               int ny,
                               int nz)
{
    Vec3 const na = axis_from_angles(g.theta_t, g.alpha_t);
    Vec3 const nr = axis_from_angles(g.theta_r, g.alpha_r);
    Vec3 const rcv(0, g.range_r, 0);
    Vec3 const normal = Vec3::UnitX();
    double const x = box.x_near();
    double const dy = box.width_w / ny, dz = box.height_kappa / nz;
    double const solid = 2 * pi * (1 - std::cos(g.beta_t));

    std::vector<char> lit(static_cast<std::size_t>(ny) * nz, 0);
    for (int i = 0; i < ny; ++i)
    {
        for (int j = 0; j < nz; ++j)
        {
            Vec3 const p(x, box.y_low() + (i + 0.5) * dy, (j + 0.5) * dz);
            lit[i * nz + j] = angle_between(p, na) <= g.beta_t
                              && angle_between(p - rcv, nr) <= g.beta_r;
        }
    }

    RasterResult out;
    for (int i = 0; i < ny; ++i)
    {
        for (int j = 0; j < nz; ++j)
        {
            if (!lit[i * nz + j])
                continue;
            Vec3 const p(x, box.y_low() + (i + 0.5) * dy, (j + 0.5) * dz);
            out.area += dy * dz;
            double const tau = p.norm();
            Vec3 const inc = p / tau;
            Vec3 const out_vec = rcv - p;
            double const eps = out_vec.norm();
            Vec3 const spec = inc - 2 * inc.dot(normal) * normal;
            double const t1 = angle_between(out_vec, normal);
            double const t2 = angle_between(out_vec, spec);
            double const lobe = std::cos(t2) > 0 ? std::pow(std::cos(t2), m_s) : 0;
            double const i_r
                = eta * std::cos(t1) / pi + (1 - eta) * (m_s + 1) / (2 * pi) * lobe;
            double const cos_i = std::abs(inc.dot(normal));
            double const cos_v = std::cos(angle_between(p - rcv, nr));
            // Fraction of the pulse landing on the cell, then the share of
            // the reflected pattern that enters the aperture
            double const landed = g.pulse_energy / solid * cos_i * dy * dz / (tau * tau)
                                  * std::exp(-atm.ke() * tau);
            double const gathered = r_r * i_r * g.aperture_area * cos_v / (eps * eps)
                                    * std::exp(-atm.ke() * eps);
            out.energy += landed * gathered;
        }
    }
    return out;
}
}  // namespace

TEST_CASE("phong pattern")
{
    CHECK(phong_intensity(0, 0, 0.5, 5) == Approx(0.5 / pi + 0.5 * 6 / (2 * pi)));
    CHECK(phong_intensity(0, 0, 0.5, 5) == Approx(0.63662).epsilon(1e-5));
    CHECK_THROWS_AS(phong_intensity(2.0, 0, 0.5, 5), DomainError);
    CHECK_THROWS_AS(phong_intensity(0.1, 4.0, 0.5, 5), DomainError);

    // Lambertian part over the hemisphere, specular lobe over the
    // hemisphere about the specular direction
    QuadRule const rt = gauss_on(0, pi / 2, 200);
    double lambert = 0, lobe = 0;
    for (std::size_t i = 0; i < rt.size(); ++i)
    {
        double const t = rt.nodes[i];
        double const ring = 2 * pi * std::sin(t) * rt.weights[i];
        lambert += ring * phong_intensity(t, pi / 2, 1.0, 5);
        lobe += ring * phong_intensity(0, t, 0.0, 5);
    }
    CHECK(lambert == Approx(1).epsilon(1e-12));
    CHECK(lobe == Approx(1).epsilon(1e-12));
}

TEST_CASE("reflection region membership")
{
    SystemGeometry const g = test::table4_geometry();
    ObstacleBox const box = test::table4_obstacle(100, -45);
    // Beam axis meets the facade plane x = x_c
    Vec3 const na = axis_from_angles(g.theta_t, g.alpha_t);
    Vec3 const hit = na * (box.x_near() / na.x());
    if (hit.y() > box.y_low() && hit.y() < box.y_high() && hit.z() < box.height_kappa
        && angle_between(hit - Vec3(0, g.range_r, 0), g.rx_axis()) <= g.beta_r)
        CHECK(in_reflection_region(hit, g, box));
    CHECK_FALSE(in_reflection_region(Vec3(box.x_near(), hit.y(), box.height_kappa + 1), g, box));
}

TEST_CASE("reflection patch geometry")
{
    SystemGeometry const g = test::table4_geometry();
    ObstacleBox const box = test::table4_obstacle(100, -45);
    ReflectionSurface const surf = ReflectionSurface::facade(box, 0.1, 5, 0.5);
    CHECK(surf.plane_x == Approx(box.x_near()));
    CHECK(surf.z_hi == Approx(box.height_kappa));
    ReflectionPatchSample const p = reflection_patch(45, 20, g, surf);
    Vec3 const pt(box.x_near(), 45, 20);
    CHECK(p.tau == Approx(pt.norm()));
    CHECK(p.epsilon == Approx((Vec3(0, g.range_r, 0) - pt).norm()));
    CHECK(p.cos_omega_i == Approx(std::abs(pt.x()) / pt.norm()));
    CHECK(p.v_s.x() == Approx(-pt.x() / pt.norm()));
}

TEST_CASE("reflected energy against a rasterized facade")
{
    SystemGeometry const g = test::table4_geometry();
    Atmosphere const atm = test::table3_atmosphere();
    QuadratureSpec quad;
    for (double x_o : {-45.0, -55.0, -40.0})
    {
        ObstacleBox const box = test::table4_obstacle(100, x_o);
        ReflectionSurface const surf = ReflectionSurface::facade(box, 0.1, 5, 0.5);
        ReflectionResult const lib = reflected_energy(g, atm, box, surf, quad);
        RasterResult const ras = raster_reflection(g, atm, box, 0.1, 5, 0.5, 2000, 4000);
        CAPTURE(x_o);
        CHECK(lib.diagnostics.region_area == Approx(ras.area).epsilon(2e-3));
        CHECK(lib.q_ref == Approx(ras.energy).epsilon(2e-3));
    }
}

TEST_CASE("reflected energy limits")
{
    SystemGeometry const g = test::table4_geometry();
    Atmosphere const atm = test::table3_atmosphere();
    QuadratureSpec quad;
    quad.n_vartheta = quad.n_varpi = 16;
    ObstacleBox const box = test::table4_obstacle(100, -45);

    ReflectionSurface dark = ReflectionSurface::facade(box, 0.0, 5, 0.5);
    CHECK(reflected_energy(g, atm, box, dark, quad).q_ref == 0);

    // Without extinction the integrand no longer depends on the atmosphere
    ReflectionSurface const surf = ReflectionSurface::facade(box, 0.1, 5, 0.5);
    ReflectionPatchSample const patch = reflection_patch(45, 20, g, surf);
    Atmosphere clear1;
    Atmosphere clear2;
    clear2.g = 0.3;
    clear2.gamma = 0.5;
    double const a = reflection_integrand(patch, g, clear1, surf);
    CHECK(a > 0);
    CHECK(a == reflection_integrand(patch, g, clear2, surf));
    CHECK(reflection_integrand(patch, g, clear1, dark) == 0);

    ObstacleBox const far = test::table4_obstacle(100, -90);
    ReflectionResult const none
        = reflected_energy(g, atm, far, ReflectionSurface::facade(far, 0.1, 5, 0.5), quad);
    CHECK(none.q_ref == 0);
    CHECK(none.diagnostics.region_area == 0);
}
