// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/reflection.hpp
//! Phong reflection from the obstacle facade facing the transceivers
//! (x = x_c, outward normal +X) and the reflected-energy surface integral.
#pragma once

#include <cstddef>

#include "uvnlos/geometry.hpp"
#include "uvnlos/scattering.hpp"

namespace uvnlos
{
//! Reflective facade CDD'C' and its Phong material.
struct ReflectionSurface
{
    double r_r{};  //!< Reflection coefficient
    double m_s{};  //!< Specular directivity exponent
    double eta{};  //!< Diffuse fraction

    double plane_x{};
    double y_lo{};
    double y_hi{};
    double z_lo{0};
    double z_hi{};
    Vec3 normal{1.0, 0.0, 0.0};

    //! Facade of the given obstacle with the given material.
    static ReflectionSurface
    facade(ObstacleBox const& obstacle, double r_r, double m_s, double eta);
};

ValidityReport validate_surface(ReflectionSurface const& surface);

//! Geometry of one facade patch as seen from T and R.
struct ReflectionPatchSample
{
    Vec3 point{Vec3::Zero()};
    Vec3 tau_vec{Vec3::Zero()};  //!< T -> point
    double tau{};
    Vec3 eps_vec{Vec3::Zero()};  //!< point -> R
    double epsilon{};
    double omega_i{};
    double cos_omega_i{};
    Vec3 v_s{Vec3::Zero()};  //!< Specular direction of the incident ray
    double theta_1{};        //!< Outgoing direction vs normal
    double theta_2{};        //!< Outgoing direction vs specular direction
    double theta_v{};        //!< Arrival angle off the FoV axis
    double cos_theta_v{};
};

ReflectionPatchSample reflection_patch(double y,
                                       double z,
                                       SystemGeometry const& geom,
                                       ReflectionSurface const& surface);

//! Facade point inside both the beam and the FoV and within the facade.
bool in_reflection_region(Vec3 const& point,
                          SystemGeometry const& geom,
                          ObstacleBox const& obstacle);

//! Phong pattern: diffuse cosine lobe plus specular lobe about v_s.
double phong_intensity(double theta_1, double theta_2, double eta, double m_s);

//! Energy density per unit facade area reaching the aperture.
double reflection_integrand(ReflectionPatchSample const& patch,
                            SystemGeometry const& geom,
                            Atmosphere const& atm,
                            ReflectionSurface const& surface);

struct ReflectionDiagnostics
{
    std::size_t nodes{0};
    std::size_t active_nodes{0};
    double region_area{0};  //!< [m^2]
    double facade_area{0};  //!< [m^2]
    bool empty_region{false};

    double active_fraction() const
    {
        return facade_area > 0 ? region_area / facade_area : 0.0;
    }
};

struct ReflectionResult
{
    double q_ref{0};  //!< [J]
    ReflectionDiagnostics diagnostics;
};

//! Reflected energy. The y rule uses quad.n_vartheta nodes per piece and
//! the z rule quad.n_varpi nodes.
ReflectionResult reflected_energy(SystemGeometry const& geom,
                                  Atmosphere const& atm,
                                  ObstacleBox const& obstacle,
                                  ReflectionSurface const& surface,
                                  QuadratureSpec const& quad);

}  // namespace uvnlos
