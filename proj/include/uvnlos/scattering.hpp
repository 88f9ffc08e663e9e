// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/scattering.hpp
//! Atmosphere model, phase functions and the single-scattering energy
//! integral over the transmitter beam.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "uvnlos/blockage.hpp"
#include "uvnlos/geometry.hpp"

namespace uvnlos
{
//---------------------------------------------------------------------------//
//! Scattering and absorption coefficients plus phase-function shape.
struct Atmosphere
{
    double ks_ray{};  //!< Rayleigh scattering coefficient [1/m]
    double ks_mie{};  //!< Mie scattering coefficient [1/m]
    double ka{};      //!< Absorption coefficient [1/m]
    double gamma{};   //!< Rayleigh anisotropy
    double g{};       //!< Mie asymmetry factor
    double f{};       //!< Mie hemispheric correction weight

    double ks() const { return ks_ray + ks_mie; }
    double ke() const { return ks() + ka; }

    friend bool operator==(Atmosphere const&, Atmosphere const&) = default;
};

ValidityReport validate_atmosphere(Atmosphere const& atm);

//! Cubature node counts and truncation controls.
struct QuadratureSpec
{
    int n_vartheta{64};
    int n_varpi{64};
    int n_tau{128};
    double tau_truncation{30};  //!< C in tau_hi = tau_lo + C/k_e
    double epsilon_floor{1e-6};  //!< [m]
    GweiMode gwei{GweiMode::paper};

    QuadratureSpec doubled() const;

    friend bool operator==(QuadratureSpec const&, QuadratureSpec const&) = default;
};

ValidityReport validate_quadrature(QuadratureSpec const& quad);

//---------------------------------------------------------------------------//
double phase_rayleigh(double mu, double gamma);
double phase_mie(double mu, double g, double f);
//! Rayleigh/Mie mixture weighted by the scattering coefficients.
double phase(double mu, Atmosphere const& atm);

//! Integrand of the beam integral with the tau^2 of the volume element
//! cancelled; excludes the weighting factor.
double kernel(ScatterSample const& sample,
              SystemGeometry const& geom,
              Atmosphere const& atm);

//---------------------------------------------------------------------------//
struct ScatterDiagnostics
{
    std::size_t nodes{0};             //!< Kernel evaluations
    std::size_t blocked_nodes{0};     //!< Nodes with zero weighting factor
    std::size_t gwei_mismatches{0};   //!< Paper rules vs exact oracle
    std::size_t epsilon_underflows{0};
    double truncation_bound{0};       //!< Q_t exp(-C) if any tau was truncated
    bool empty_overlap{false};

    double blocked_fraction() const
    {
        return nodes ? static_cast<double>(blocked_nodes) / nodes : 0.0;
    }
};

struct ScatterResult
{
    double q_sca{0};  //!< [J]
    ScatterDiagnostics diagnostics;
};

//! Scattered energy reaching the receiver around the obstacle. A null
//! obstacle integrates the unobstructed overlap volume.
ScatterResult scattered_energy(SystemGeometry const& geom,
                               Atmosphere const& atm,
                               ObstacleBox const* obstacle,
                               QuadratureSpec const& quad);

}  // namespace uvnlos
