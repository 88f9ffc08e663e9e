// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/mcpt.hpp
//! Single-collision Monte-Carlo photon tracer with next-event estimation,
//! used as an independent check of the energy integrals.
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "uvnlos/geometry.hpp"
#include "uvnlos/reflection.hpp"
#include "uvnlos/scattering.hpp"

namespace uvnlos
{
struct McptSpec
{
    std::uint64_t n_photons{1000000};
    double survival_threshold{1e-10};
    std::uint64_t rng_seed{1};
    std::uint64_t batch_size{10000};  //!< Photons per random substream

    friend bool operator==(McptSpec const&, McptSpec const&) = default;
};

ValidityReport validate_mcpt(McptSpec const& spec);

struct McptEstimate
{
    double q_r_hat{0};      //!< [J]
    double std_error{0};    //!< [J]
    double q_sca_hat{0};    //!< Scattering share of q_r_hat [J]
    double q_ref_hat{0};    //!< Facade share of q_r_hat [J]
    double path_loss_db{0};
    double std_error_db{0};  //!< First-order error of the path loss
    std::uint64_t n_photons{0};
    std::uint64_t n_contributing{0};
    bool insufficient{false};  //!< No photon contributed
};

using PhotonRng = std::mt19937_64;

//! Substream for one batch, derived from (seed, batch index).
PhotonRng batch_rng(std::uint64_t seed, std::uint64_t batch);

//! Direction uniform over the beam's spherical cap.
Vec3 sample_beam_direction(PhotonRng& rng, SystemGeometry const& geom);

//! Trace photons; null obstacle or surface removes the obstacle or its
//! reflection respectively.
McptEstimate trace(SystemGeometry const& geom,
                   Atmosphere const& atm,
                   ObstacleBox const* obstacle,
                   ReflectionSurface const* surface,
                   McptSpec const& spec);

}  // namespace uvnlos
