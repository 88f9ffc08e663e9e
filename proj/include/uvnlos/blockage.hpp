// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos/blockage.hpp
//! Rotating transmitter/receiver plane frames, the Case/Condition angular
//! classification and the two evaluators of the blockage weighting factor.
//!
//! Angles inside a frame are signed in-plane angles measured from the ray
//! where the plane meets the YZ plane (TK for the transmitter, RS for the
//! receiver), positive towards -X, i.e. towards the obstacle.
#pragma once

#include <array>
#include <string>

#include "uvnlos/geometry.hpp"

namespace uvnlos
{
//---------------------------------------------------------------------------//
//! Transmitter plane F_vartheta cut through the obstacle.
struct TxPlaneFrame
{
    double vartheta{};
    double delta_t{};
    double xi_a{}, xi_b{}, xi_c{};
    double phi_t{};

    //! Intersection of the plane with vertical edge MM', indexed by Corner
    std::array<Vec3, 4> edge_points{};
    //! Psi_{t,mm'}: angle between TK and T->P_{t,mm'}
    std::array<double, 4> psi_edges{};

    //! In-plane beam limits as signed angles from TK
    double omega_min{}, omega_max{};
    //! Limits from the azimuth shortcut alpha_t + varpi -/+ pi/2, exact
    //! only for a horizontal plane; kept for reference
    double omega_min_planar{}, omega_max_planar{};

    double psi_min{};  //!< Psi_{t,dd'}
    double psi_max{};  //!< Psi_{t,bb'}
    double psi_cc{};   //!< Psi_{t,cc'}
    //! Interior angle at P_{t,dd'} of triangle T, P_{t,dd'}, P_{t,cc'}
    double psi_interior_dd{};

    // In-plane basis: centre ray F, horizontal G; TK sits at varpi_k
    Vec3 basis_f{Vec3::Zero()};
    Vec3 basis_g{Vec3::Zero()};
    double varpi_k{};

    //! Signed angle from TK of a vector lying in the plane.
    double signed_angle(Vec3 const& v) const;
};

TxPlaneFrame tx_plane_frame(double vartheta,
                            SystemGeometry const& geom,
                            ObstacleBox const& obstacle);

//---------------------------------------------------------------------------//
//! Receiver plane L_sigma cut through the obstacle.
struct RxPlaneFrame
{
    double sigma{};
    double delta_r{};
    double cap_c{};  //!< In-plane FoV half-width
    double xi_a{}, xi_b{}, xi_c{};
    double phi_r{};

    std::array<Vec3, 4> edge_points{};
    std::array<double, 4> psi_edges{};

    double omega_min{}, omega_max{};
    double omega_min_planar{}, omega_max_planar{};

    double psi_min{};  //!< Psi_{r,cc'}
    double psi_max{};  //!< Psi_{r,aa'}
    double psi_dd{};   //!< Psi_{r,dd'}
    //! Interior angle at P_{r,cc'} of triangle R, P_{r,cc'}, P_{r,dd'}
    double psi_interior_cc{};

    Vec3 basis_l{Vec3::Zero()};
    Vec3 basis_g{Vec3::Zero()};
    double u_s{};
    Vec3 receiver{Vec3::Zero()};

    //! Signed angle from RS of a vector (relative to R) in the plane.
    double signed_angle(Vec3 const& v) const;
};

//! In-plane FoV half-width C(sigma).
double aperture_half_angle(double sigma, double beta_r);

RxPlaneFrame rx_plane_frame(double sigma,
                            SystemGeometry const& geom,
                            ObstacleBox const& obstacle);

//! Rotation sigma of the receiver plane that contains the point.
double receiver_plane_angle(Vec3 const& point, SystemGeometry const& geom);

//---------------------------------------------------------------------------//
//! Table ordering of the four limit angles on each side.
struct BlockageClassification
{
    int tx_case{0};       //!< 1-6
    int rx_condition{0};  //!< 1-6
    double psi_t_esp{std::numeric_limits<double>::quiet_NaN()};
    double psi_r_esp{std::numeric_limits<double>::quiet_NaN()};
};

inline constexpr double classify_tolerance = 1e-12;

//! Row of the descending-order table for (omega_min, omega_max, psi_min,
//! psi_max). Ties within the tolerance take the >= branch.
int classify_order(double omega_min, double omega_max, double psi_min, double psi_max);

BlockageClassification classify(TxPlaneFrame const& tx, RxPlaneFrame const& rx);

//! Label such as "Case 2 / Condition 3".
std::string label(BlockageClassification const& cls);

//---------------------------------------------------------------------------//
//! Case/Condition evaluation of the weighting factor. Fills the sample
//! angles of \c cls.
bool g_wei_paper(ScatterSample const& sample,
                 BlockageClassification& cls,
                 TxPlaneFrame const& tx,
                 RxPlaneFrame const& rx);

//! Convenience overload building both frames.
bool g_wei_paper(ScatterSample const& sample,
                 SystemGeometry const& geom,
                 ObstacleBox const& obstacle,
                 BlockageClassification* cls_out = nullptr);

//! Exact weighting factor: both T->P and P->R avoid the open box.
bool g_wei_oracle(Vec3 const& point_p,
                  SystemGeometry const& geom,
                  ObstacleBox const& obstacle);

//! Which evaluator produces the weighting factor in the energy integrals.
enum class GweiMode
{
    paper,
    exact
};

char const* to_string(GweiMode mode);
GweiMode gwei_mode_from_string(std::string const& s);

}  // namespace uvnlos
