// SPDX-License-Identifier: Apache-2.0
//! \file mcpt.cpp
#include "uvnlos/mcpt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "uvnlos/parallel.hpp"

namespace uvnlos
{
namespace
{
struct Tally
{
    double sum{0};
    double sum_sq{0};
    double sum_sca{0};
    double sum_ref{0};
    std::uint64_t contributing{0};
};

//! Free-path density: equal mixture of the analog exponential and a
//! Cauchy density centred on the ray's closest approach to R. The Cauchy
//! part follows the 1/epsilon^2 shape of the receiver term, keeping the
//! next-event weights bounded near R.
class FreePath
{
  public:
    FreePath(double ks, Vec3 const& dir, Vec3 const& receiver) : ks_(ks)
    {
        center_ = dir.dot(receiver);
        double const h2 = receiver.squaredNorm() - center_ * center_;
        width_ = std::max(std::sqrt(std::max(h2, 0.0)), 1e-9 * receiver.norm());
        a0_ = std::atan(-center_ / width_);
        norm_ = 0.5 * pi - a0_;
    }

    double sample(PhotonRng& rng) const
    {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double const branch = uni(rng);
        double const u = uni(rng);
        if (branch < 0.5)
            return -std::log1p(-u) / ks_;
        return center_ + width_ * std::tan(a0_ + u * norm_);
    }

    //! Analog density over mixture density.
    double weight(double ell) const
    {
        double const p = ks_ * std::exp(-ks_ * ell);
        double const d = ell - center_;
        double const q = width_ / ((d * d + width_ * width_) * norm_);
        return p / (0.5 * p + 0.5 * q);
    }

  private:
    double ks_;
    double center_{};
    double width_{};
    double a0_{};
    double norm_{};
};

//! Emission density: equal mixture of the uniform beam cap and a density
//! proportional to 1/psi about the direction of R, psi < psi_c. Rays passing
//! at distance b from R carry next-event weights ~ 1/b, which have infinite
//! variance under the uniform cap alone when R lies inside the beam.
class EmissionDirection
{
  public:
    explicit EmissionDirection(SystemGeometry const& geom) : geom_(geom)
    {
        to_r_ = geom.receiver().normalized();
        Vec3 const helper = std::abs(to_r_.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
        e1_ = to_r_.cross(helper).normalized();
        e2_ = to_r_.cross(e1_);
        axis_ = geom.tx_axis();
        cos_b_ = std::cos(geom.beta_t);
        psi_c_ = geom.beta_t;
        p_cap_ = 1 / (2 * pi * (1 - cos_b_));
    }

    //! Direction and its analog-over-mixture weight.
    Vec3 sample(PhotonRng& rng, double& weight) const
    {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        Vec3 dir;
        if (uni(rng) < 0.5)
        {
            dir = sample_beam_direction(rng, geom_);
        }
        else
        {
            double const psi = psi_c_ * uni(rng);
            double const phi = 2 * pi * uni(rng);
            dir = std::cos(psi) * to_r_
                  + std::sin(psi) * (std::cos(phi) * e1_ + std::sin(phi) * e2_);
        }
        double const p = dir.dot(axis_) >= cos_b_ ? p_cap_ : 0.0;
        double const psi = std::atan2(dir.cross(to_r_).norm(), dir.dot(to_r_));
        double const q = psi < psi_c_ && psi > 0
                             ? 1 / (2 * pi * psi_c_ * std::sin(psi))
                             : 0.0;
        weight = p > 0 ? p / (0.5 * p + 0.5 * q) : 0.0;
        return dir;
    }

  private:
    SystemGeometry const& geom_;
    Vec3 to_r_, e1_, e2_, axis_;
    double cos_b_{}, psi_c_{}, p_cap_{};
};

//! Receiver term A_r cos(theta_v) / eps^2 * exp(-ke eps) for a point
//! inside the FoV with a clear line to R; zero otherwise.
double receiver_term(Vec3 const& point,
                     SystemGeometry const& geom,
                     Atmosphere const& atm,
                     ObstacleBox const* obstacle,
                     double& eps_out,
                     Vec3& to_r_unit)
{
    Vec3 const to_r = geom.receiver() - point;
    double const eps = to_r.norm();
    eps_out = eps;
    if (!(eps > 0))
        return 0;
    to_r_unit = to_r / eps;
    double const cos_v = -to_r_unit.dot(geom.rx_axis());
    if (cos_v < std::cos(geom.beta_r))
        return 0;
    if (obstacle && segment_hits_box(point, geom.receiver(), *obstacle))
        return 0;
    return geom.aperture_area * cos_v / (eps * eps) * std::exp(-atm.ke() * eps);
}

void trace_batch(std::uint64_t batch,
                 std::uint64_t count,
                 SystemGeometry const& geom,
                 Atmosphere const& atm,
                 ObstacleBox const* obstacle,
                 ReflectionSurface const* surface,
                 McptSpec const& spec,
                 Tally& tally)
{
    PhotonRng rng = batch_rng(spec.rng_seed, batch);
    double const ks = atm.ks();
    Vec3 const rcv = geom.receiver();
    EmissionDirection const emission(geom);
    for (std::uint64_t n = 0; n < count; ++n)
    {
        double w_dir = 0;
        Vec3 const dir = emission.sample(rng, w_dir);
        if (!(w_dir > 0))
            continue;
        FreePath const path(ks, dir, rcv);
        double const ell = path.sample(rng);
        double const mis = w_dir * path.weight(ell);

        RayHit hit;
        if (obstacle)
            hit = ray_box_entry(Vec3::Zero(), dir, *obstacle);

        double w_sca = 0;
        double w_ref = 0;
        double eps = 0;
        Vec3 out_dir = Vec3::Zero();
        if (hit.face != BoxFace::none && ell >= hit.t)
        {
            if (hit.face == BoxFace::x_high && surface && surface->r_r > 0)
            {
                double const survive = mis * std::exp(-atm.ka * hit.t);
                if (survive >= spec.survival_threshold)
                {
                    Vec3 const point = hit.t * dir;
                    double const rt
                        = receiver_term(point, geom, atm, obstacle, eps, out_dir);
                    if (rt > 0)
                    {
                        Vec3 const n = surface->normal;
                        Vec3 const v_s = dir - 2 * dir.dot(n) * n;
                        double const t1 = std::acos(std::clamp(out_dir.dot(n), -1.0, 1.0));
                        double const t2
                            = std::acos(std::clamp(out_dir.dot(v_s), -1.0, 1.0));
                        w_ref = survive * surface->r_r
                                * phong_intensity(t1, t2, surface->eta, surface->m_s)
                                * rt;
                    }
                }
            }
        }
        else
        {
            double const survive = mis * std::exp(-atm.ka * ell);
            if (survive >= spec.survival_threshold)
            {
                Vec3 const point = ell * dir;
                double const rt
                    = receiver_term(point, geom, atm, obstacle, eps, out_dir);
                if (rt > 0)
                {
                    double const mu = std::clamp(dir.dot(out_dir), -1.0, 1.0);
                    w_sca = survive * phase(mu, atm) * rt;
                }
            }
        }

        double const w = w_sca + w_ref;
        if (w > 0)
        {
            tally.sum += w;
            tally.sum_sq += w * w;
            tally.sum_sca += w_sca;
            tally.sum_ref += w_ref;
            ++tally.contributing;
        }
    }
}

}  // namespace

//---------------------------------------------------------------------------//
ValidityReport validate_mcpt(McptSpec const& spec)
{
    ValidityReport report;
    if (spec.n_photons < 1)
        report.violations.push_back("n_photons must be >= 1");
    if (!(spec.survival_threshold > 0 && spec.survival_threshold < 1))
        report.violations.push_back("survival_threshold must lie in (0, 1)");
    if (spec.batch_size < 1)
        report.violations.push_back("batch_size must be >= 1");
    return report;
}

PhotonRng batch_rng(std::uint64_t seed, std::uint64_t batch)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch),
                      static_cast<std::uint32_t>(batch >> 32)};
    return PhotonRng(seq);
}

Vec3 sample_beam_direction(PhotonRng& rng, SystemGeometry const& geom)
{
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double const cos_b = std::cos(geom.beta_t);
    double const c = 1 - uni(rng) * (1 - cos_b);
    double const s = std::sqrt(std::max(0.0, 1 - c * c));
    double const phi = 2 * pi * uni(rng);

    Vec3 const axis = geom.tx_axis();
    Vec3 const helper = std::abs(axis.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    Vec3 const e1 = axis.cross(helper).normalized();
    Vec3 const e2 = axis.cross(e1);
    return c * axis + s * (std::cos(phi) * e1 + std::sin(phi) * e2);
}

McptEstimate trace(SystemGeometry const& geom,
                   Atmosphere const& atm,
                   ObstacleBox const* obstacle,
                   ReflectionSurface const* surface,
                   McptSpec const& spec)
{
    ValidityReport report = validate_system(geom);
    for (ValidityReport const& r : {validate_atmosphere(atm), validate_mcpt(spec)})
    {
        report.violations.insert(
            report.violations.end(), r.violations.begin(), r.violations.end());
    }
    if (obstacle)
    {
        ValidityReport const r = validate_obstacle(geom, *obstacle);
        for (auto const& v : r.violations)
        {
            if (std::find(report.violations.begin(), report.violations.end(), v)
                == report.violations.end())
                report.violations.push_back(v);
        }
    }
    if (!report.ok())
        throw InvalidGeometry(report.summary());

    std::uint64_t const n = spec.n_photons;
    std::uint64_t const n_batches = (n + spec.batch_size - 1) / spec.batch_size;
    std::vector<Tally> tallies(n_batches);
    ReflectionSurface const* active_surface = obstacle ? surface : nullptr;
    parallel_for(n_batches, [&](std::size_t b) {
        std::uint64_t const first = b * spec.batch_size;
        std::uint64_t const count = std::min(spec.batch_size, n - first);
        trace_batch(b, count, geom, atm, obstacle, active_surface, spec, tallies[b]);
    });

    Tally total;
    for (Tally const& t : tallies)
    {
        total.sum += t.sum;
        total.sum_sq += t.sum_sq;
        total.sum_sca += t.sum_sca;
        total.sum_ref += t.sum_ref;
        total.contributing += t.contributing;
    }

    McptEstimate est;
    double const qt = geom.pulse_energy;
    double const dn = static_cast<double>(n);
    double const mean = total.sum / dn;
    est.n_photons = n;
    est.n_contributing = total.contributing;
    est.q_r_hat = qt * mean;
    est.q_sca_hat = qt * total.sum_sca / dn;
    est.q_ref_hat = qt * total.sum_ref / dn;
    if (n > 1)
    {
        double const var = std::max(0.0, (total.sum_sq - dn * mean * mean) / (dn - 1));
        est.std_error = qt * std::sqrt(var / dn);
    }
    est.insufficient = total.contributing == 0;
    if (est.q_r_hat > 0)
    {
        est.path_loss_db = 10 * std::log10(qt / est.q_r_hat);
        est.std_error_db = 10 / std::log(10.0) * est.std_error / est.q_r_hat;
    }
    else
    {
        est.path_loss_db = std::numeric_limits<double>::infinity();
        est.std_error_db = std::numeric_limits<double>::infinity();
    }
    return est;
}

}  // namespace uvnlos
