#pragma once

#include <cstddef>
#include <vector>

#include "kms/grids.hpp"

namespace kms {

/// Phase-space density f(theta, w) per frequency slice, stored flat with index
/// (q*n_theta + i)*n_w + j. Each slice holds a conditional density: integrating
/// slice q over (theta, w) gives 1; averages over g apply quadrature weights.
struct KineticField {
    PhaseGrid theta;
    VelocityGrid w;
    FrequencyQuadrature nu;
    std::vector<double> data;

    KineticField(PhaseGrid th, VelocityGrid vg, FrequencyQuadrature fq)
        : theta(th), w(vg), nu(fq), data(fq.size() * th.n * vg.n, 0.0) {}

    std::size_t index(std::size_t q, std::size_t i, std::size_t j) const {
        return (q * theta.n + i) * w.n + j;
    }
    double& at(std::size_t q, std::size_t i, std::size_t j) { return data[index(q, i, j)]; }
    double at(std::size_t q, std::size_t i, std::size_t j) const { return data[index(q, i, j)]; }

    double* column(std::size_t q, std::size_t i) { return data.data() + index(q, i, 0); }
    const double* column(std::size_t q, std::size_t i) const {
        return data.data() + index(q, i, 0);
    }

    /// Integral of slice q over (theta, w).
    double slice_mass(std::size_t q) const;
};

/// Per-slice phase densities P_nu(theta) with the derived coupling fields:
/// P = <P_nu>_g, Y = <nu P_nu>_g / P (drift average), V = nu + K*Phi with the
/// local coupling Phi = K-independent mean-field flux of the associated
/// equilibrium. Vacuum cells (P < 1e-14) carry Y = 0 and a flag.
struct EquilibriumProfile {
    PhaseGrid theta;
    FrequencyQuadrature nu;
    double K = 0.0;
    std::vector<double> P_nu;    ///< [q*n_theta + i]
    std::vector<double> P;       ///< [i]
    std::vector<double> Y;       ///< [i]
    std::vector<double> V;       ///< [q*n_theta + i]
    std::vector<char> vacuum;    ///< [i]

    EquilibriumProfile(PhaseGrid th, FrequencyQuadrature fq)
        : theta(th), nu(fq), P_nu(fq.size() * th.n, 0.0), P(th.n, 0.0), Y(th.n, 0.0),
          V(fq.size() * th.n, 0.0), vacuum(th.n, 0) {}
};

inline constexpr double vacuum_threshold = 1e-14;

/// Mean-field flux Phi(theta_i) = <integral of f dw>_g at each phase cell.
std::vector<double> local_flux(const KineticField& f);

/// Windowed nonlocal flux J_eps(theta_i): the sine-kernel average over
/// (theta_i, theta_i + eps*pi), normalized so J -> Phi as eps -> 0.
/// Throws when the window is unresolved (eps*pi < 2*dtheta).
std::vector<double> nonlocal_flux(const KineticField& f, double eps);

/// V(q, i) = nu_q + K * phi_i for a coupling field phi.
std::vector<double> effective_velocity(const FrequencyQuadrature& nu, std::size_t n_theta,
                                       const std::vector<double>& phi, double K);

/// Fill derived fields of a profile whose P_nu is already set.
void finalize_profile(EquilibriumProfile& prof);

/// Local-equilibrium kinetic field f0(theta, w) = P_nu(theta) * M_{V(theta,nu)}(w).
KineticField build_equilibrium_field(const EquilibriumProfile& prof, const VelocityGrid& w);

}  // namespace kms
