#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kms/field.hpp"
#include "kms/grids.hpp"

namespace kms {

/// Discrete solution of -d/dw(M_V d/dw chi) = (w - V) M_V with zero-flux ends.
/// The closed-form solution is chi(w) = w - V up to an additive constant; the
/// returned chi has M-weighted mean zero.
struct GciSolution {
    std::vector<double> chi;
    std::size_t pinned_index = 0;     ///< node whose row replaced the singular equation
    double constraint_residual = 0.0; ///< |<chi, M>| / <1, M> after projection
    double compat_residual = 0.0;     ///< |sum of rhs| (solvability defect)
    bool ok = false;
};

GciSolution solve_gci(double V, const VelocityGrid& g);

/// Weighted L2 and H1 seminorms: l2 = sqrt(sum phi^2 M dw), h1 evaluated with
/// half-point weights and forward differences.
struct Seminorms {
    double l2 = 0.0;
    double h1 = 0.0;
};

Seminorms weighted_seminorms(const std::vector<double>& phi, double V, const VelocityGrid& g);

/// Total pairing of a velocity test function phi(w) with the divergence-form
/// collision operator over every (nu, theta) column, with V = nu + K*Phi and
/// Phi the field's own mean-field flux. Vanishes in the continuum whenever phi
/// is a collision invariant.
double collision_invariant_check(const std::vector<double>& phi, const KineticField& f,
                                 double K);

/// Pairing of psi(w, nu) = phi(nu) + beta*(w - V) with the factored collision
/// operator, totaled over all columns, together with the V-relative
/// first-moment constraint of f. In the continuum pairing = -beta * constraint;
/// discretely they differ by O(dw^2).
struct GciInvariance {
    double pairing = 0.0;
    double constraint = 0.0;
};

GciInvariance gci_invariance(const KineticField& f, const std::vector<double>& V,
                             const std::vector<double>& phi_nu, double beta);

/// Convenience overload with a frequency-independent offset.
GciInvariance gci_invariance(const KineticField& f, const std::vector<double>& V, double a,
                             double beta);

/// Remove the total V-relative first moment of f by rescaling an odd corrector
/// on slice (q=0, i=0). Leaves all masses unchanged.
void balance_first_moment(KineticField& f, const std::vector<double>& V);

/// Location of the sign change of chi closest to V (linear interpolation);
/// ties resolve toward the larger root.
double find_zero(const std::vector<double>& chi, const VelocityGrid& g, double V);

/// Validation scaffolding: randomized displaced Maxwellians (scale in
/// [0.5, 1.5], displacement in [-0.15, 0.15]) per column, then balanced so the
/// total V-relative first moment vanishes.
KineticField random_validation_field(const PhaseGrid& th, const VelocityGrid& wg,
                                     const FrequencyQuadrature& nu,
                                     const std::vector<double>& V, std::uint64_t seed);

}  // namespace kms
