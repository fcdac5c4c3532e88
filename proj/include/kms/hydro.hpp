#pragma once

#include <string>
#include <vector>

#include "kms/grids.hpp"

namespace kms {

/// Per-frequency phase densities P_nu(theta) advected by V = nu + K*P.
struct HydroState {
    PhaseGrid theta;
    FrequencyQuadrature nu;
    double K = 0.0;
    std::vector<double> P_nu;  ///< [q*n_theta + i]
    double t = 0.0;

    HydroState(PhaseGrid th, FrequencyQuadrature fq, double coupling)
        : theta(th), nu(fq), K(coupling), P_nu(fq.size() * th.n, 0.0) {}
};

struct CouplingFields {
    std::vector<double> P;    ///< [i], g-average of P_nu
    std::vector<double> Y;    ///< [i], mean frequency; 0 on vacuum cells
    std::vector<char> vacuum; ///< [i], P below the vacuum threshold
    std::vector<double> V;    ///< [q*n_theta + i]
};

CouplingFields coupling_fields(const HydroState& s);

/// Step size at the given fraction of the advective stability bound.
double hydro_max_dt(const HydroState& s, double cfl);

/// One forward-Euler finite-volume step with the local Lax-Friedrichs flux;
/// the coupling fields are refreshed once at the start of the step. Throws on
/// a CFL violation. Each slice's update is conservative, so the g-averaged
/// update telescopes to a conservative update of P.
void hydro_step(HydroState& s, double dt);

/// Pointwise residual of a balance law between two states dt apart: forward
/// difference in t, centered differences in theta evaluated on the earlier
/// state.
struct ResidualReport {
    std::vector<double> r;       ///< [i]
    double sup = 0.0;
    double l1 = 0.0;
    std::size_t vacuum_cells = 0;
    double py_variation = 0.0;   ///< sup - inf of P*Y on the earlier state
};

/// Residual of d/dt P + d/dtheta (P Y + K P^2).
ResidualReport velocity_balance_residual(const HydroState& prev, const HydroState& next,
                                         double dt);

/// Residual of (1/2) d/dt (P Y + K P^2)
///            + (1/2) d/dtheta (K Y P^2 + (2/3) K^2 P^3 + 2 P).
ResidualReport momentum_balance_residual(const HydroState& prev, const HydroState& next,
                                         double dt);

/// Long-form CSV: t, nu_index, theta_index, P_nu.
void write_profiles_csv(const std::string& path, const HydroState& s);

/// Summary CSV: t, theta_index, P, Y, vacuum.
void write_summary_csv(const std::string& path, const HydroState& s);

}  // namespace kms
