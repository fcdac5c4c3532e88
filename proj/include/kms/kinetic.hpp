#pragma once

#include <string>
#include <vector>

#include "kms/field.hpp"
#include "kms/grids.hpp"
#include "kms/params.hpp"

namespace kms {

struct KineticConfig {
    double cfl = 0.45;          ///< fraction of the transport stability bound used to pick dt
    double coupling_K = 0.0;
    enum class Coupling { local, nonlocal } coupling = Coupling::local;
    double nonlocal_eps = 0.0;  ///< window parameter; 0 means reuse scaled.epsilon
    int threads = 1;            ///< worker threads; results are thread-count independent
};

struct KineticState {
    KineticField f;
    ScaledParams scaled;
    double t = 0.0;
};

/// Largest advection speed the grid carries.
inline double max_transport_speed(const VelocityGrid& g) {
    const double a = g.w_min < 0.0 ? -g.w_min : g.w_min;
    const double b = g.w_max < 0.0 ? -g.w_max : g.w_max;
    return a > b ? a : b;
}

/// Step size at the configured CFL fraction.
double kinetic_max_dt(const KineticState& s, const KineticConfig& cfg);

/// Conservative first-order upwind transport in theta at speed w, periodic.
/// Throws when dt violates the CFL bound.
void transport_substep(KineticState& s, double dt);

/// Implicit factored collision step with rate dt/(epsilon*alpha); V indexed as
/// [q*n_theta + i]. Throws when some V lacks the 8-sigma grid margin.
void collision_substep(KineticState& s, double dt, const std::vector<double>& V,
                       int threads = 1);

/// Strang step: transport dt/2, one coupling refresh feeding the implicit
/// collision step of size dt, transport dt/2.
void kinetic_step(KineticState& s, double dt, const KineticConfig& cfg);

/// Current coupling field of the configured type.
std::vector<double> coupling_flux(const KineticState& s, const KineticConfig& cfg);

struct Moments {
    std::vector<double> P;     ///< [q*n_theta + i]
    std::vector<double> flux;  ///< [q*n_theta + i], first w-moment
};

Moments moments(const KineticField& f);

/// Long-form CSV of the momenta: t, nu_index, theta_index, P, flux.
void write_moments_csv(const std::string& path, const KineticState& s);

/// Full field to base.bin/base.json with grid metadata.
void write_field_dump(const std::string& base_path, const KineticState& s);

}  // namespace kms
