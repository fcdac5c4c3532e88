#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kms/field.hpp"
#include "kms/grids.hpp"
#include "kms/params.hpp"
#include "kms/rng.hpp"

namespace kms {

struct ParticleEnsemble {
    std::vector<double> theta;
    std::vector<double> w;
    std::vector<double> nu;

    std::size_t size() const { return theta.size(); }
};

/// Named initial-data families for (phase, velocity, frequency).
struct InitialSpec {
    enum class Phase { uniform, gaussian };
    enum class Velocity { delta, gaussian };
    enum class Frequency { delta, uniform, gaussian };

    Phase phase = Phase::uniform;
    double phase_mean = 0.0;
    double phase_stddev = 1.0;

    Velocity velocity = Velocity::delta;
    double w_mean = 0.0;
    double w_stddev = 1.0;

    Frequency frequency = Frequency::delta;
    double nu_a = 0.0;  ///< delta value / uniform lower end / gaussian mean
    double nu_b = 0.0;  ///< uniform upper end / gaussian stddev
};

/// Parse family names; throws on an unknown name.
InitialSpec::Phase parse_phase_family(const std::string& name);
InitialSpec::Velocity parse_velocity_family(const std::string& name);
InitialSpec::Frequency parse_frequency_family(const std::string& name);

ParticleEnsemble sample_initial(const InitialSpec& spec, std::size_t n, std::uint64_t seed);

/// Mean-field synchronization force on every particle, K/N sum of
/// sin(theta_j - theta_i), computed through the two trigonometric sums in O(N).
std::vector<double> sync_force(const ParticleEnsemble& e, double K);

/// One Euler-Maruyama step of the second-order dynamics. Throws when
/// dt > m/10 (stiffness guard). step_index feeds the noise counter, so the
/// trajectory depends only on (seed, initial data, step count), not threads.
void em_step(ParticleEnsemble& e, double dt, const PhysicalParams& p, std::uint64_t seed,
             std::uint64_t step_index, int threads = 1);

/// Histogram estimate of the kinetic density. Frequencies bin to the nearest
/// quadrature node (ties toward the lower index); velocities outside the grid
/// margin are discarded and counted. Each occupied slice is normalized to unit
/// mass over (theta, w).
struct EmpiricalKinetic {
    KineticField f;
    std::vector<char> occupied;       ///< per slice
    std::vector<std::size_t> counts;  ///< kept samples per slice
    std::size_t discarded = 0;
};

EmpiricalKinetic empirical_kinetic(const ParticleEnsemble& e, const PhaseGrid& th,
                                   const VelocityGrid& wg, const FrequencyQuadrature& nu);

struct OrderStats {
    double R = 0.0;
    double psi = 0.0;
    double mean_w = 0.0;
    double var_w = 0.0;
};

OrderStats empirical_order_stats(const ParticleEnsemble& e);

}  // namespace kms
