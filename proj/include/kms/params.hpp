#pragma once

#include <cmath>
#include <stdexcept>

namespace kms {

/// Dimensional model constants: inertia m, coupling strength K, noise strength sigma.
struct PhysicalParams {
    double m = 1.0;
    double K = 1.0;
    double sigma = 1.0;
};

/// Reference scales for the stiff regime, all derived from (m, sigma) plus the
/// scale-separation parameter epsilon.
struct ScaledParams {
    double w0 = 1.0;       ///< velocity scale sqrt(sigma/m)
    double t0 = 1.0;       ///< time scale sqrt(m/sigma)
    double alpha = 1.0;    ///< sqrt(sigma*m); the collision stiffness prefactor is epsilon*alpha
    double epsilon = 1.0;  ///< scale separation, in (0, 1]
};

inline void validate(const PhysicalParams& p) {
    if (!(p.m > 0.0) || !std::isfinite(p.m))
        throw std::invalid_argument("PhysicalParams: m must be finite and positive");
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw std::invalid_argument("PhysicalParams: sigma must be finite and positive");
    if (!(p.K >= 0.0) || !std::isfinite(p.K))
        throw std::invalid_argument("PhysicalParams: K must be finite and nonnegative");
}

inline ScaledParams nondimensionalize(const PhysicalParams& p, double epsilon) {
    validate(p);
    if (!(epsilon > 0.0) || !(epsilon <= 1.0))
        throw std::invalid_argument("nondimensionalize: epsilon must lie in (0, 1]");
    ScaledParams s;
    s.w0 = std::sqrt(p.sigma / p.m);
    s.t0 = std::sqrt(p.m / p.sigma);
    s.alpha = std::sqrt(p.sigma * p.m);
    s.epsilon = epsilon;
    return s;
}

}  // namespace kms
