#pragma once

#include <cmath>

#include "kms/grids.hpp"
#include "kms/params.hpp"

namespace kms {

/// Dimensional equilibrium density in (theta, w): uniform in phase, Gaussian in
/// velocity with mean nu and variance sigma/m. Integrates to 1 over
/// [0, 2*pi) x R.
inline double maxwellian(double w, double nu, const PhysicalParams& p) {
    const double a = p.m / (2.0 * p.sigma);
    return (1.0 / two_pi) * std::sqrt(p.m / (two_pi * p.sigma)) * std::exp(-a * (w - nu) * (w - nu));
}

/// Unit-variance velocity Maxwellian centered at V; integrates to 1 over R.
inline double scaled_maxwellian(double w, double V) {
    static const double inv_sqrt_2pi = 1.0 / std::sqrt(two_pi);
    return inv_sqrt_2pi * std::exp(-0.5 * (w - V) * (w - V));
}

inline double log_scaled_maxwellian(double w, double V) {
    static const double half_log_2pi = 0.5 * std::log(two_pi);
    return -0.5 * (w - V) * (w - V) - half_log_2pi;
}

struct GaussianMoments {
    double mass = 0.0;
    double flux = 0.0;      ///< first moment, integral of w M_V
    double variance = 0.0;  ///< centered second moment about the discrete mean
    bool coverage_ok = false;
};

/// Trapezoid-free node sums of the scaled Maxwellian's moments on the grid.
/// coverage_ok is cleared when the grid truncates more than 1e-6 of the mass.
inline GaussianMoments gaussian_moments(double V, const VelocityGrid& g) {
    GaussianMoments m;
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double w = g.node(j);
        const double f = scaled_maxwellian(w, V);
        s0 += f;
        s1 += w * f;
    }
    m.mass = s0 * g.dw;
    m.flux = s1 * g.dw;
    const double mean = m.flux / m.mass;
    double s2 = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double w = g.node(j);
        s2 += (w - mean) * (w - mean) * scaled_maxwellian(w, V);
    }
    m.variance = s2 * g.dw / m.mass;
    m.coverage_ok = std::abs(m.mass - 1.0) <= 1e-6;
    return m;
}

}  // namespace kms
