#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kms {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Uniform periodic grid of cell centers on [0, 2*pi).
struct PhaseGrid {
    std::size_t n;
    double dtheta;

    explicit PhaseGrid(std::size_t n_cells);

    /// Center of cell i. The index wraps: node(i + n) == node(i).
    double node(std::ptrdiff_t i) const {
        return (static_cast<double>(wrap(i)) + 0.5) * dtheta;
    }

    std::size_t wrap(std::ptrdiff_t i) const {
        const auto m = static_cast<std::ptrdiff_t>(n);
        return static_cast<std::size_t>(((i % m) + m) % m);
    }
};

/// Uniform node grid on [w_min, w_max], endpoints included.
struct VelocityGrid {
    double w_min;
    double w_max;
    std::size_t n;
    double dw;

    VelocityGrid(double lo, double hi, std::size_t n_nodes);

    double node(std::size_t j) const { return w_min + static_cast<double>(j) * dw; }

    /// True when every drift velocity in [v_lo, v_hi] keeps an 8-sigma margin
    /// to both grid ends.
    bool covers(double v_lo, double v_hi) const {
        return w_min <= v_lo - 8.0 + 1e-12 && w_max >= v_hi + 8.0 - 1e-12;
    }
};

/// Quadrature rule for averages over the natural frequency distribution g.
/// Weights are nonnegative and sum to 1.
struct FrequencyQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    /// Single atom at nu0 (g = delta_{nu0}).
    static FrequencyQuadrature delta(double nu0);

    /// Midpoint rule on [a, b] against the density g (renormalized over the window).
    static FrequencyQuadrature midpoint(const std::function<double(double)>& g, double a,
                                        double b, std::size_t n_nodes);

    /// Midpoint rule for the uniform density on [a, b].
    static FrequencyQuadrature uniform(double a, double b, std::size_t n_nodes);

    /// Gauss-Hermite rule for the Gaussian density with the given mean and stddev.
    static FrequencyQuadrature gaussian(double mean, double stddev, std::size_t n_nodes);

    /// Weighted average of per-node samples (samples.size() == size()).
    double average(const std::vector<double>& samples) const;
};

}  // namespace kms
