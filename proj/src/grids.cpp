#include "kms/grids.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kms {

PhaseGrid::PhaseGrid(std::size_t n_cells) : n(n_cells) {
    if (n_cells < 4) throw std::invalid_argument("PhaseGrid: need at least 4 cells");
    dtheta = two_pi / static_cast<double>(n_cells);
}

VelocityGrid::VelocityGrid(double lo, double hi, std::size_t n_nodes)
    : w_min(lo), w_max(hi), n(n_nodes) {
    if (n_nodes < 8) throw std::invalid_argument("VelocityGrid: need at least 8 nodes");
    if (!(hi > lo)) throw std::invalid_argument("VelocityGrid: w_max must exceed w_min");
    dw = (hi - lo) / static_cast<double>(n_nodes - 1);
}

FrequencyQuadrature FrequencyQuadrature::delta(double nu0) {
    FrequencyQuadrature q;
    q.nodes = {nu0};
    q.weights = {1.0};
    return q;
}

FrequencyQuadrature FrequencyQuadrature::midpoint(const std::function<double(double)>& g,
                                                  double a, double b, std::size_t n_nodes) {
    if (n_nodes == 0) throw std::invalid_argument("FrequencyQuadrature: need at least 1 node");
    if (!(b > a)) throw std::invalid_argument("FrequencyQuadrature: empty window");
    FrequencyQuadrature q;
    q.nodes.resize(n_nodes);
    q.weights.resize(n_nodes);
    const double h = (b - a) / static_cast<double>(n_nodes);
    double total = 0.0;
    for (std::size_t k = 0; k < n_nodes; ++k) {
        q.nodes[k] = a + (static_cast<double>(k) + 0.5) * h;
        const double w = g(q.nodes[k]) * h;
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("FrequencyQuadrature: g must be finite and nonnegative");
        q.weights[k] = w;
        total += w;
    }
    if (!(total > 0.0))
        throw std::invalid_argument("FrequencyQuadrature: g vanishes on the window");
    for (double& w : q.weights) w /= total;
    return q;
}

FrequencyQuadrature FrequencyQuadrature::uniform(double a, double b, std::size_t n_nodes) {
    return midpoint([](double) { return 1.0; }, a, b, n_nodes);
}

// Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials:
// eigenvalues are the nodes of the standard normal rule, squared first
// eigenvector components are the weights. The QL sweep below is the classic
// implicit-shift iteration for a symmetric tridiagonal matrix.
FrequencyQuadrature FrequencyQuadrature::gaussian(double mean, double stddev,
                                                  std::size_t n_nodes) {
    if (n_nodes == 0) throw std::invalid_argument("FrequencyQuadrature: need at least 1 node");
    if (!(stddev > 0.0)) throw std::invalid_argument("FrequencyQuadrature: stddev must be positive");
    const std::size_t n = n_nodes;
    std::vector<double> d(n, 0.0), e(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) e[k - 1] = std::sqrt(static_cast<double>(k));
    // First row of the accumulating orthogonal transform; enough for weights.
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;

    for (std::size_t l = 0; l < n; ++l) {
        for (int iter = 0; iter < 64; ++iter) {
            std::size_t m = l;
            for (; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-15 * dd) break;
            }
            if (m == l) break;
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
            double s = 1.0, c = 1.0, p = 0.0;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (r == 0.0 && m > l + 1) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    FrequencyQuadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        q.nodes[k] = mean + stddev * d[order[k]];
        q.weights[k] = z[order[k]] * z[order[k]];
        total += q.weights[k];
    }
    for (double& w : q.weights) w /= total;
    return q;
}

double FrequencyQuadrature::average(const std::vector<double>& samples) const {
    if (samples.size() != nodes.size())
        throw std::invalid_argument("FrequencyQuadrature: sample count mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * samples[k];
    return acc;
}

}  // namespace kms
