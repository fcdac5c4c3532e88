#include "kms/gci.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kms/collision.hpp"
#include "kms/maxwellian.hpp"
#include "kms/rng.hpp"

namespace kms {

GciSolution solve_gci(double V, const VelocityGrid& g) {
    const std::size_t n = g.n;
    GciSolution sol;
    sol.chi.assign(n, 0.0);

    std::vector<double> M(n), Mh(n - 1), rhs(n);
    for (std::size_t j = 0; j < n; ++j) M[j] = scaled_maxwellian(g.node(j), V);
    for (std::size_t j = 0; j + 1 < n; ++j)
        Mh[j] = scaled_maxwellian(g.node(j) + 0.5 * g.dw, V);

    double compat = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        rhs[j] = (g.node(j) - V) * M[j];
        compat += rhs[j] * g.dw;
    }
    sol.compat_residual = std::abs(compat);

    // Flux-form rows: (-Mh[j-1] chi[j-1] + (Mh[j-1]+Mh[j]) chi[j] - Mh[j] chi[j+1]) / dw^2.
    const double inv = 1.0 / (g.dw * g.dw);
    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), b = rhs;
    for (std::size_t j = 0; j < n; ++j) {
        const double left = (j > 0) ? Mh[j - 1] : 0.0;
        const double right = (j + 1 < n) ? Mh[j] : 0.0;
        di[j] = (left + right) * inv;
        if (j > 0) lo[j] = -left * inv;
        if (j + 1 < n) up[j] = -right * inv;
    }

    // The zero-flux system is singular (constants); pin the node nearest V,
    // where the weight peaks, so the replaced equation's defect is harmless.
    std::size_t jp = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (M[j] > M[jp]) jp = j;
    sol.pinned_index = jp;
    if (!(M[jp] > 1e-300)) return sol;  // weight underflowed: V is far outside the grid
    lo[jp] = 0.0;
    di[jp] = 1.0;
    up[jp] = 0.0;
    b[jp] = 0.0;

    thomas_solve(lo, di, up, b);
    sol.chi = std::move(b);

    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        num += sol.chi[j] * M[j];
        den += M[j];
    }
    const double mean = num / den;
    for (double& c : sol.chi) c -= mean;

    double resid = 0.0;
    for (std::size_t j = 0; j < n; ++j) resid += sol.chi[j] * M[j];
    sol.constraint_residual = std::abs(resid) / den;
    sol.ok = std::isfinite(sol.constraint_residual);
    for (double c : sol.chi)
        if (!std::isfinite(c)) sol.ok = false;
    return sol;
}

Seminorms weighted_seminorms(const std::vector<double>& phi, double V, const VelocityGrid& g) {
    if (phi.size() != g.n) throw std::invalid_argument("weighted_seminorms: size mismatch");
    Seminorms s;
    double l2 = 0.0, h1 = 0.0;
    for (std::size_t j = 0; j < g.n; ++j)
        l2 += phi[j] * phi[j] * scaled_maxwellian(g.node(j), V);
    for (std::size_t j = 0; j + 1 < g.n; ++j) {
        const double d = (phi[j + 1] - phi[j]) / g.dw;
        h1 += d * d * scaled_maxwellian(g.node(j) + 0.5 * g.dw, V);
    }
    s.l2 = std::sqrt(l2 * g.dw);
    s.h1 = std::sqrt(h1 * g.dw);
    return s;
}

double collision_invariant_check(const std::vector<double>& phi, const KineticField& f,
                                 double K) {
    if (phi.size() != f.w.n)
        throw std::invalid_argument("collision_invariant_check: phi size mismatch");
    const auto coupling = local_flux(f);
    double total = 0.0;
    std::vector<double> col(f.w.n);
    for (std::size_t q = 0; q < f.nu.size(); ++q) {
        const double wq = f.nu.weights[q];
        for (std::size_t i = 0; i < f.theta.n; ++i) {
            const double V = f.nu.nodes[q] + K * coupling[i];
            col.assign(f.column(q, i), f.column(q, i) + f.w.n);
            const auto q_col = collision_direct(col, f.w, V);
            double s = 0.0;
            for (std::size_t j = 0; j < f.w.n; ++j) s += phi[j] * q_col[j];
            total += wq * s * f.w.dw * f.theta.dtheta;
        }
    }
    return std::abs(total);
}

GciInvariance gci_invariance(const KineticField& f, const std::vector<double>& V,
                             const std::vector<double>& phi_nu, double beta) {
    if (V.size() != f.nu.size() * f.theta.n)
        throw std::invalid_argument("gci_invariance: V table size mismatch");
    if (phi_nu.size() != f.nu.size())
        throw std::invalid_argument("gci_invariance: phi_nu size mismatch");
    GciInvariance out;
    std::vector<double> col(f.w.n);
    for (std::size_t q = 0; q < f.nu.size(); ++q) {
        const double wq = f.nu.weights[q];
        for (std::size_t i = 0; i < f.theta.n; ++i) {
            const double v = V[q * f.theta.n + i];
            col.assign(f.column(q, i), f.column(q, i) + f.w.n);
            const auto q_col = collision_factored(col, f.w, v);
            double pair = 0.0, cons = 0.0;
            for (std::size_t j = 0; j < f.w.n; ++j) {
                const double rel = f.w.node(j) - v;
                pair += (phi_nu[q] + beta * rel) * q_col[j];
                cons += rel * col[j];
            }
            out.pairing += wq * pair * f.w.dw * f.theta.dtheta;
            out.constraint += wq * cons * f.w.dw * f.theta.dtheta;
        }
    }
    return out;
}

GciInvariance gci_invariance(const KineticField& f, const std::vector<double>& V, double a,
                             double beta) {
    return gci_invariance(f, V, std::vector<double>(f.nu.size(), a), beta);
}

void balance_first_moment(KineticField& f, const std::vector<double>& V) {
    if (V.size() != f.nu.size() * f.theta.n)
        throw std::invalid_argument("balance_first_moment: V table size mismatch");
    double total = 0.0;
    for (std::size_t q = 0; q < f.nu.size(); ++q) {
        const double wq = f.nu.weights[q];
        for (std::size_t i = 0; i < f.theta.n; ++i) {
            const double v = V[q * f.theta.n + i];
            const double* col = f.column(q, i);
            double s = 0.0;
            for (std::size_t j = 0; j < f.w.n; ++j) s += (f.w.node(j) - v) * col[j];
            total += wq * s * f.w.dw * f.theta.dtheta;
        }
    }
    // Odd corrector (w-V) M_V on slice (0, 0): mass-free, unit discrete
    // variance up to truncation.
    const double v0 = V[0];
    double strength = 0.0;
    for (std::size_t j = 0; j < f.w.n; ++j) {
        const double rel = f.w.node(j) - v0;
        strength += rel * rel * scaled_maxwellian(f.w.node(j), v0);
    }
    strength *= f.w.dw * f.nu.weights[0] * f.theta.dtheta;
    if (!(std::abs(strength) > 0.0))
        throw std::invalid_argument("balance_first_moment: degenerate corrector");
    const double c = total / strength;
    double* col = f.column(0, 0);
    for (std::size_t j = 0; j < f.w.n; ++j) {
        const double rel = f.w.node(j) - v0;
        col[j] -= c * rel * scaled_maxwellian(f.w.node(j), v0);
    }
}

KineticField random_validation_field(const PhaseGrid& th, const VelocityGrid& wg,
                                     const FrequencyQuadrature& nu,
                                     const std::vector<double>& V, std::uint64_t seed) {
    if (V.size() != nu.size() * th.n)
        throw std::invalid_argument("random_validation_field: V table size mismatch");
    KineticField f(th, wg, nu);
    for (std::size_t q = 0; q < nu.size(); ++q)
        for (std::size_t i = 0; i < th.n; ++i) {
            const std::size_t c = q * th.n + i;
            const double scale = 0.5 + rng::uniform01(seed, c, 11);
            const double shift = 0.3 * (rng::uniform01(seed, c, 12) - 0.5);
            double* col = f.column(q, i);
            for (std::size_t j = 0; j < wg.n; ++j)
                col[j] = scale * scaled_maxwellian(wg.node(j), V[c] + shift);
        }
    balance_first_moment(f, V);
    return f;
}

double find_zero(const std::vector<double>& chi, const VelocityGrid& g, double V) {
    if (chi.size() != g.n) throw std::invalid_argument("find_zero: size mismatch");
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < g.n; ++j) {
        if (chi[j] == 0.0 && chi[j + 1] == 0.0) continue;
        if (chi[j] * chi[j + 1] > 0.0) continue;
        const double denom = chi[j + 1] - chi[j];
        const double root =
            (denom != 0.0) ? g.node(j) - chi[j] * g.dw / denom : g.node(j);
        const double dist = std::abs(root - V);
        if (dist < best_dist || (dist == best_dist && root > best)) {
            best = root;
            best_dist = dist;
        }
    }
    if (!std::isfinite(best))
        throw std::runtime_error("find_zero: no sign change on the grid");
    return best;
}

}  // namespace kms
