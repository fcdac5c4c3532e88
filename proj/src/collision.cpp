#include "kms/collision.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kms/maxwellian.hpp"

namespace kms {

namespace {

void check_size(const std::vector<double>& f, const VelocityGrid& g, const char* who) {
    if (f.size() != g.n) throw std::invalid_argument(std::string(who) + ": size mismatch");
}

// Interface ratios of the scaled Maxwellian between a half point and its two
// neighbors, A_j = M(w_{j+1/2})/M(w_{j+1}) and B_j = M(w_{j+1/2})/M(w_j),
// evaluated in log form. Exponents stay O(dw * |w-V|), so no overflow for any
// covering grid.
struct InterfaceRatios {
    double A, B;
};

InterfaceRatios ratios(const VelocityGrid& g, double V, std::size_t j) {
    const double x = g.node(j) + 0.5 * g.dw - V;
    const double y0 = g.node(j) - V;
    const double y1 = g.node(j + 1) - V;
    return {std::exp(0.5 * (y1 * y1 - x * x)), std::exp(0.5 * (y0 * y0 - x * x))};
}

}  // namespace

std::vector<double> collision_direct(const std::vector<double>& f, const VelocityGrid& g,
                                     double V) {
    check_size(f, g, "collision_direct");
    const std::size_t n = g.n;
    std::vector<double> q(n, 0.0);
    const double inv2 = 1.0 / (2.0 * g.dw);
    const double inv2w = 1.0 / (g.dw * g.dw);
    for (std::size_t j = 0; j < n; ++j) {
        const double fm = (j > 0) ? f[j - 1] : 0.0;
        const double fp = (j + 1 < n) ? f[j + 1] : 0.0;
        const double am = (j > 0) ? (g.node(j - 1) - V) * fm : 0.0;
        const double ap = (j + 1 < n) ? (g.node(j + 1) - V) * fp : 0.0;
        q[j] = (ap - am) * inv2 + (fp - 2.0 * f[j] + fm) * inv2w;
    }
    return q;
}

std::vector<double> collision_factored(const std::vector<double>& f, const VelocityGrid& g,
                                       double V) {
    check_size(f, g, "collision_factored");
    const std::size_t n = g.n;
    std::vector<double> flux(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const auto [A, B] = ratios(g, V, j);
        flux[j] = (f[j + 1] * A - f[j] * B) / g.dw;
    }
    std::vector<double> q(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double gp = (j + 1 < n) ? flux[j] : 0.0;
        const double gm = (j > 0) ? flux[j - 1] : 0.0;
        q[j] = (gp - gm) / g.dw;
    }
    return q;
}

void implicit_collision_matrix(const VelocityGrid& g, double V, double lambda,
                               std::vector<double>& lo, std::vector<double>& di,
                               std::vector<double>& up) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("implicit_collision_matrix: lambda < 0");
    const std::size_t n = g.n;
    lo.assign(n, 0.0);
    di.assign(n, 1.0);
    up.assign(n, 0.0);
    const double r = lambda / (g.dw * g.dw);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const auto [A, B] = ratios(g, V, j);
        up[j] -= r * A;
        di[j] += r * B;
        lo[j + 1] -= r * B;
        di[j + 1] += r * A;
    }
}

void thomas_solve(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up,
                  std::vector<double>& rhs) {
    const std::size_t n = di.size();
    if (lo.size() != n || up.size() != n || rhs.size() != n)
        throw std::invalid_argument("thomas_solve: band size mismatch");
    for (std::size_t j = 1; j < n; ++j) {
        const double m = lo[j] / di[j - 1];
        di[j] -= m * up[j - 1];
        rhs[j] -= m * rhs[j - 1];
    }
    rhs[n - 1] /= di[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] = (rhs[j] - up[j] * rhs[j + 1]) / di[j];
}

GreenIdentity green_identity_check(const std::vector<double>& f, const std::vector<double>& phi,
                                   const VelocityGrid& g, double V) {
    check_size(f, g, "green_identity_check");
    check_size(phi, g, "green_identity_check");
    const std::size_t n = g.n;

    const auto q = collision_factored(f, g, V);
    GreenIdentity out;
    for (std::size_t j = 0; j < n; ++j) out.pairing += q[j] * phi[j] * g.dw;

    // Half-point form reuses the flux G_{j+1/2} = M_{j+1/2} (u_{j+1}-u_j)/dw,
    // so the summation by parts telescopes exactly against the zero boundary
    // fluxes.
    double sbp = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const auto [A, B] = ratios(g, V, j);
        const double flux = (f[j + 1] * A - f[j] * B) / g.dw;
        sbp += flux * (phi[j + 1] - phi[j]);
    }
    out.dirichlet_halfpoint = -sbp;
    out.residual_halfpoint = std::abs(out.pairing - out.dirichlet_halfpoint);

    // Node-centered form differentiates u = f/M and phi independently; it
    // agrees with the pairing only up to O(dw^2).
    std::vector<double> u(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double M = scaled_maxwellian(g.node(j), V);
        u[j] = (M > 1e-300) ? f[j] / M : 0.0;
    }
    double cen = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double M = scaled_maxwellian(g.node(j), V);
        const double du = (u[j + 1] - u[j - 1]) / (2.0 * g.dw);
        const double dphi = (phi[j + 1] - phi[j - 1]) / (2.0 * g.dw);
        cen += M * du * dphi * g.dw;
    }
    out.dirichlet_centered = -cen;
    out.residual_centered = std::abs(out.pairing - out.dirichlet_centered);
    return out;
}

}  // namespace kms
