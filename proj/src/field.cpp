#include "kms/field.hpp"

#include <cmath>
#include <stdexcept>

#include "kms/maxwellian.hpp"

namespace kms {

double KineticField::slice_mass(std::size_t q) const {
    double s = 0.0;
    for (std::size_t i = 0; i < theta.n; ++i) {
        const double* col = column(q, i);
        for (std::size_t j = 0; j < w.n; ++j) s += col[j];
    }
    return s * theta.dtheta * w.dw;
}

std::vector<double> local_flux(const KineticField& f) {
    std::vector<double> phi(f.theta.n, 0.0);
    for (std::size_t q = 0; q < f.nu.size(); ++q) {
        const double wq = f.nu.weights[q];
        for (std::size_t i = 0; i < f.theta.n; ++i) {
            const double* col = f.column(q, i);
            double s = 0.0;
            for (std::size_t j = 0; j < f.w.n; ++j) s += col[j];
            phi[i] += wq * s * f.w.dw;
        }
    }
    return phi;
}

std::vector<double> nonlocal_flux(const KineticField& f, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("nonlocal_flux: eps must be positive");
    const double window = eps * pi;
    const double dth = f.theta.dtheta;
    if (window < 2.0 * dth)
        throw std::invalid_argument("nonlocal_flux: window eps*pi is narrower than 2 cells");

    std::vector<double> rho(f.theta.n, 0.0);
    for (std::size_t q = 0; q < f.nu.size(); ++q) {
        const double wq = f.nu.weights[q];
        for (std::size_t i = 0; i < f.theta.n; ++i) {
            const double* col = f.column(q, i);
            double s = 0.0;
            for (std::size_t j = 0; j < f.w.n; ++j) s += col[j];
            rho[i] += wq * s * f.w.dw;
        }
    }

    const double c_norm = 2.0;
    std::vector<double> out(f.theta.n, 0.0);
    for (std::size_t i = 0; i < f.theta.n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 1; static_cast<double>(k) * dth < window; ++k) {
            const double xi = static_cast<double>(k) * dth;
            acc += std::sin(xi / eps) * rho[f.theta.wrap(static_cast<std::ptrdiff_t>(i + k))];
        }
        out[i] = acc * dth / (c_norm * eps);
    }
    return out;
}

std::vector<double> effective_velocity(const FrequencyQuadrature& nu, std::size_t n_theta,
                                       const std::vector<double>& phi, double K) {
    if (phi.size() != n_theta)
        throw std::invalid_argument("effective_velocity: coupling field size mismatch");
    std::vector<double> V(nu.size() * n_theta);
    for (std::size_t q = 0; q < nu.size(); ++q)
        for (std::size_t i = 0; i < n_theta; ++i) V[q * n_theta + i] = nu.nodes[q] + K * phi[i];
    return V;
}

void finalize_profile(EquilibriumProfile& prof) {
    const std::size_t nth = prof.theta.n;
    for (std::size_t i = 0; i < nth; ++i) {
        double p = 0.0, ynum = 0.0;
        for (std::size_t q = 0; q < prof.nu.size(); ++q) {
            const double pq = prof.P_nu[q * nth + i];
            p += prof.nu.weights[q] * pq;
            ynum += prof.nu.weights[q] * prof.nu.nodes[q] * pq;
        }
        prof.P[i] = p;
        prof.vacuum[i] = (p < vacuum_threshold) ? 1 : 0;
        prof.Y[i] = prof.vacuum[i] ? 0.0 : ynum / p;
    }
    for (std::size_t q = 0; q < prof.nu.size(); ++q)
        for (std::size_t i = 0; i < nth; ++i)
            prof.V[q * nth + i] = prof.nu.nodes[q] + prof.K * prof.P[i];
}

KineticField build_equilibrium_field(const EquilibriumProfile& prof, const VelocityGrid& w) {
    KineticField f(prof.theta, w, prof.nu);
    for (std::size_t q = 0; q < prof.nu.size(); ++q)
        for (std::size_t i = 0; i < prof.theta.n; ++i) {
            const double p = prof.P_nu[q * prof.theta.n + i];
            const double V = prof.V[q * prof.theta.n + i];
            double* col = f.column(q, i);
            for (std::size_t j = 0; j < w.n; ++j) col[j] = p * scaled_maxwellian(w.node(j), V);
        }
    return f;
}

}  // namespace kms
