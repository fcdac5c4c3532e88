#include "kms/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kms/collision.hpp"
#include "kms/io.hpp"
#include "parallel.hpp"

namespace kms {

double kinetic_max_dt(const KineticState& s, const KineticConfig& cfg) {
    return cfg.cfl * s.f.theta.dtheta / max_transport_speed(s.f.w);
}

void transport_substep(KineticState& s, double dt) {
    const auto& th = s.f.theta;
    const auto& wg = s.f.w;
    if (!(dt > 0.0)) throw std::invalid_argument("transport_substep: dt must be positive");
    if (dt * max_transport_speed(wg) > th.dtheta * (1.0 + 1e-12))
        throw std::invalid_argument("transport_substep: CFL violation");

    const double lam = dt / th.dtheta;
    const std::size_t nth = th.n, nw = wg.n;
    std::vector<double> wp(nw), wm(nw);
    for (std::size_t j = 0; j < nw; ++j) {
        const double w = wg.node(j);
        wp[j] = std::max(w, 0.0);
        wm[j] = std::min(w, 0.0);
    }

    const std::vector<double> old = s.f.data;
    for (std::size_t q = 0; q < s.f.nu.size(); ++q) {
        for (std::size_t i = 0; i < nth; ++i) {
            const double* c = &old[s.f.index(q, i, 0)];
            const double* left = &old[s.f.index(q, th.wrap(static_cast<std::ptrdiff_t>(i) - 1), 0)];
            const double* right = &old[s.f.index(q, th.wrap(static_cast<std::ptrdiff_t>(i) + 1), 0)];
            double* out = s.f.column(q, i);
            for (std::size_t j = 0; j < nw; ++j) {
                const double flux_out = wp[j] * c[j] + wm[j] * right[j];
                const double flux_in = wp[j] * left[j] + wm[j] * c[j];
                out[j] = c[j] - lam * (flux_out - flux_in);
            }
        }
    }
}

void collision_substep(KineticState& s, double dt, const std::vector<double>& V,
                       int threads) {
    if (V.size() != s.f.nu.size() * s.f.theta.n)
        throw std::invalid_argument("collision_substep: V table size mismatch");
    const auto [vmin_it, vmax_it] = std::minmax_element(V.begin(), V.end());
    if (!s.f.w.covers(*vmin_it, *vmax_it))
        throw std::invalid_argument(
            "collision_substep: velocity grid lacks the 8-sigma margin around V");
    const double lambda = dt / (s.scaled.epsilon * s.scaled.alpha);

    const std::size_t nw = s.f.w.n;
    const std::size_t columns = s.f.nu.size() * s.f.theta.n;
    detail::parallel_for(columns, threads, [&](std::size_t b, std::size_t end) {
        std::vector<double> lo, di, up, rhs(nw);
        for (std::size_t c = b; c < end; ++c) {
            implicit_collision_matrix(s.f.w, V[c], lambda, lo, di, up);
            double* col = s.f.data.data() + c * nw;
            std::copy(col, col + nw, rhs.begin());
            thomas_solve(lo, di, up, rhs);
            std::copy(rhs.begin(), rhs.end(), col);
        }
    });
}

std::vector<double> coupling_flux(const KineticState& s, const KineticConfig& cfg) {
    if (cfg.coupling == KineticConfig::Coupling::nonlocal) {
        const double eps = cfg.nonlocal_eps > 0.0 ? cfg.nonlocal_eps : s.scaled.epsilon;
        return nonlocal_flux(s.f, eps);
    }
    return local_flux(s.f);
}

void kinetic_step(KineticState& s, double dt, const KineticConfig& cfg) {
    transport_substep(s, 0.5 * dt);
    const auto phi = coupling_flux(s, cfg);
    const auto V = effective_velocity(s.f.nu, s.f.theta.n, phi, cfg.coupling_K);
    collision_substep(s, dt, V, cfg.threads);
    transport_substep(s, 0.5 * dt);
    s.t += dt;
}

Moments moments(const KineticField& f) {
    Moments m;
    const std::size_t cells = f.nu.size() * f.theta.n;
    m.P.assign(cells, 0.0);
    m.flux.assign(cells, 0.0);
    for (std::size_t q = 0; q < f.nu.size(); ++q)
        for (std::size_t i = 0; i < f.theta.n; ++i) {
            const double* col = f.column(q, i);
            double s0 = 0.0, s1 = 0.0;
            for (std::size_t j = 0; j < f.w.n; ++j) {
                s0 += col[j];
                s1 += f.w.node(j) * col[j];
            }
            m.P[q * f.theta.n + i] = s0 * f.w.dw;
            m.flux[q * f.theta.n + i] = s1 * f.w.dw;
        }
    return m;
}

void write_moments_csv(const std::string& path, const KineticState& s) {
    CsvWriter csv({"t", "nu_index", "theta_index", "P", "flux"});
    const auto m = moments(s.f);
    for (std::size_t q = 0; q < s.f.nu.size(); ++q)
        for (std::size_t i = 0; i < s.f.theta.n; ++i)
            csv.row({s.t, static_cast<double>(q), static_cast<double>(i),
                     m.P[q * s.f.theta.n + i], m.flux[q * s.f.theta.n + i]});
    csv.write(path);
}

void write_field_dump(const std::string& base_path, const KineticState& s) {
    nlohmann::json meta;
    meta["t"] = s.t;
    meta["epsilon"] = s.scaled.epsilon;
    meta["shape"] = {s.f.nu.size(), s.f.theta.n, s.f.w.n};
    meta["axes"] = {"nu", "theta", "w"};
    meta["w_min"] = s.f.w.w_min;
    meta["w_max"] = s.f.w.w_max;
    meta["nu_nodes"] = s.f.nu.nodes;
    meta["nu_weights"] = s.f.nu.weights;
    write_binary_dump(base_path, s.f.data, meta);
}

}  // namespace kms
