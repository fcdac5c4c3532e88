#include "kms/hydro.hpp"

#include <cmath>
#include <stdexcept>

#include "kms/field.hpp"
#include "kms/io.hpp"

namespace kms {

CouplingFields coupling_fields(const HydroState& s) {
    const std::size_t nth = s.theta.n, nq = s.nu.size();
    CouplingFields c;
    c.P.assign(nth, 0.0);
    c.Y.assign(nth, 0.0);
    c.vacuum.assign(nth, 0);
    c.V.assign(nq * nth, 0.0);
    for (std::size_t i = 0; i < nth; ++i) {
        double p = 0.0, ynum = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
            const double pq = s.P_nu[q * nth + i];
            p += s.nu.weights[q] * pq;
            ynum += s.nu.weights[q] * s.nu.nodes[q] * pq;
        }
        c.P[i] = p;
        c.vacuum[i] = (p < vacuum_threshold) ? 1 : 0;
        c.Y[i] = c.vacuum[i] ? 0.0 : ynum / p;
    }
    for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t i = 0; i < nth; ++i)
            c.V[q * nth + i] = s.nu.nodes[q] + s.K * c.P[i];
    return c;
}

double hydro_max_dt(const HydroState& s, double cfl) {
    const auto c = coupling_fields(s);
    double vmax = 0.0;
    for (double v : c.V) vmax = std::max(vmax, std::abs(v));
    if (!(vmax > 0.0)) throw std::invalid_argument("hydro_max_dt: no transport speed");
    return cfl * s.theta.dtheta / vmax;
}

void hydro_step(HydroState& s, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("hydro_step: dt must be positive");
    const auto c = coupling_fields(s);
    const std::size_t nth = s.theta.n, nq = s.nu.size();

    double vmax = 0.0;
    for (double v : c.V) vmax = std::max(vmax, std::abs(v));
    if (dt * vmax > s.theta.dtheta * (1.0 + 1e-12))
        throw std::invalid_argument("hydro_step: CFL violation");

    const double lam = dt / s.theta.dtheta;
    std::vector<double> flux(nth);
    for (std::size_t q = 0; q < nq; ++q) {
        const double* P = &s.P_nu[q * nth];
        const double* V = &c.V[q * nth];
        for (std::size_t i = 0; i < nth; ++i) {
            const std::size_t ip = s.theta.wrap(static_cast<std::ptrdiff_t>(i) + 1);
            const double a = std::max(std::abs(V[i]), std::abs(V[ip]));
            flux[i] = 0.5 * (V[i] * P[i] + V[ip] * P[ip]) - 0.5 * a * (P[ip] - P[i]);
        }
        double* Pq = &s.P_nu[q * nth];
        std::vector<double> updated(nth);
        for (std::size_t i = 0; i < nth; ++i) {
            const std::size_t im = s.theta.wrap(static_cast<std::ptrdiff_t>(i) - 1);
            updated[i] = Pq[i] - lam * (flux[i] - flux[im]);
        }
        for (std::size_t i = 0; i < nth; ++i) Pq[i] = updated[i];
    }
    s.t += dt;
}

namespace {

ResidualReport balance_residual(const HydroState& prev, const HydroState& next, double dt,
                                bool momentum) {
    if (!(dt > 0.0)) throw std::invalid_argument("balance_residual: dt must be positive");
    if (prev.theta.n != next.theta.n || prev.nu.size() != next.nu.size())
        throw std::invalid_argument("balance_residual: state shape mismatch");
    const auto c0 = coupling_fields(prev);
    const auto c1 = coupling_fields(next);
    const std::size_t nth = prev.theta.n;
    const double K = prev.K;

    auto density = [&](const CouplingFields& c, std::size_t i) {
        return momentum ? 0.5 * (c.P[i] * c.Y[i] + K * c.P[i] * c.P[i]) : c.P[i];
    };
    auto fluxval = [&](const CouplingFields& c, std::size_t i) {
        const double P = c.P[i], Y = c.Y[i];
        if (momentum)
            return 0.5 * (K * Y * P * P + (2.0 / 3.0) * K * K * P * P * P + 2.0 * P);
        return P * Y + K * P * P;
    };

    ResidualReport rep;
    rep.r.assign(nth, 0.0);
    double pymin = 0.0, pymax = 0.0;
    for (std::size_t i = 0; i < nth; ++i) {
        const double py = c0.P[i] * c0.Y[i];
        if (i == 0) pymin = pymax = py;
        pymin = std::min(pymin, py);
        pymax = std::max(pymax, py);
        if (c0.vacuum[i] || c1.vacuum[i]) {
            ++rep.vacuum_cells;
            continue;
        }
        const std::size_t ip = prev.theta.wrap(static_cast<std::ptrdiff_t>(i) + 1);
        const std::size_t im = prev.theta.wrap(static_cast<std::ptrdiff_t>(i) - 1);
        const double ddt = (density(c1, i) - density(c0, i)) / dt;
        const double ddth = (fluxval(c0, ip) - fluxval(c0, im)) / (2.0 * prev.theta.dtheta);
        rep.r[i] = ddt + ddth;
        rep.sup = std::max(rep.sup, std::abs(rep.r[i]));
        rep.l1 += std::abs(rep.r[i]) * prev.theta.dtheta;
    }
    rep.py_variation = pymax - pymin;
    return rep;
}

}  // namespace

ResidualReport velocity_balance_residual(const HydroState& prev, const HydroState& next,
                                         double dt) {
    return balance_residual(prev, next, dt, false);
}

ResidualReport momentum_balance_residual(const HydroState& prev, const HydroState& next,
                                         double dt) {
    return balance_residual(prev, next, dt, true);
}

void write_profiles_csv(const std::string& path, const HydroState& s) {
    CsvWriter csv({"t", "nu_index", "theta_index", "P_nu"});
    for (std::size_t q = 0; q < s.nu.size(); ++q)
        for (std::size_t i = 0; i < s.theta.n; ++i)
            csv.row({s.t, static_cast<double>(q), static_cast<double>(i),
                     s.P_nu[q * s.theta.n + i]});
    csv.write(path);
}

void write_summary_csv(const std::string& path, const HydroState& s) {
    const auto c = coupling_fields(s);
    CsvWriter csv({"t", "theta_index", "P", "Y", "vacuum"});
    for (std::size_t i = 0; i < s.theta.n; ++i)
        csv.row({s.t, static_cast<double>(i), c.P[i], c.Y[i],
                 static_cast<double>(c.vacuum[i])});
    csv.write(path);
}

}  // namespace kms
