#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "kms/collision.hpp"
#include "kms/maxwellian.hpp"
#include "kms/rng.hpp"
#include "test_support.hpp"

using namespace kms;

namespace {

std::vector<double> maxwellian_column(const VelocityGrid& g, double V) {
    std::vector<double> f(g.n);
    for (std::size_t j = 0; j < g.n; ++j) f[j] = scaled_maxwellian(g.node(j), V);
    return f;
}

std::vector<double> smooth_column(const VelocityGrid& g, double V) {
    std::vector<double> f(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double w = g.node(j);
        f[j] = scaled_maxwellian(w, V) * (1.0 + 0.3 * std::sin(1.3 * (w - V)));
    }
    return f;
}

// Dense Gaussian elimination with partial pivoting, as an oracle for the
// tridiagonal solver.
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(A[r][k]) > std::abs(A[p][k])) p = r;
        std::swap(A[k], A[p]);
        std::swap(b[k], b[p]);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double m = A[r][k] / A[k][k];
            for (std::size_t c = k; c < n; ++c) A[r][c] -= m * A[k][c];
            b[r] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t c = k + 1; c < n; ++c) s -= A[k][c] * x[c];
        x[k] = s / A[k][k];
    }
    return x;
}

}  // namespace

TEST_CASE("factored operator annihilates its equilibrium") {
    const VelocityGrid g(-8.7, 9.3, 128);
    const double V = 0.3;
    const auto f = maxwellian_column(g, V);
    const auto q = collision_factored(f, g, V);
    double worst = 0.0;
    for (double v : q) worst = std::max(worst, std::abs(v));
    CHECK(worst <= 1e-12);
}

TEST_CASE("direct operator residual on the equilibrium shrinks at second order") {
    const double V = -0.4;
    std::vector<double> hs, errs;
    for (std::size_t n : {std::size_t{64}, std::size_t{128}, std::size_t{256},
                          std::size_t{512}}) {
        const VelocityGrid g(V - 9.0, V + 9.0, n);
        const auto q = collision_direct(maxwellian_column(g, V), g, V);
        double worst = 0.0;
        for (double v : q) worst = std::max(worst, std::abs(v));
        hs.push_back(g.dw);
        errs.push_back(worst);
    }
    const double slope = test_support::loglog_slope(hs, errs);
    CHECK(slope >= 1.7);
    CHECK(slope <= 2.3);
}

TEST_CASE("direct and factored forms converge to each other at second order") {
    const double V = 0.6;
    std::vector<double> hs, errs;
    for (std::size_t n : {std::size_t{64}, std::size_t{128}, std::size_t{256},
                          std::size_t{512}}) {
        const VelocityGrid g(V - 9.0, V + 9.0, n);
        const auto f = smooth_column(g, V);
        const auto qd = collision_direct(f, g, V);
        const auto qf = collision_factored(f, g, V);
        double worst = 0.0;
        for (std::size_t j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(qd[j] - qf[j]));
        hs.push_back(g.dw);
        errs.push_back(worst);
    }
    const double slope = test_support::loglog_slope(hs, errs);
    CHECK(slope >= 1.7);
    CHECK(slope <= 2.3);
}

TEST_CASE("implicit matrix has unit column sums") {
    const VelocityGrid g(-9.0, 9.0, 96);
    std::vector<double> lo, di, up;
    implicit_collision_matrix(g, 0.45, 0.8, lo, di, up);
    for (std::size_t j = 0; j < g.n; ++j) {
        double s = di[j];
        if (j > 0) s += up[j - 1];
        if (j + 1 < g.n) s += lo[j + 1];
        CHECK(std::abs(s - 1.0) <= 1e-13);
    }
}

TEST_CASE("implicit collision step conserves mass and positivity") {
    const VelocityGrid g(-9.0, 9.0, 128);
    const double V = 0.2;
    std::vector<double> f(g.n, 0.0);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double u = rng::uniform01(42, j, 0);
        f[j] = (j % 7 == 0) ? 0.0 : u * scaled_maxwellian(g.node(j), -1.0);
    }
    double mass0 = 0.0;
    for (double v : f) mass0 += v * g.dw;

    std::vector<double> lo, di, up;
    implicit_collision_matrix(g, V, 2.5, lo, di, up);
    thomas_solve(lo, di, up, f);

    double mass1 = 0.0, minv = 1.0;
    for (double v : f) {
        mass1 += v * g.dw;
        minv = std::min(minv, v);
    }
    CHECK(std::abs(mass1 - mass0) <= 1e-13 * mass0);
    CHECK(minv >= -1e-15);
}

TEST_CASE("implicit step leaves the equilibrium fixed") {
    const VelocityGrid g(-8.5, 9.5, 160);
    const double V = 0.5;
    auto f = maxwellian_column(g, V);
    const auto f0 = f;
    std::vector<double> lo, di, up;
    implicit_collision_matrix(g, V, 5.0, lo, di, up);
    thomas_solve(lo, di, up, f);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(f[j] - f0[j]));
    CHECK(worst <= 1e-13);
}

TEST_CASE("tridiagonal solve matches dense elimination") {
    const std::size_t n = 12;
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        lo[j] = -0.3 - 0.1 * rng::uniform01(7, j, 1);
        up[j] = -0.2 - 0.1 * rng::uniform01(7, j, 2);
        di[j] = 1.0 + std::abs(lo[j]) + std::abs(up[j]);
        rhs[j] = rng::uniform01(7, j, 3) - 0.4;
        A[j][j] = di[j];
        if (j > 0) A[j][j - 1] = lo[j];
        if (j + 1 < n) A[j][j + 1] = up[j];
    }
    const auto want = dense_solve(A, rhs);
    thomas_solve(lo, di, up, rhs);
    for (std::size_t j = 0; j < n; ++j) CHECK(rhs[j] == doctest::Approx(want[j]).epsilon(1e-12));
}

TEST_CASE("half-point Green identity is exact; node-centered is second order") {
    const double V = 0.1;
    std::vector<double> hs, centered;
    for (std::size_t n : {std::size_t{128}, std::size_t{256}, std::size_t{512}}) {
        const VelocityGrid g(V - 9.0, V + 9.0, n);
        const auto f = smooth_column(g, V);
        std::vector<double> phi(g.n);
        for (std::size_t j = 0; j < g.n; ++j) {
            const double w = g.node(j);
            phi[j] = std::cos(0.7 * w) + 0.2 * w;
        }
        const auto id = green_identity_check(f, phi, g, V);
        const double scale = std::abs(id.pairing) + std::abs(id.dirichlet_halfpoint) + 1e-30;
        CHECK(id.residual_halfpoint <= 1e-13 * scale + 1e-15);
        hs.push_back(g.dw);
        centered.push_back(id.residual_centered);
    }
    const double slope = test_support::loglog_slope(hs, centered);
    CHECK(slope >= 1.6);
    CHECK(slope <= 2.4);
}
