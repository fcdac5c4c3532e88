#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kms/grids.hpp"
#include "kms/hardy.hpp"

using namespace kms;

namespace {

constexpr double sqrt_pi = 1.7724538509055160273;

// Composite Simpson with a fixed even panel count; the oracle side of every
// comparison here, kept independent of the adaptive routine under test.
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double s = f(a) + f(b);
    for (std::size_t k = 1; k < n; ++k)
        s += f(a + static_cast<double>(k) * h) * ((k % 2 == 1) ? 4.0 : 2.0);
    return s * h / 3.0;
}

double oracle_tail(double r, double V) { return 0.5 * std::erfc((r - V) / std::sqrt(2.0)); }

double oracle_reciprocal(double d, double r, double V) {
    return simpson(
        [V](double w) { return std::sqrt(two_pi) * std::exp(0.5 * (w - V) * (w - V)); }, d,
        r, 8192);
}

double oracle_product(double d, double r, double V) {
    return oracle_tail(r, V) * oracle_reciprocal(d, r, V);
}

// sup_{r > d} tail * reciprocal by a coarse scan followed by two grid
// refinements around the argmax.
double oracle_sup(double d, double V, double* argmax = nullptr) {
    double lo = d + 1e-4, hi = d + 8.0;
    double best = 0.0, best_r = lo;
    double step = 2e-3;
    for (int pass = 0; pass < 3; ++pass) {
        for (double r = lo; r <= hi; r += step) {
            const double p = oracle_product(d, r, V);
            if (p > best) {
                best = p;
                best_r = r;
            }
        }
        lo = best_r - 2.0 * step;
        hi = best_r + 2.0 * step;
        step *= 0.01;
    }
    if (argmax) *argmax = best_r;
    return best;
}

}  // namespace

TEST_CASE("adaptive quadrature hits analytic integrals") {
    const auto s = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, pi, 1e-13);
    CHECK(std::abs(s.value - 2.0) <= 1e-12);
    const auto g = adaptive_simpson([](double x) { return std::exp(-x * x); }, -7.0, 7.0,
                                    1e-14);
    CHECK(g.value == doctest::Approx(sqrt_pi).epsilon(1e-13));
}

TEST_CASE("gaussian tail matches erfc") {
    for (double a : {0.3, 1.0, 3.0, 6.5, 8.0}) {
        const double want = 0.5 * sqrt_pi * std::erfc(a);
        CHECK(gauss_tail(a).value == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("growth integral matches composite quadrature") {
    for (auto ab : std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.5, 2.5}, {-1.0, 3.0}}) {
        const double want = simpson([](double x) { return std::exp(x * x); }, ab.first,
                                    ab.second, 16384);
        CHECK(gauss_growth(ab.first, ab.second).value ==
              doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("weight integrals reduce to the substituted pair") {
    for (double r : {-1.0, 0.5, 2.0, 5.0}) {
        CHECK(weight_tail(r, 0.3).value ==
              doctest::Approx(oracle_tail(r, 0.3)).epsilon(1e-12));
    }
    const double want = oracle_reciprocal(0.2, 1.7, 0.3);
    CHECK(weight_reciprocal(0.2, 1.7, 0.3).value == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("asymptotic tail series stays within its truncation bound") {
    CHECK_THROWS_AS(asymptotic_gauss_tail(0.5), std::invalid_argument);
    for (double a : {0.8, 1.5, 2.0, 3.0, 4.5, 6.0}) {
        const auto s = asymptotic_gauss_tail(a);
        const double want = 0.5 * sqrt_pi * std::erfc(a);
        CHECK(std::abs(s.value - want) <= s.truncation_bound + 1e-16);
        CHECK(s.terms >= 1);
    }
}

TEST_CASE("supremum search reproduces the frozen origin constant") {
    const auto m = muckenhoupt_sup(0.0, 0.0);
    CHECK(std::abs(m.value - 0.478812895) <= 5e-7);
    CHECK(std::abs(m.r_star - 0.899392) <= 1e-4);
}

TEST_CASE("supremum search agrees with the nested-quadrature oracle") {
    for (auto [d, V] : std::vector<std::pair<double, double>>{{0.5, 0.2}, {-0.7, 0.4}}) {
        const double want = oracle_sup(d, V);
        const auto got = muckenhoupt_sup(d, V);
        CHECK(std::abs(got.value - want) <= 1e-6 * want);
    }
}

TEST_CASE("the constant is shift invariant") {
    const auto a = muckenhoupt_sup(0.8, 0.5);
    const auto b = muckenhoupt_sup(0.3, 0.0);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));
}

TEST_CASE("report combines the two one-sided constants") {
    const auto rep = muckenhoupt_report(0.3, 0.1);
    const auto direct = muckenhoupt_sup(0.3, 0.1);
    const auto mirrored = muckenhoupt_sup(2.0 * 0.1 - 0.3, 0.1);
    CHECK(rep.B == direct.value);
    CHECK(rep.B_mirror == mirrored.value);
    CHECK(rep.bracket_lo == std::max(rep.B, rep.B_mirror));
    CHECK(rep.bracket_hi == 4.0 * std::min(rep.B, rep.B_mirror));
    CHECK(rep.bracket_empty == (rep.bracket_lo > rep.bracket_hi));
}

TEST_CASE("large offsets collapse the scaled pair product to one") {
    double prev = 1e9;
    for (double off : {6.0, 7.0, 8.0}) {
        const double p = scaled_pair_product(0.3, 0.3 + off, 0.3);
        CHECK(std::abs(p - 1.0) <= 0.05);
        CHECK(std::abs(p - 1.0) <= prev);  // approach is monotone here
        prev = std::abs(p - 1.0);
    }
    CHECK(std::abs(scaled_pair_product(0.3, 0.3 + 8.0, 0.3) - 1.0) <= 0.02);
}

TEST_CASE("anchored ratios respect the bracket") {
    const double d = 0.25, V = 0.0;
    const auto rep = muckenhoupt_report(d, V);
    REQUIRE_FALSE(rep.bracket_empty);
    const VelocityGrid g(d, d + 14.0, 400);
    for (double kap : {0.0, 0.4, 0.9, 1.5}) {
        std::vector<double> u(g.n);
        for (std::size_t j = 0; j < g.n; ++j) {
            const double x = g.node(j) - d;
            u[j] = x * std::exp(-kap * x);
        }
        const double ratio = hardy_ratio(u, d, V, g);
        CHECK(ratio > 0.0);
        CHECK(ratio <= rep.bracket_hi * 1.05);
    }
}

TEST_CASE("linear ramp anchored at the center has unit ratio") {
    const double V = 0.4;
    const VelocityGrid g(V, V + 14.0, 4096);
    std::vector<double> u(g.n);
    for (std::size_t j = 0; j < g.n; ++j) u[j] = g.node(j) - V;
    // Half-line second moment and half-line mass of the weight are both 1/2.
    CHECK(hardy_ratio(u, V, V, g) == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("ratio rejects bad anchors and empty numerators") {
    const VelocityGrid g(0.0, 14.0, 256);
    std::vector<double> u(g.n, 1.0);
    CHECK_THROWS_AS(hardy_ratio(u, -1.0, 0.0, g), std::invalid_argument);
    std::vector<double> zero(g.n, 0.0);
    CHECK(hardy_ratio(zero, 0.5, 0.0, g) == 0.0);
}
