#pragma once

#include <functional>
#include <vector>

#include "kms/grids.hpp"

namespace kms {

/// Quadrature value with an accumulated error estimate.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Simpson integration with Richardson acceptance (|S2 - S| <= 15 tol).
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double tol, int max_depth = 48);

/// Divergent asymptotic series for int_a^inf e^{-x^2} dx, truncated at the
/// first non-decreasing term or after max_terms terms, whichever comes first.
/// Requires a^2 > 1/2 (otherwise the first step already grows); the truncation
/// bound is the magnitude of the first omitted term.
struct TailSeries {
    double value = 0.0;
    double truncation_bound = 0.0;
    int terms = 0;
};

TailSeries asymptotic_gauss_tail(double a, int max_terms = 64);

/// int_a^inf e^{-x^2} dx via adaptive quadrature up to the series regime.
QuadResult gauss_tail(double a);

/// int_b^a e^{x^2} dx (b < a) via adaptive quadrature with relative tolerance.
QuadResult gauss_growth(double b, double a);

/// int_r^inf M_V dw.
QuadResult weight_tail(double r, double V);

/// int_d^r 1/M_V dw.
QuadResult weight_reciprocal(double d, double r, double V);

/// sup_{r>d} (int_r^inf M_V)(int_d^r 1/M_V): coarse log-spaced scan of the
/// offset r-d followed by golden-section refinement.
struct MuckenhouptResult {
    double value = 0.0;
    double r_star = 0.0;
    double quad_error = 0.0;
};

MuckenhouptResult muckenhoupt_sup(double d, double V);

/// Muckenhoupt data for the half-line (d, inf) against M_V, with the mirrored
/// quantity B_L(2V-d, V) and the induced two-sided bracket
/// [max(B, B~), 4 min(B, B~)] for the optimal Hardy constant. The bracket can
/// be genuinely empty when |d - V| is large; that is reported, not patched.
struct HardyReport {
    double d = 0.0;
    double V = 0.0;
    double B = 0.0;
    double r_star = 0.0;
    double B_mirror = 0.0;
    double r_star_mirror = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool bracket_empty = false;
    double quad_error = 0.0;
};

HardyReport muckenhoupt_report(double d, double V);

/// Rayleigh-type ratio (int_d^inf u^2 M_V) / (int_d^inf u'^2 M_V) for a grid
/// function u that vanishes below d; the anchor jump counts toward the
/// derivative term.
double hardy_ratio(const std::vector<double>& u, double d, double V, const VelocityGrid& g);

/// 4 a^2 (int_a^inf e^{-x^2})(int_b^a e^{x^2}) with a = (r-V)/sqrt(2),
/// b = (d-V)/sqrt(2); tends to 1 as r grows.
double scaled_pair_product(double d, double r, double V);

}  // namespace kms
