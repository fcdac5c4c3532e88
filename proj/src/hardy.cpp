#include "kms/hardy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kms/maxwellian.hpp"

namespace kms {

namespace {

struct SimpsonState {
    const std::function<double(double)>* f;
    double error = 0.0;
};

double simpson_rec(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm), frm = (*st.f)(rm);
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        st.error += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_rec(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double tol, int max_depth) {
    if (!(b >= a)) throw std::invalid_argument("adaptive_simpson: b < a");
    QuadResult r;
    if (a == b) return r;
    SimpsonState st{&f, 0.0};
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    r.value = simpson_rec(st, a, b, fa, fm, fb, whole, tol, max_depth);
    r.error = st.error;
    return r;
}

TailSeries asymptotic_gauss_tail(double a, int max_terms) {
    if (!(a * a > 0.5))
        throw std::invalid_argument("asymptotic_gauss_tail: requires a^2 > 1/2");
    if (max_terms < 1)
        throw std::invalid_argument("asymptotic_gauss_tail: max_terms must be positive");
    TailSeries s;
    const double pref = std::exp(-a * a);
    double term = 1.0 / (2.0 * a);  // k = 0
    double sum = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    int k = 0;
    for (; k < max_terms; ++k) {
        const double mag = std::abs(term);
        if (mag >= prev_mag) break;  // divergence sets in: stop before this term
        sum += term;
        prev_mag = mag;
        term *= -(2.0 * static_cast<double>(k) + 1.0) / (2.0 * a * a);
    }
    s.value = pref * sum;
    s.truncation_bound = pref * std::abs(term);
    s.terms = k;
    return s;
}

QuadResult gauss_tail(double a) {
    const double cut = 6.0;
    if (a >= cut) {
        const auto s = asymptotic_gauss_tail(a);
        return {s.value, s.truncation_bound};
    }
    // The quadrature piece can be as small as ~1e-15 when a is close to the
    // cut, so the tolerance has to track the piece's own magnitude rather
    // than stay absolute.
    const double peak = a <= 0.0 ? 1.0 : std::exp(-a * a);
    const double scale = peak * (cut - a);
    const auto quad = adaptive_simpson([](double x) { return std::exp(-x * x); }, a, cut,
                                       1e-14 * scale + 1e-300);
    const auto s = asymptotic_gauss_tail(cut);
    return {quad.value + s.value, quad.error + s.truncation_bound};
}

QuadResult gauss_growth(double b, double a) {
    if (!(a >= b)) throw std::invalid_argument("gauss_growth: a < b");
    const auto f = [](double x) { return std::exp(x * x); };
    const double coarse =
        (a - b) / 6.0 * (f(b) + 4.0 * f(0.5 * (a + b)) + f(a)) + 1e-300;
    return adaptive_simpson(f, b, a, 1e-14 * coarse);
}

QuadResult weight_tail(double r, double V) {
    static const double inv_sqrt_pi = 1.0 / std::sqrt(pi);
    const auto t = gauss_tail((r - V) / std::sqrt(2.0));
    return {inv_sqrt_pi * t.value, inv_sqrt_pi * t.error};
}

QuadResult weight_reciprocal(double d, double r, double V) {
    static const double two_sqrt_pi = 2.0 * std::sqrt(pi);
    const auto g = gauss_growth((d - V) / std::sqrt(2.0), (r - V) / std::sqrt(2.0));
    return {two_sqrt_pi * g.value, two_sqrt_pi * g.error};
}

MuckenhouptResult muckenhoupt_sup(double d, double V) {
    const auto product = [&](double off) {
        const double r = d + off;
        const auto t = weight_tail(r, V);
        const auto rec = weight_reciprocal(d, r, V);
        return t.value * rec.value;
    };

    // Coarse scan: 96 log-spaced offsets over [1e-3, 12].
    const int n_scan = 96;
    const double lo = 1e-3, hi = 12.0;
    double best_off = lo, best_val = -1.0;
    int best_k = 0;
    std::vector<double> offs(n_scan);
    for (int k = 0; k < n_scan; ++k) {
        offs[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n_scan - 1));
        const double p = product(offs[k]);
        if (p > best_val) {
            best_val = p;
            best_off = offs[k];
            best_k = k;
        }
    }

    double a = (best_k > 0) ? offs[best_k - 1] : 0.5 * lo;
    double b = (best_k + 1 < n_scan) ? offs[best_k + 1] : hi + 1.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = product(x1), f2 = product(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = product(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = product(x1);
        }
    }
    const double off_star = (f1 > f2) ? x1 : x2;
    const double val = std::max(std::max(f1, f2), best_val);
    best_off = (val == best_val && best_val > std::max(f1, f2)) ? best_off : off_star;

    MuckenhouptResult m;
    m.value = val;
    m.r_star = d + best_off;
    const auto t = weight_tail(m.r_star, V);
    const auto rec = weight_reciprocal(d, m.r_star, V);
    m.quad_error = std::abs(t.error * rec.value) + std::abs(t.value * rec.error);
    return m;
}

HardyReport muckenhoupt_report(double d, double V) {
    HardyReport rep;
    rep.d = d;
    rep.V = V;
    const auto b = muckenhoupt_sup(d, V);
    const auto bm = muckenhoupt_sup(2.0 * V - d, V);
    rep.B = b.value;
    rep.r_star = b.r_star;
    rep.B_mirror = bm.value;
    rep.r_star_mirror = bm.r_star;
    rep.bracket_lo = std::max(rep.B, rep.B_mirror);
    rep.bracket_hi = 4.0 * std::min(rep.B, rep.B_mirror);
    rep.bracket_empty = rep.bracket_lo > rep.bracket_hi;
    rep.quad_error = b.quad_error + bm.quad_error;
    return rep;
}

double hardy_ratio(const std::vector<double>& u, double d, double V, const VelocityGrid& g) {
    if (u.size() != g.n) throw std::invalid_argument("hardy_ratio: size mismatch");
    if (d < g.w_min - 0.5 * g.dw)
        throw std::invalid_argument("hardy_ratio: anchor below the grid");
    std::size_t j0 = g.n;
    for (std::size_t j = 0; j < g.n; ++j)
        if (g.node(j) >= d) {
            j0 = j;
            break;
        }
    if (j0 >= g.n) throw std::invalid_argument("hardy_ratio: anchor beyond the grid");
    double num = 0.0, den = 0.0;
    for (std::size_t j = j0; j < g.n; ++j)
        num += u[j] * u[j] * scaled_maxwellian(g.node(j), V);
    const std::size_t jfirst = (j0 > 0) ? j0 - 1 : 0;
    for (std::size_t j = jfirst; j + 1 < g.n; ++j) {
        const double left = (j >= j0) ? u[j] : 0.0;
        const double du = (u[j + 1] - left) / g.dw;
        den += du * du * scaled_maxwellian(g.node(j) + 0.5 * g.dw, V);
    }
    if (!(den > 0.0)) return 0.0;
    return num / den;
}

double scaled_pair_product(double d, double r, double V) {
    const double a = (r - V) / std::sqrt(2.0);
    const double b = (d - V) / std::sqrt(2.0);
    const double pair = gauss_tail(a).value * gauss_growth(b, a).value;
    return 4.0 * a * a * pair;
}

}  // namespace kms
