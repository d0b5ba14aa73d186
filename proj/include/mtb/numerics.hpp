#pragma once
// Small numeric helpers shared across the library: stable log-space
// arithmetic, adaptive quadrature, exact binomial machinery and the
// Clopper-Pearson confidence bound.

#include <cmath>
#include <cstdint>
#include <limits>

namespace mtb {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)); tolerates -inf in either argument.
inline double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

// log(1 - exp(x)) for x < 0, stable near both ends.
inline double log1m_exp(double x) {
    // below -ln 2 the direct form is fine; above it expm1 keeps precision
    if (x < -0.6931471805599453) return std::log1p(-std::exp(x));
    return std::log(-std::expm1(x));
}

namespace detail {

template <typename F>
double simpson_rule(F&& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_rule(f, a, fa, m, fm, lm, flm);
    const double right = simpson_rule(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b].  tol is an absolute target
// for the accumulated error estimate; callers integrating large values
// should scale it by a magnitude estimate first.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 52) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = detail::simpson_rule(f, a, fa, b, fb, m, fm);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// log P(Binomial(n, 1/2) >= kstar), exact up to floating-point rounding.
// The sum runs over log-domain binomial coefficients; for large n it stops
// once the geometric bound on the remaining terms is below 1e-18 of the
// accumulated sum, which leaves the result exact to double precision.
double log_binomial_upper_tail(std::int64_t n, std::int64_t kstar);

// Exact one-sided Clopper-Pearson upper confidence bound at level 1-delta
// for a binomial proportion with `hits` successes out of `trials`.
double clopper_pearson_upper(std::uint64_t hits, std::uint64_t trials, double delta);

}  // namespace mtb
