#include "mtb/bounds.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

#include "mtb/numerics.hpp"

namespace mtb {

namespace {

std::string describe(const char* op, const char* fmt, ...) {
    char buf[160];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return std::string(op) + "(" + buf + ")";
}

void require_horizon(std::int64_t n) {
    if (n < 1) throw std::domain_error("horizon n must be >= 1");
}

}  // namespace

Alpha::Alpha(double value) : value_(value) {
    if (!(value >= kAlphaMin && value <= kAlphaMax)) {
        throw std::domain_error("alpha must lie in [0.01, 0.99]");
    }
}

double TailBound::clipped() const {
    if (log_value >= 0.0) return 1.0;
    return std::exp(log_value);
}

TailBound azuma_max_tail_bound(std::int64_t n, double x) {
    require_horizon(n);
    if (!(x >= 0.0)) throw std::domain_error("deviation x must be >= 0");
    const double log_value = -x * x / (2.0 * static_cast<double>(n));
    return {log_value, describe("lemma1", "n=%lld, x=%.17g", static_cast<long long>(n), x)};
}

double truncation_beta(Alpha alpha) {
    const double a = alpha.value();
    const double base = 3.0 * (1.0 - a) / (2.0 * a);
    return std::pow(base, (1.0 - a) / (2.0 * a));
}

double theorem1_constant(Alpha alpha, double x, double c1) {
    if (!(x > 0.0)) throw std::domain_error("deviation x must be > 0");
    if (!(c1 >= 0.0)) throw std::domain_error("moment constant c1 must be >= 0");
    const double a = alpha.value();
    const double beta = truncation_beta(alpha);
    const double bracket =
        1.0 / (std::pow(x, 2.0 * a) * std::pow(16.0, 1.0 - a)) + beta * beta / (x * x);
    return 2.0 + 35.0 * c1 * bracket;
}

TailBound theorem1_tail_bound(const BoundParams& p) {
    require_horizon(p.n);
    const double a = p.alpha.value();
    const double constant = theorem1_constant(p.alpha, p.x, p.c1);
    const double log_value =
        std::log(constant) - std::pow(p.x / 4.0, 2.0 * a) * std::pow(static_cast<double>(p.n), a);
    return {log_value, describe("theorem1", "alpha=%.17g, x=%.17g, n=%lld, c1=%.17g", a, p.x,
                                static_cast<long long>(p.n), p.c1)};
}

TailBound freedman_unit_bound(double x, double v) {
    if (!(x >= 0.0)) throw std::domain_error("deviation x must be >= 0");
    if (!(v > 0.0)) throw std::domain_error("variance threshold v must be > 0");
    const double log_value = -x * x / (2.0 * (v * v + x / 3.0));
    return {log_value, describe("lemma2", "x=%.17g, v=%.17g", x, v)};
}

TailBound theorem2_tail_bound(const BoundParams& p) {
    require_horizon(p.n);
    if (!(p.x > 0.0)) throw std::domain_error("deviation x must be > 0");
    if (!(p.v > 0.0)) throw std::domain_error("variance threshold v must be > 0");
    if (!(p.c1 >= 0.0)) throw std::domain_error("moment constant c1 must be >= 0");
    const double a = p.alpha.value();
    const double log_main = -p.x * p.x / (2.0 * (p.v * p.v + std::pow(p.x, 2.0 - a) / 3.0));
    const double log_moment =
        p.c1 == 0.0 ? kNegInf
                    : std::log(static_cast<double>(p.n) * p.c1) - std::pow(p.x, a);
    return {log_sum_exp(log_main, log_moment),
            describe("theorem2", "alpha=%.17g, x=%.17g, v=%.17g, n=%lld, c1=%.17g", a, p.x, p.v,
                     static_cast<long long>(p.n), p.c1)};
}

TailBound corollary1_tail_bound(const BoundParams& p) {
    require_horizon(p.n);
    if (!(p.x > 0.0)) throw std::domain_error("deviation x must be > 0");
    if (!(p.c1 >= 0.0)) throw std::domain_error("moment constant c1 must be >= 0");
    if (!(p.c2 >= 0.0)) throw std::domain_error("moment constant c2 must be >= 0");
    const double a = p.alpha.value();
    const double na = std::pow(static_cast<double>(p.n), a);
    const double log_main = -std::pow(p.x, 1.0 + a) * na / (2.0 * (1.0 + p.x / 3.0));
    const double weight = static_cast<double>(p.n) * p.c1 + p.c2;
    const double log_moment =
        weight == 0.0 ? kNegInf : std::log(weight) - std::pow(p.x, a) * na;
    return {log_sum_exp(log_main, log_moment),
            describe("corollary1", "alpha=%.17g, x=%.17g, n=%lld, c1=%.17g, c2=%.17g", a, p.x,
                     static_cast<long long>(p.n), p.c1, p.c2)};
}

double truncation_level(Alpha alpha, double x, std::int64_t n) {
    require_horizon(n);
    if (!(x > 0.0)) throw std::domain_error("deviation x must be > 0");
    const double a = alpha.value();
    return std::pow(x / (4.0 * std::sqrt(static_cast<double>(n))), 1.0 - a);
}

}  // namespace mtb
