#pragma once
// Closed-form exponential tail bounds for supermartingales whose increments
// have stretched-exponential moments, plus the truncation constants used to
// assemble them.  Everything is evaluated and carried in natural-log space;
// values like exp(-400) stay representable.

#include <cstdint>
#include <string>

namespace mtb {

inline constexpr double kAlphaMin = 0.01;
inline constexpr double kAlphaMax = 0.99;

// Moment power in (0, 1).  Construction is restricted to [0.01, 0.99]: the
// derived exponents 2a/(1-a) and (1-a)/(2a) blow up at the endpoints, so the
// toolkit enforces a numerically safe subinterval.
class Alpha {
public:
    explicit Alpha(double value);

    double value() const { return value_; }
    // exponent of the stretched-exponential moment, 2a/(1-a)
    double stretch_exponent() const { return 2.0 * value_ / (1.0 - value_); }
    // exponent of the polynomial tail factor, (1+a)/(1-a)
    double poly_exponent() const { return (1.0 + value_) / (1.0 - value_); }

private:
    double value_;
};

// Right-hand side of one probability inequality.  log_value may exceed 0
// (a vacuous bound); clipped() is the presentation-layer min(1, exp(log)).
struct TailBound {
    double log_value;
    std::string provenance;

    double clipped() const;
    bool vacuous() const { return log_value > 0.0; }
};

struct BoundParams {
    Alpha alpha;
    double x = 1.0;       // deviation level, per-step units
    std::int64_t n = 1;   // horizon
    double v = 0.0;       // variance threshold (sqrt of the <S> cap)
    double c1 = 0.0;      // increment moment constant
    double c2 = 0.0;      // normalized-variation moment constant
};

// P(max_{k<=n} S_k >= x) <= exp(-x^2 / 2n) for martingale differences with
// |X_i| <= 1; the maximal refinement of Azuma-Hoeffding.
TailBound azuma_max_tail_bound(std::int64_t n, double x);

// Boundary of monotonicity of g(t) = t^3 exp(-t^{2a/(1-a)}):
// beta = (3(1-a)/(2a))^{(1-a)/(2a)}.
double truncation_beta(Alpha alpha);

// C(a, x) = 2 + 35 c1 (x^{-2a} 16^{a-1} + x^{-2} (3(1-a)/(2a))^{(1-a)/a}),
// the n-free prefactor of the stretched-exponential maximal bound.
double theorem1_constant(Alpha alpha, double x, double c1);

// P(max_{k<=n} S_k >= n x) <= C(a, x) exp(-(x/4)^{2a} n^a).
TailBound theorem1_tail_bound(const BoundParams& p);

// Freedman-type bound for supermartingale differences with X_i <= 1:
// P(S_k >= x and <S>_k <= v^2 for some k <= n) <= exp(-x^2 / 2(v^2 + x/3)).
TailBound freedman_unit_bound(double x, double v);

// Joint deviation/variation bound under the one-sided moment condition:
// exp(-x^2 / 2(v^2 + x^{2-a}/3)) + n c1 exp(-x^a).
TailBound theorem2_tail_bound(const BoundParams& p);

// Bernstein-type maximal bound:
// exp(-x^{1+a} n^a / 2(1 + x/3)) + (n c1 + c2) exp(-x^a n^a).
TailBound corollary1_tail_bound(const BoundParams& p);

// Truncation level u = (x / (4 sqrt(n)))^{1-a} used by the two-sided
// decomposition behind the maximal bound.
double truncation_level(Alpha alpha, double x, std::int64_t n);

}  // namespace mtb
