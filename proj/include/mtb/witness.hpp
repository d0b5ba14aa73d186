#pragma once
// The heavy-tailed law behind the optimality construction:
//
//   P(X >= x) = 2e / (1 + x^h) * exp(-x^g)   for x > 1,   1 otherwise,
//
// with h = (1+a)/(1-a) and g = 2a/(1-a), together with exact fair-sign
// binomial tails and the product lower-bound certificate built from both.

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "mtb/bounds.hpp"
#include "mtb/rng.hpp"

namespace mtb {

class WitnessDistribution {
public:
    explicit WitnessDistribution(Alpha alpha);

    Alpha alpha() const { return alpha_; }

    double tail(double x) const;      // P(X >= x), exactly 1 for x <= 1
    double log_tail(double x) const;  // natural log of tail(x)

    // Inverse of tail on (0, 1]: tail(quantile(p)) = p to 1e-12 absolute.
    double quantile(double p) const;

    // Inverse-transform draw; deterministic given the stream state.
    double sample(RandomStream& stream) const;

    // E exp(X^g), by quadrature of the exact closed form; > e, finite.
    double stretch_moment() const;
    // E exp(X^{g/2}); finite since the tail decays like exp(-x^g).
    double half_stretch_moment() const;
    // E X^2, the per-step predictable variance of a symmetrized increment.
    double second_moment() const;

private:
    struct QuantileTable {
        double y_lo, y_step;            // grid in y = ln p
        std::vector<double> log_x;      // z_i = ln quantile(exp(y_i))
        std::vector<double> slope;      // monotone cubic slopes dz/dy
    };

    double solve_log_quantile(double log_p) const;           // from scratch
    double polish_log_quantile(double t, double log_p) const;  // Newton in t = ln x
    const QuantileTable& table() const;

    Alpha alpha_;
    double stretch_;  // g
    double poly_;     // h
    mutable std::once_flag table_once_;
    mutable std::unique_ptr<QuantileTable> table_;
};

// Free-function mirrors for one-shot use.
double witness_tail(Alpha alpha, double x);
double witness_quantile(Alpha alpha, double p);
double witness_sample(Alpha alpha, RandomStream& stream);
double witness_moment(Alpha alpha);

// P(sum of n fair +-1 signs >= s), exact: sum_{k >= ceil((n+s)/2)} C(n,k)/2^n.
double exact_binomial_tail(std::int64_t n, double s);
double log_exact_binomial_tail(std::int64_t n, double s);

// Product lower bound on P(max_{k<=n} S^_k >= n) for the stationary witness
// martingale X^_i = X xi_i, evaluated in log space:
//   P(sum xi_i >= n^b) * P(X >= n^{1-b})   with  b = (1 + a) / 2,
// compared against the target floor exp(-3 n^a).
struct CertificateRecord {
    std::int64_t n;
    double optimality_exponent;  // b = (1 + alpha) / 2
    double binomial_log_tail;
    double witness_log_tail;
    double certificate_log;      // sum of the two factors
    double threshold_log;        // -3 n^alpha
    bool passes;                 // certificate_log >= threshold_log
};

CertificateRecord optimality_certificate(Alpha alpha, std::int64_t n);
CertificateRecord optimality_certificate(const WitnessDistribution& dist, std::int64_t n);

// Smallest N0 <= n_max such that the certificate passes for every
// n in [N0, n_max]; nullopt when even n_max itself fails.
std::optional<std::int64_t> optimality_threshold(Alpha alpha, std::int64_t n_max,
                                                 int workers = 1);

}  // namespace mtb
