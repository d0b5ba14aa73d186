#include "mtb/numerics.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <stdexcept>

namespace mtb {

double log_binomial_upper_tail(std::int64_t n, std::int64_t kstar) {
    if (n < 1) throw std::domain_error("log_binomial_upper_tail: n must be >= 1");
    if (kstar <= 0) return 0.0;
    if (kstar > n) return kNegInf;

    // P(K >= k) for k <= n/2 via the symmetric complement keeps the summed
    // tail short on both sides.
    if (2 * kstar <= n) {
        // P(K <= kstar - 1) = P(K >= n - kstar + 1) by symmetry of Bin(n, 1/2)
        return log1m_exp(log_binomial_upper_tail(n, n - kstar + 1));
    }

    const double ln2 = 0.6931471805599453094172321;
    const double log_first = std::lgamma(static_cast<double>(n) + 1.0) -
                             std::lgamma(static_cast<double>(kstar) + 1.0) -
                             std::lgamma(static_cast<double>(n - kstar) + 1.0) -
                             static_cast<double>(n) * ln2;

    // sum = 1 + r_k* + r_k* r_{k*+1} + ...   with r_k = (n-k)/(k+1) < 1
    double sum = 1.0;
    double term = 1.0;
    for (std::int64_t k = kstar; k < n; ++k) {
        const double ratio = static_cast<double>(n - k) / static_cast<double>(k + 1);
        term *= ratio;
        sum += term;
        // ratios are decreasing here, so the remainder is geometrically
        // bounded by term * ratio / (1 - ratio)
        if (ratio < 1.0 && term * ratio / (1.0 - ratio) < 1e-18 * sum) break;
    }
    return log_first + std::log(sum);
}

double clopper_pearson_upper(std::uint64_t hits, std::uint64_t trials, double delta) {
    if (trials == 0) throw std::domain_error("clopper_pearson_upper: trials must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("clopper_pearson_upper: delta must lie in (0, 1)");
    if (hits > trials) throw std::domain_error("clopper_pearson_upper: hits > trials");
    if (hits == trials) return 1.0;
    // p_u solves P(Bin(trials, p) <= hits) = delta, i.e. the 1-delta quantile
    // of Beta(hits + 1, trials - hits).
    return boost::math::ibeta_inv(static_cast<double>(hits) + 1.0,
                                  static_cast<double>(trials - hits), 1.0 - delta);
}

}  // namespace mtb
