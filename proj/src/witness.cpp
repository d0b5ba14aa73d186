#include "mtb/witness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mtb/numerics.hpp"

namespace mtb {

namespace {

constexpr double kLog2e = 1.6931471805599453094;  // ln(2e)
constexpr double kLn2 = 0.6931471805599453094;

// ln(1 + e^t) without overflow
double softplus(double t) {
    if (t > 36.0) return t + std::exp(-t);
    if (t < -36.0) return std::exp(t);
    return std::log1p(std::exp(t));
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// number of intervals in the cached inverse-tail table
constexpr int kTableIntervals = 2048;
constexpr double kTableLowY = -45.0;  // covers every 53-bit uniform draw

}  // namespace

WitnessDistribution::WitnessDistribution(Alpha alpha)
    : alpha_(alpha), stretch_(alpha.stretch_exponent()), poly_(alpha.poly_exponent()) {}

double WitnessDistribution::log_tail(double x) const {
    if (x <= 1.0) return 0.0;
    const double t = std::log(x);
    return kLog2e - softplus(poly_ * t) - std::exp(stretch_ * t);
}

double WitnessDistribution::tail(double x) const { return std::exp(log_tail(x)); }

// Newton on F(t) = log_tail(e^t) - log_p with a bisection bracket; t = ln x.
double WitnessDistribution::polish_log_quantile(double t, double log_p) const {
    double lo = 0.0;                  // tail(e^lo) = 1 >= p
    double hi = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 64; ++iter) {
        const double expg = std::exp(stretch_ * t);
        const double a = poly_ * t;
        const double f = kLog2e - softplus(a) - expg - log_p;
        if (f >= 0.0) lo = t; else hi = t;
        const double fprime = -(poly_ * sigmoid(a) + stretch_ * expg);
        double next = t - f / fprime;
        if (!(next > lo && next < hi)) {
            if (std::isinf(hi)) next = 2.0 * std::max(t, 1.0);
            else next = 0.5 * (lo + hi);
        }
        const double step = std::abs(next - t);
        t = next;
        if (step <= 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    return t;
}

double WitnessDistribution::solve_log_quantile(double log_p) const {
    if (log_p >= 0.0) return 0.0;
    // fixed-point warm start on e^{g t} = -log_p + ln(2e) - softplus(h t)
    double t = std::max(0.0, std::log(1.0 - log_p) / stretch_);
    for (int i = 0; i < 3; ++i) {
        const double rhs = std::max(-log_p + kLog2e - softplus(poly_ * t), 1e-12);
        t = std::max(0.0, std::log(rhs) / stretch_);
    }
    return polish_log_quantile(t, log_p);
}

const WitnessDistribution::QuantileTable& WitnessDistribution::table() const {
    std::call_once(table_once_, [this] {
        auto tbl = std::make_unique<QuantileTable>();
        tbl->y_lo = kTableLowY;
        tbl->y_step = -kTableLowY / kTableIntervals;
        const int n = kTableIntervals + 1;
        tbl->log_x.resize(n);
        // march from p = 1 downward, warm-starting each node from the last
        double t = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            const double y = kTableLowY + tbl->y_step * i;
            t = (i == n - 1) ? 0.0 : polish_log_quantile(std::max(t, 1e-12), y);
            tbl->log_x[i] = t;
        }
        // Fritsch-Carlson monotone cubic slopes on the uniform grid
        tbl->slope.resize(n);
        const double h = tbl->y_step;
        auto delta = [&](int i) { return (tbl->log_x[i + 1] - tbl->log_x[i]) / h; };
        tbl->slope[0] = delta(0);
        tbl->slope[n - 1] = delta(n - 2);
        for (int i = 1; i + 1 < n; ++i) {
            const double d0 = delta(i - 1);
            const double d1 = delta(i);
            tbl->slope[i] = (d0 * d1 > 0.0) ? 2.0 * d0 * d1 / (d0 + d1) : 0.0;
        }
        table_ = std::move(tbl);
    });
    return *table_;
}

double WitnessDistribution::quantile(double p) const {
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::domain_error("witness quantile: p must lie in (0, 1]");
    }
    if (p == 1.0) return 1.0;
    const double y = std::log(p);
    if (y < kTableLowY) return std::exp(solve_log_quantile(y));

    const auto& tbl = table();
    const int n = static_cast<int>(tbl.log_x.size());
    int i = static_cast<int>((y - tbl.y_lo) / tbl.y_step);
    i = std::clamp(i, 0, n - 2);
    const double s = (y - (tbl.y_lo + tbl.y_step * i)) / tbl.y_step;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double z = tbl.log_x[i] * (2.0 * s3 - 3.0 * s2 + 1.0) +
                     tbl.log_x[i + 1] * (3.0 * s2 - 2.0 * s3) +
                     tbl.y_step * (tbl.slope[i] * (s3 - 2.0 * s2 + s) +
                                   tbl.slope[i + 1] * (s3 - s2));
    return std::exp(polish_log_quantile(std::max(z, 0.0), y));
}

double WitnessDistribution::sample(RandomStream& stream) const {
    return quantile(stream.next_unit());
}

double WitnessDistribution::stretch_moment() const {
    const double a = alpha_.value();
    const double b = poly_;
    // E exp(X^g) = e + (4 e a / (1-a)) * I with, after t -> 1/s,
    // I = integral_0^1 ds / (1 + s^b); the substituted integrand is proper.
    const double integral =
        adaptive_simpson([b](double s) { return 1.0 / (1.0 + std::pow(s, b)); }, 0.0, 1.0,
                         1e-12);
    return std::exp(1.0) * (1.0 + 4.0 * a / (1.0 - a) * integral);
}

double WitnessDistribution::half_stretch_moment() const {
    const double m = poly_ / stretch_;  // h/g = (1+a)/(2a)
    // E exp(X^{g/2}) = e + e * integral_1^inf w^{-1/2} e^{sqrt(w)-w} / (1+w^m) dw
    // after w = x^g; the exponent sqrt(w) - w caps the integrand at 1.
    auto f = [m](double w) {
        const double lw = std::log(w);
        return std::exp(-0.5 * lw + std::sqrt(w) - w - softplus(m * lw));
    };
    const double crude = adaptive_simpson(f, 1.0, 800.0, 1e-4);
    const double integral = adaptive_simpson(f, 1.0, 800.0, std::max(1e-14, 1e-12 * crude));
    return std::exp(1.0) * (1.0 + integral);
}

double WitnessDistribution::second_moment() const {
    const double g = stretch_;
    const double m = poly_ / stretch_;
    // E X^2 = 1 + (4e/g) * integral_1^inf w^{2/g-1} e^{-w} / (1+w^m) dw after
    // w = x^g; evaluated in log form since w^{2/g-1} alone can overflow.
    const double pw = 2.0 / g - 1.0;
    auto f = [pw, m](double w) {
        const double lw = std::log(w);
        return std::exp(pw * lw - w - softplus(m * lw));
    };
    const double crude = adaptive_simpson(f, 1.0, 760.0, 1.0);
    const double integral = adaptive_simpson(f, 1.0, 760.0, std::max(1e-14, 1e-12 * crude));
    return 1.0 + 4.0 * std::exp(1.0) / g * integral;
}

double witness_tail(Alpha alpha, double x) { return WitnessDistribution(alpha).tail(x); }

double witness_quantile(Alpha alpha, double p) {
    return WitnessDistribution(alpha).quantile(p);
}

double witness_sample(Alpha alpha, RandomStream& stream) {
    return WitnessDistribution(alpha).sample(stream);
}

double witness_moment(Alpha alpha) { return WitnessDistribution(alpha).stretch_moment(); }

double log_exact_binomial_tail(std::int64_t n, double s) {
    if (n < 1) throw std::domain_error("exact_binomial_tail: n must be >= 1");
    if (s <= static_cast<double>(-n)) return 0.0;
    const double k = std::ceil((static_cast<double>(n) + s) / 2.0);
    if (k > static_cast<double>(n)) return kNegInf;
    return log_binomial_upper_tail(n, static_cast<std::int64_t>(k));
}

double exact_binomial_tail(std::int64_t n, double s) {
    return std::exp(log_exact_binomial_tail(n, s));
}

CertificateRecord optimality_certificate(const WitnessDistribution& dist, std::int64_t n) {
    if (n < 1) throw std::domain_error("optimality_certificate: n must be >= 1");
    const double a = dist.alpha().value();
    const double b = 0.5 * (1.0 + a);
    const double nd = static_cast<double>(n);
    const double binom_log = log_exact_binomial_tail(n, std::pow(nd, b));
    const double wit_log = dist.log_tail(std::pow(nd, 1.0 - b));
    const double cert = binom_log + wit_log;
    const double threshold = -3.0 * std::pow(nd, a);
    return {n, b, binom_log, wit_log, cert, threshold, cert >= threshold};
}

CertificateRecord optimality_certificate(Alpha alpha, std::int64_t n) {
    return optimality_certificate(WitnessDistribution(alpha), n);
}

namespace {

// Cheap sufficient test: a single binomial term already lower-bounds the
// binomial tail, so certificate >= single_term + witness factor.  Only when
// this fails do we pay for the full summation.
bool certificate_passes(const WitnessDistribution& dist, std::int64_t n, double b) {
    const double a = dist.alpha().value();
    const double nd = static_cast<double>(n);
    const double s = std::pow(nd, b);
    const double threshold = -3.0 * std::pow(nd, a);
    const double wit_log = dist.log_tail(std::pow(nd, 1.0 - b));

    const double k = std::ceil((nd + s) / 2.0);
    if (k > nd) return false;  // empty binomial event, certificate is -inf
    const auto kstar = static_cast<std::int64_t>(k);
    if (kstar > 0) {
        const double single = std::lgamma(nd + 1.0) -
                              std::lgamma(static_cast<double>(kstar) + 1.0) -
                              std::lgamma(static_cast<double>(n - kstar) + 1.0) - nd * kLn2;
        if (single + wit_log >= threshold) return true;
    }
    return log_exact_binomial_tail(n, s) + wit_log >= threshold;
}

}  // namespace

std::optional<std::int64_t> optimality_threshold(Alpha alpha, std::int64_t n_max,
                                                 int workers) {
    if (n_max < 1) throw std::domain_error("optimality_threshold: n_max must be >= 1");
    const WitnessDistribution dist(alpha);
    const double b = 0.5 * (1.0 + alpha.value());

    const int pool = std::clamp<int>(workers, 1, static_cast<int>(
                                                     std::thread::hardware_concurrency()
                                                         ? std::thread::hardware_concurrency()
                                                         : 1));
    std::vector<std::int64_t> worst(pool, 0);  // largest failing n per worker
    auto scan = [&](int w) {
        std::int64_t local = 0;
        for (std::int64_t n = 1 + w; n <= n_max; n += pool) {
            if (!certificate_passes(dist, n, b)) local = std::max(local, n);
        }
        worst[w] = local;
    };
    if (pool == 1) {
        scan(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (int w = 0; w < pool; ++w) threads.emplace_back(scan, w);
        for (auto& t : threads) t.join();
    }
    const std::int64_t max_fail = *std::max_element(worst.begin(), worst.end());
    if (max_fail == n_max) return std::nullopt;
    return max_fail + 1;
}

}  // namespace mtb
