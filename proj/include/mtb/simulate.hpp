#pragma once
// (Super)martingale difference generators with closed-form conditional laws,
// path statistics, truncation decompositions, exhaustive path enumeration,
// and reproducible Monte Carlo estimation over per-trial substreams.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtb/bounds.hpp"
#include "mtb/rng.hpp"
#include "mtb/witness.hpp"

namespace mtb {

enum class GeneratorKind { rademacher, scaled_bounded, stationary_witness, truncated_heavy };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& name);

// A difference-sequence law whose conditional mean, conditional second
// moment and truncated conditional means are all available in closed form.
// Immutable once built; safe to share across threads.
class Generator {
public:
    // fair +-1 signs; martingale, <S>_k = k
    static Generator rademacher();
    // finite-support i.i.d. increments: `values` are shifted so the
    // conditional mean is exactly `drift` (<= 0; 0 keeps a martingale)
    static Generator scaled_bounded(std::vector<double> values,
                                    std::vector<double> probabilities, double drift = 0.0);
    // X^_i = X xi_i with one heavy draw X per path; <S>_k = k X^2
    static Generator stationary_witness(Alpha alpha);
    // symmetric i.i.d. heavy increments |X_i| ~ witness law; martingale
    static Generator truncated_heavy(Alpha alpha);

    GeneratorKind kind() const { return kind_; }
    std::string name() const;
    bool is_martingale() const { return drift_ == 0.0; }
    double drift() const { return drift_; }
    std::optional<Alpha> alpha() const { return alpha_; }

    // finite-support data (empty for witness kinds)
    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& atom_probs() const { return probs_; }

    const WitnessDistribution& witness() const;

    // E(X_i^2 | F_{i-1}) for the kinds where it is path-independent;
    // stationary_witness paths carry their own value (shared_draw^2).
    double step_second_moment() const;

    // Moment constants entering the bounds, exact per the conditional law.
    // For witness-backed kinds the query alpha must match the law's alpha.
    double cramer_moment(Alpha alpha) const;     // E exp(|X_i|^{2a/(1-a)})
    double plus_moment(Alpha alpha) const;       // E exp((X_i^+)^{a/(1-a)})
    double variation_moment(Alpha alpha) const;  // E exp((<S>_n/n)^{a/(1-a)})

private:
    Generator() = default;

    GeneratorKind kind_ = GeneratorKind::rademacher;
    double drift_ = 0.0;
    std::vector<double> atoms_;
    std::vector<double> probs_;
    std::vector<double> cum_probs_;
    std::optional<Alpha> alpha_;
    std::shared_ptr<const WitnessDistribution> witness_;
    double witness_second_moment_ = 0.0;

    friend class IncrementSampler;
};

struct MartingalePath {
    std::vector<double> increments;             // X_1..X_n
    std::vector<double> partial_sums;           // S_k
    std::vector<double> running_max;            // max_{j<=k} S_j
    std::vector<double> predictable_variation;  // <S>_k
    double shared_draw = 0.0;                   // stationary-witness X, else 0
};

MartingalePath generate_path(const Generator& gen, std::int64_t n, RandomStream& stream);

enum class TruncationMode { two_sided_centered, one_sided };

// S = S' + S'' (+ S''') split at level u.  Two-sided: X' is the centered
// below-u part with |X'_i| <= 2u, X'' the centered above-u part, and the
// drift increments reconstruct the conditional means.  One-sided:
// X'_i = X_i 1{X_i <= u}, X''_i the rest, no centering.
struct Decomposition {
    TruncationMode mode;
    double level;
    std::vector<double> bounded_part;      // X'
    std::vector<double> tail_part;         // X''
    std::vector<double> drift_increments;  // S'''_i - S'''_{i-1}; empty one-sided
};

Decomposition truncate_center(const MartingalePath& path, const Generator& gen, double u,
                              TruncationMode mode);

// Path events over k in [1, n].
struct Event {
    enum class Kind { max_exceeds, joint };
    Kind kind = Kind::max_exceeds;
    double threshold = 0.0;      // a
    double variation_cap = 0.0;  // v^2, joint only

    // {max_{k<=n} S_k >= a}
    static Event max_exceeds(double a) { return {Kind::max_exceeds, a, 0.0}; }
    // {S_k >= a and <S>_k <= v2 for some k <= n}
    static Event joint(double a, double v2) { return {Kind::joint, a, v2}; }

    std::string name() const;
};

bool event_occurs(const Event& event, const MartingalePath& path);

struct MonteCarloEstimate {
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    std::uint64_t first_trial = 0;  // substream range [first, first + trials)
    std::uint64_t seed = 0;
    double delta = 1e-3;
    int substreams = 1;  // partition count used

    double point() const;
    double upper_cb() const;  // exact one-sided Clopper-Pearson at 1 - delta
    double log_upper_cb() const;
};

struct McOptions {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double delta = 1e-3;
    int partitions = 1;              // substream chunks; result-invariant
    std::uint64_t first_trial = 0;   // offset into the substream space
    int workers = 0;                 // worker threads; 0 = min(partitions, hw)
};

// Fraction of trials on which the event occurs.  Trial t draws from the
// dedicated stream (seed, first_trial + t), so results do not depend on the
// partitioning and estimates over disjoint trial ranges can be merged.
MonteCarloEstimate mc_tail_estimate(const Generator& gen, const Event& event, std::int64_t n,
                                    const McOptions& opt);

MonteCarloEstimate merge_estimates(const MonteCarloEstimate& a, const MonteCarloEstimate& b);

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EnumerationOptions {
    std::uint64_t budget = std::uint64_t{1} << 24;  // max support^n paths
};

// Exact event probability by exhausting every path.  Finite-support kinds
// enumerate support^n paths; stationary_witness composes the 2^n sign
// enumeration with the closed-form heavy tail.  Throws BudgetError when the
// path count exceeds the budget and std::invalid_argument for kinds without
// an enumerable law.
double enumerate_exact(const Generator& gen, std::int64_t n, const Event& event,
                       const EnumerationOptions& opt = {});

}  // namespace mtb
