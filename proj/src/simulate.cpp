#include "mtb/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "mtb/numerics.hpp"

namespace mtb {

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::rademacher: return "rademacher";
        case GeneratorKind::scaled_bounded: return "scaled-bounded";
        case GeneratorKind::stationary_witness: return "stationary-witness";
        case GeneratorKind::truncated_heavy: return "truncated-heavy";
    }
    return "unknown";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
    if (name == "rademacher") return GeneratorKind::rademacher;
    if (name == "scaled-bounded") return GeneratorKind::scaled_bounded;
    if (name == "stationary-witness") return GeneratorKind::stationary_witness;
    if (name == "truncated-heavy") return GeneratorKind::truncated_heavy;
    throw std::invalid_argument("unknown generator kind: " + name);
}

Generator Generator::rademacher() {
    Generator g;
    g.kind_ = GeneratorKind::rademacher;
    g.atoms_ = {-1.0, 1.0};
    g.probs_ = {0.5, 0.5};
    g.cum_probs_ = {0.5, 1.0};
    return g;
}

Generator Generator::scaled_bounded(std::vector<double> values,
                                    std::vector<double> probabilities, double drift) {
    if (values.empty() || values.size() != probabilities.size()) {
        throw std::invalid_argument("scaled_bounded: values/probabilities size mismatch");
    }
    if (!(drift <= 0.0)) {
        throw std::domain_error("scaled_bounded: drift must be <= 0 (supermartingale)");
    }
    double total = 0.0;
    for (double p : probabilities) {
        if (!(p > 0.0)) throw std::domain_error("scaled_bounded: probabilities must be > 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::domain_error("scaled_bounded: probabilities must sum to 1");
    }
    Generator g;
    g.kind_ = GeneratorKind::scaled_bounded;
    g.drift_ = drift;
    double mean = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) mean += probabilities[j] * values[j];
    g.atoms_.reserve(values.size());
    for (double v : values) g.atoms_.push_back(v - mean + drift);
    g.probs_ = probabilities;
    g.cum_probs_.resize(probabilities.size());
    double cum = 0.0;
    for (std::size_t j = 0; j < probabilities.size(); ++j) {
        cum += probabilities[j];
        g.cum_probs_[j] = cum;
    }
    g.cum_probs_.back() = 1.0;
    return g;
}

Generator Generator::stationary_witness(Alpha alpha) {
    Generator g;
    g.kind_ = GeneratorKind::stationary_witness;
    g.alpha_ = alpha;
    g.witness_ = std::make_shared<const WitnessDistribution>(alpha);
    return g;
}

Generator Generator::truncated_heavy(Alpha alpha) {
    Generator g;
    g.kind_ = GeneratorKind::truncated_heavy;
    g.alpha_ = alpha;
    g.witness_ = std::make_shared<const WitnessDistribution>(alpha);
    g.witness_second_moment_ = g.witness_->second_moment();
    return g;
}

std::string Generator::name() const { return to_string(kind_); }

const WitnessDistribution& Generator::witness() const {
    if (!witness_) throw std::logic_error("generator has no witness law");
    return *witness_;
}

double Generator::step_second_moment() const {
    switch (kind_) {
        case GeneratorKind::rademacher: return 1.0;
        case GeneratorKind::scaled_bounded: {
            double m2 = 0.0;
            for (std::size_t j = 0; j < atoms_.size(); ++j) m2 += probs_[j] * atoms_[j] * atoms_[j];
            return m2;
        }
        case GeneratorKind::truncated_heavy: return witness_second_moment_;
        case GeneratorKind::stationary_witness:
            throw std::logic_error("stationary-witness variance is path-dependent (shared draw)");
    }
    return 0.0;
}

namespace {

void require_matching_alpha(const std::optional<Alpha>& own, Alpha query, const char* what) {
    if (own && own->value() != query.value()) {
        throw std::invalid_argument(std::string(what) +
                                    ": witness-backed generators expose moments only at "
                                    "their own alpha");
    }
}

}  // namespace

double Generator::cramer_moment(Alpha alpha) const {
    switch (kind_) {
        case GeneratorKind::rademacher: return std::exp(1.0);
        case GeneratorKind::scaled_bounded: {
            const double g = alpha.stretch_exponent();
            double m = 0.0;
            for (std::size_t j = 0; j < atoms_.size(); ++j)
                m += probs_[j] * std::exp(std::pow(std::abs(atoms_[j]), g));
            return m;
        }
        default:
            require_matching_alpha(alpha_, alpha, "cramer_moment");
            return witness_->stretch_moment();
    }
}

double Generator::plus_moment(Alpha alpha) const {
    switch (kind_) {
        case GeneratorKind::rademacher: return 0.5 * (1.0 + std::exp(1.0));
        case GeneratorKind::scaled_bounded: {
            const double g = 0.5 * alpha.stretch_exponent();  // a/(1-a)
            double m = 0.0;
            for (std::size_t j = 0; j < atoms_.size(); ++j) {
                const double plus = std::max(atoms_[j], 0.0);
                m += probs_[j] * std::exp(std::pow(plus, g));
            }
            return m;
        }
        default:
            require_matching_alpha(alpha_, alpha, "plus_moment");
            // X^+ = X 1{xi = +1}: half the mass at 0, half heavy
            return 0.5 + 0.5 * witness_->half_stretch_moment();
    }
}

double Generator::variation_moment(Alpha alpha) const {
    const double g = 0.5 * alpha.stretch_exponent();  // a/(1-a)
    switch (kind_) {
        case GeneratorKind::stationary_witness:
            require_matching_alpha(alpha_, alpha, "variation_moment");
            // <S>_n / n = X^2, so the moment collapses to E exp(X^{2a/(1-a)})
            return witness_->stretch_moment();
        case GeneratorKind::truncated_heavy:
            require_matching_alpha(alpha_, alpha, "variation_moment");
            return std::exp(std::pow(witness_second_moment_, g));
        default:
            return std::exp(std::pow(step_second_moment(), g));
    }
}

// Draws one path's increments in the canonical stream order shared by
// generate_path, the Monte Carlo kernel and nothing else.
class IncrementSampler {
public:
    IncrementSampler(const Generator& gen, RandomStream& stream)
        : gen_(gen), stream_(stream) {
        switch (gen.kind_) {
            case GeneratorKind::stationary_witness:
                shared_ = gen.witness_->sample(stream);
                qv_step_ = shared_ * shared_;
                break;
            case GeneratorKind::truncated_heavy:
                qv_step_ = gen.witness_second_moment_;
                break;
            case GeneratorKind::scaled_bounded:
                qv_step_ = gen.step_second_moment();
                break;
            case GeneratorKind::rademacher:
                qv_step_ = 1.0;
                break;
        }
    }

    double next() {
        switch (gen_.kind_) {
            case GeneratorKind::rademacher:
                return static_cast<double>(stream_.next_sign());
            case GeneratorKind::scaled_bounded: {
                const double u = stream_.next_unit();
                std::size_t j = 0;
                while (j + 1 < gen_.cum_probs_.size() && u > gen_.cum_probs_[j]) ++j;
                return gen_.atoms_[j];
            }
            case GeneratorKind::stationary_witness:
                return shared_ * static_cast<double>(stream_.next_sign());
            case GeneratorKind::truncated_heavy: {
                const double r = gen_.witness_->quantile(stream_.next_unit());
                return r * static_cast<double>(stream_.next_sign());
            }
        }
        return 0.0;
    }

    double qv_step() const { return qv_step_; }
    double shared_draw() const { return shared_; }

private:
    const Generator& gen_;
    RandomStream& stream_;
    double shared_ = 0.0;
    double qv_step_ = 0.0;
};

MartingalePath generate_path(const Generator& gen, std::int64_t n, RandomStream& stream) {
    if (n < 1) throw std::domain_error("generate_path: n must be >= 1");
    IncrementSampler sampler(gen, stream);
    MartingalePath path;
    path.shared_draw = sampler.shared_draw();
    path.increments.resize(n);
    path.partial_sums.resize(n);
    path.running_max.resize(n);
    path.predictable_variation.resize(n);
    double sum = 0.0;
    double run_max = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = sampler.next();
        sum += x;
        run_max = std::max(run_max, sum);
        path.increments[i] = x;
        path.partial_sums[i] = sum;
        path.running_max[i] = run_max;
        path.predictable_variation[i] = sampler.qv_step() * static_cast<double>(i + 1);
    }
    return path;
}

Decomposition truncate_center(const MartingalePath& path, const Generator& gen, double u,
                              TruncationMode mode) {
    if (!(u > 0.0)) throw std::domain_error("truncate_center: u must be > 0");
    const std::size_t n = path.increments.size();
    Decomposition d;
    d.mode = mode;
    d.level = u;
    d.bounded_part.resize(n);
    d.tail_part.resize(n);

    if (mode == TruncationMode::one_sided) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = path.increments[i];
            const double below = x <= u ? x : 0.0;
            d.bounded_part[i] = below;
            d.tail_part[i] = x - below;
        }
        return d;
    }

    // two-sided: conditional truncated means per the generator's law
    double m_below = 0.0;
    double m_above = 0.0;
    switch (gen.kind()) {
        case GeneratorKind::rademacher:
        case GeneratorKind::stationary_witness:
        case GeneratorKind::truncated_heavy:
            // symmetric conditional laws (for the stationary witness the
            // indicator |X^_i| <= u is known given F_{i-1}); both centering
            // terms vanish exactly
            break;
        case GeneratorKind::scaled_bounded: {
            for (std::size_t j = 0; j < gen.atoms().size(); ++j) {
                if (std::abs(gen.atoms()[j]) <= u) m_below += gen.atom_probs()[j] * gen.atoms()[j];
            }
            // for martingales E(X 1{|X|>u}) = -E(X 1{|X|<=u}) exactly; with
            // drift the two parts must reconstruct the conditional mean
            m_above = gen.is_martingale() ? -m_below : gen.drift() - m_below;
            break;
        }
    }
    d.drift_increments.assign(n, m_below + m_above);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = path.increments[i];
        const double below = std::abs(x) <= u ? x : 0.0;
        d.bounded_part[i] = below - m_below;
        d.tail_part[i] = (x - below) - m_above;
    }
    return d;
}

std::string Event::name() const {
    return kind == Kind::max_exceeds ? "max-exceeds" : "joint-sum-variation";
}

bool event_occurs(const Event& event, const MartingalePath& path) {
    const std::size_t n = path.partial_sums.size();
    if (event.kind == Event::Kind::max_exceeds) {
        return n > 0 && path.running_max[n - 1] >= event.threshold;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (path.predictable_variation[k] > event.variation_cap) return false;
        if (path.partial_sums[k] >= event.threshold) return true;
    }
    return false;
}

double MonteCarloEstimate::point() const {
    return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
}

double MonteCarloEstimate::upper_cb() const { return clopper_pearson_upper(hits, trials, delta); }

double MonteCarloEstimate::log_upper_cb() const { return std::log(upper_cb()); }

namespace {

// one trial; returns whether the event occurred
bool run_trial(const Generator& gen, const Event& event, std::int64_t n, RandomStream& stream) {
    IncrementSampler sampler(gen, stream);
    const bool joint = event.kind == Event::Kind::joint;
    const double a = event.threshold;
    const double cap = event.variation_cap;
    const double qstep = sampler.qv_step();
    double sum = 0.0;
    double qv = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        sum += sampler.next();
        qv += qstep;
        if (joint && qv > cap) return false;  // variation only grows
        if (sum >= a) return true;
    }
    return false;
}

}  // namespace

MonteCarloEstimate mc_tail_estimate(const Generator& gen, const Event& event, std::int64_t n,
                                    const McOptions& opt) {
    if (n < 1) throw std::domain_error("mc_tail_estimate: n must be >= 1");
    if (opt.trials < 1) throw std::domain_error("mc_tail_estimate: trials must be >= 1");
    if (!(opt.delta > 0.0 && opt.delta < 1.0)) {
        throw std::domain_error("mc_tail_estimate: delta must lie in (0, 1)");
    }
    if (opt.partitions < 1) throw std::domain_error("mc_tail_estimate: partitions must be >= 1");

    const int hw = std::thread::hardware_concurrency() ? std::thread::hardware_concurrency() : 1;
    const int workers =
        std::max(1, std::min(opt.workers > 0 ? opt.workers : hw, opt.partitions));

    const std::uint64_t per = opt.trials / opt.partitions;
    const std::uint64_t extra = opt.trials % opt.partitions;
    auto chunk_begin = [&](std::uint64_t c) {
        return opt.first_trial + c * per + std::min<std::uint64_t>(c, extra);
    };

    std::atomic<std::uint64_t> next_chunk{0};
    std::atomic<std::uint64_t> total_hits{0};
    auto work = [&] {
        std::uint64_t local = 0;
        for (;;) {
            const std::uint64_t c = next_chunk.fetch_add(1);
            if (c >= static_cast<std::uint64_t>(opt.partitions)) break;
            const std::uint64_t lo = chunk_begin(c);
            const std::uint64_t hi = chunk_begin(c + 1);
            for (std::uint64_t t = lo; t < hi; ++t) {
                RandomStream stream(opt.seed, t);
                if (run_trial(gen, event, n, stream)) ++local;
            }
        }
        total_hits.fetch_add(local);
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    MonteCarloEstimate est;
    est.hits = total_hits.load();
    est.trials = opt.trials;
    est.first_trial = opt.first_trial;
    est.seed = opt.seed;
    est.delta = opt.delta;
    est.substreams = opt.partitions;
    return est;
}

MonteCarloEstimate merge_estimates(const MonteCarloEstimate& a, const MonteCarloEstimate& b) {
    if (a.seed != b.seed || a.delta != b.delta) {
        throw std::invalid_argument("merge_estimates: estimates use different seed or delta");
    }
    const bool disjoint = a.first_trial + a.trials <= b.first_trial ||
                          b.first_trial + b.trials <= a.first_trial;
    if (!disjoint) throw std::invalid_argument("merge_estimates: substream ranges overlap");
    MonteCarloEstimate out = a;
    out.hits += b.hits;
    out.trials += b.trials;
    out.first_trial = std::min(a.first_trial, b.first_trial);
    out.substreams = a.substreams + b.substreams;
    return out;
}

namespace {

constexpr double kHardBudgetCap = 3.5e9;

struct FiniteEnumerator {
    const std::vector<double>& atoms;
    const std::vector<double>& probs;
    const Event& event;
    std::int64_t n;
    double max_atom;
    double qv_step;
    double acc = 0.0;

    void dfs(std::int64_t depth, double sum, double qv, double prob) {
        const bool joint = event.kind == Event::Kind::joint;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            const double s2 = sum + atoms[j];
            const double q2 = qv + qv_step;
            const double p2 = prob * probs[j];
            if (s2 >= event.threshold && (!joint || q2 <= event.variation_cap)) {
                acc += p2;  // event hit; the whole subtree counts
                continue;
            }
            if (depth + 1 == n) continue;
            if (joint && q2 > event.variation_cap) continue;  // variation only grows
            const double reach = s2 + static_cast<double>(n - depth - 1) * max_atom;
            if (reach < event.threshold) continue;  // cannot reach the level
            dfs(depth + 1, s2, q2, p2);
        }
    }
};

// stationary witness: exact integration of the shared draw over the 2^n
// sign paths; requires a positive threshold so hits force a positive prefix
struct WitnessEnumerator {
    const WitnessDistribution& dist;
    const Event& event;
    std::int64_t n;
    std::vector<std::int64_t> prefix;     // sign partial sums along the path
    std::vector<std::uint64_t> max_hist;  // path count per positive running max
    double acc = 0.0;

    void dfs_max(std::int64_t depth, std::int64_t sum, std::int64_t run_max) {
        if (depth == n) {
            if (run_max >= 1) ++max_hist[run_max];
            return;
        }
        dfs_max(depth + 1, sum + 1, std::max(run_max, sum + 1));
        dfs_max(depth + 1, sum - 1, run_max);
    }

    void dfs_joint(std::int64_t depth, std::int64_t sum) {
        if (depth == n) {
            accumulate_joint();
            return;
        }
        prefix[depth] = sum + 1;
        dfs_joint(depth + 1, sum + 1);
        prefix[depth] = sum - 1;
        dfs_joint(depth + 1, sum - 1);
    }

    void accumulate_joint() {
        // admissible X per step k: X sigma_k >= a and k X^2 <= v2
        std::vector<std::pair<double, double>> spans;
        for (std::int64_t k = 0; k < n; ++k) {
            if (prefix[k] <= 0) continue;
            const double lo =
                std::max(1.0, event.threshold / static_cast<double>(prefix[k]));
            const double hi = std::sqrt(event.variation_cap / static_cast<double>(k + 1));
            if (lo <= hi) spans.emplace_back(lo, hi);
        }
        if (spans.empty()) return;
        std::sort(spans.begin(), spans.end());
        double p = 0.0;
        double lo = spans[0].first;
        double hi = spans[0].second;
        for (std::size_t i = 1; i < spans.size(); ++i) {
            if (spans[i].first <= hi) {
                hi = std::max(hi, spans[i].second);
            } else {
                p += dist.tail(lo) - dist.tail(hi);
                lo = spans[i].first;
                hi = spans[i].second;
            }
        }
        p += dist.tail(lo) - dist.tail(hi);
        acc += p * std::ldexp(1.0, -static_cast<int>(n));
    }
};

}  // namespace

double enumerate_exact(const Generator& gen, std::int64_t n, const Event& event,
                       const EnumerationOptions& opt) {
    if (n < 1) throw std::domain_error("enumerate_exact: n must be >= 1");
    const double budget = std::min(static_cast<double>(opt.budget), kHardBudgetCap);

    switch (gen.kind()) {
        case GeneratorKind::rademacher:
        case GeneratorKind::scaled_bounded: {
            const double paths =
                std::pow(static_cast<double>(gen.atoms().size()), static_cast<double>(n));
            if (paths > budget) {
                throw BudgetError("enumerate_exact: " + std::to_string(gen.atoms().size()) +
                                  "^" + std::to_string(n) + " paths exceed the budget");
            }
            FiniteEnumerator e{gen.atoms(),
                               gen.atom_probs(),
                               event,
                               n,
                               *std::max_element(gen.atoms().begin(), gen.atoms().end()),
                               gen.step_second_moment()};
            e.dfs(0, 0.0, 0.0, 1.0);
            return e.acc;
        }
        case GeneratorKind::stationary_witness: {
            if (std::ldexp(1.0, static_cast<int>(std::min<std::int64_t>(n, 62))) > budget) {
                throw BudgetError("enumerate_exact: 2^" + std::to_string(n) +
                                  " sign paths exceed the budget");
            }
            if (!(event.threshold > 0.0)) {
                throw std::domain_error(
                    "enumerate_exact: stationary-witness events need a positive threshold");
            }
            WitnessEnumerator e{gen.witness(), event, n, {}, {}, 0.0};
            if (event.kind == Event::Kind::max_exceeds) {
                e.max_hist.assign(n + 1, 0);
                e.dfs_max(0, 0, 0);
                double p = 0.0;
                for (std::int64_t m = 1; m <= n; ++m) {
                    if (!e.max_hist[m]) continue;
                    p += static_cast<double>(e.max_hist[m]) *
                         gen.witness().tail(event.threshold / static_cast<double>(m));
                }
                return p * std::ldexp(1.0, -static_cast<int>(n));
            }
            e.prefix.assign(n, 0);
            e.dfs_joint(0, 0);
            return e.acc;
        }
        case GeneratorKind::truncated_heavy:
            throw std::invalid_argument(
                "enumerate_exact: truncated-heavy has no finite enumeration");
    }
    throw std::logic_error("enumerate_exact: unreachable");
}

}  // namespace mtb
