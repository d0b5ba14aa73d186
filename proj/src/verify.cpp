#include "mtb/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mtb/numerics.hpp"
#include "mtb/witness.hpp"

namespace mtb {

namespace {

int effective_workers(int partitions) {
    const int hw = std::thread::hardware_concurrency() ? std::thread::hardware_concurrency() : 1;
    return std::max(1, std::min(partitions, hw));
}

void parallel_for(std::int64_t count, int workers, const std::function<void(std::int64_t)>& fn) {
    workers = static_cast<int>(std::min<std::int64_t>(workers, count));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto drain = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

VerificationVerdict check_dominance(const TailBound& bound, double oracle_log, Direction dir) {
    VerificationVerdict v;
    v.bound_name = bound.provenance;
    v.bound_log = bound.log_value;
    v.oracle_log = oracle_log;
    v.vacuous = bound.vacuous();
    if (dir == Direction::upper) {
        v.slack_log = bound.log_value - oracle_log;
        v.dominates = v.slack_log >= 0.0;
    } else {
        // roles swapped: oracle is the floor the certificate must clear
        v.slack_log = oracle_log - bound.log_value;
        v.dominates = v.slack_log <= 0.0;
    }
    return v;
}

double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& tail) {
    if (sorted_samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    if (!std::is_sorted(sorted_samples.begin(), sorted_samples.end())) {
        throw std::invalid_argument("ks_statistic: samples must be sorted");
    }
    const double n = static_cast<double>(sorted_samples.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double cdf = 1.0 - tail(sorted_samples[i]);
        const double above = (static_cast<double>(i) + 1.0) / n - cdf;
        const double below = cdf - static_cast<double>(i) / n;
        stat = std::max(stat, std::max(above, below));
    }
    return stat;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_slope: need two or more aligned points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Generator three_point_generator() {
    return Generator::scaled_bounded({-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25});
}

bool SuiteResult::all_dominate() const {
    for (const auto& r : rows) {
        if (!r.skipped && !r.dominates) return false;
    }
    return true;
}

namespace {

struct SummaryAccumulator {
    SuiteSummary s;

    explicit SummaryAccumulator(std::string suite, std::uint64_t seed) {
        s.suite = std::move(suite);
        s.seed = seed;
    }

    void add(const VerificationVerdict& row) {
        ++s.rows;
        if (row.skipped) {
            ++s.skipped;
            return;
        }
        if (row.dominates) ++s.dominating; else ++s.failing;
        if (row.vacuous) ++s.vacuous;
        if (std::isfinite(row.slack_log)) {
            s.min_slack_log = s.min_slack_log ? std::min(*s.min_slack_log, row.slack_log)
                                              : row.slack_log;
        }
    }
};

// One exact-oracle row; budget overruns turn into skipped records.
template <typename OracleFn, typename BoundFn>
VerificationVerdict exact_row(const char* suite, const char* bound_name,
                              const std::string& generator, OracleFn&& oracle,
                              BoundFn&& bound_fn, std::uint64_t seed) {
    VerificationVerdict row;
    const TailBound bound = bound_fn();
    try {
        const double p = oracle();
        row = check_dominance(bound, std::log(p), Direction::upper);
    } catch (const BudgetError& e) {
        row.bound_log = bound.log_value;
        row.vacuous = bound.vacuous();
        row.skipped = true;
        row.note = e.what();
        row.oracle_log = std::numeric_limits<double>::quiet_NaN();
        row.slack_log = std::numeric_limits<double>::quiet_NaN();
    }
    row.suite = suite;
    row.bound_name = bound_name;
    row.generator = generator;
    row.oracle_kind = "enumeration";
    row.seed = seed;
    return row;
}

}  // namespace

SuiteResult run_suite(const SweepConfig& cfg) {
    SuiteResult result;
    const int workers = effective_workers(cfg.partitions);
    const EnumerationOptions enum_opt{cfg.enum_budget};

    if (cfg.lemma1) {
        const auto& sc = *cfg.lemma1;
        const Generator gen = Generator::rademacher();
        std::vector<std::pair<std::int64_t, std::int64_t>> grid;
        for (std::int64_t n = 1; n <= sc.n_max; ++n)
            for (std::int64_t x = 1; x <= n; ++x) grid.emplace_back(n, x);
        std::vector<VerificationVerdict> rows(grid.size());
        parallel_for(static_cast<std::int64_t>(grid.size()), workers, [&](std::int64_t i) {
            const auto [n, x] = grid[i];
            auto row = exact_row(
                "lemma1", "lemma1", gen.name(),
                [&] {
                    return enumerate_exact(gen, n,
                                           Event::max_exceeds(static_cast<double>(x)), enum_opt);
                },
                [&] { return azuma_max_tail_bound(n, static_cast<double>(x)); }, cfg.seed);
            row.n = n;
            row.x = static_cast<double>(x);
            rows[i] = std::move(row);
        });
        SummaryAccumulator acc("lemma1", cfg.seed);
        for (auto& r : rows) {
            acc.add(r);
            result.rows.push_back(std::move(r));
        }
        result.summaries.push_back(std::move(acc.s));
    }

    // lemma2 and theorem2 share the joint-event enumeration oracle on the
    // three-point law, so the distinct (n, x, v) cells are computed once.
    if (cfg.lemma2 || cfg.theorem2) {
        const Generator gen = three_point_generator();
        std::map<std::tuple<std::int64_t, double, double>, double> oracle;
        {
            std::vector<std::tuple<std::int64_t, double, double>> keys;
            auto collect = [&](std::int64_t n_max, const std::vector<double>& xs,
                               const std::vector<double>& vs) {
                for (std::int64_t n = 1; n <= n_max; ++n)
                    for (double x : xs)
                        for (double v : vs) keys.emplace_back(n, x, v);
            };
            if (cfg.lemma2) collect(cfg.lemma2->n_max, cfg.lemma2->xs, cfg.lemma2->vs);
            if (cfg.theorem2) collect(cfg.theorem2->n_max, cfg.theorem2->xs, cfg.theorem2->vs);
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
            std::vector<double> probs(keys.size());
            std::vector<std::string> errors(keys.size());
            parallel_for(static_cast<std::int64_t>(keys.size()), workers, [&](std::int64_t i) {
                const auto [n, x, v] = keys[i];
                try {
                    probs[i] = enumerate_exact(gen, n, Event::joint(x, v * v), enum_opt);
                } catch (const BudgetError& e) {
                    probs[i] = std::numeric_limits<double>::quiet_NaN();
                    errors[i] = e.what();
                }
            });
            for (std::size_t i = 0; i < keys.size(); ++i) {
                oracle[keys[i]] = probs[i];  // NaN marks a budget overrun
                (void)errors;
            }
        }

        auto joint_row = [&](const char* suite, const char* bound_name, std::int64_t n,
                             double x, double v, const TailBound& bound) {
            VerificationVerdict row;
            const double p = oracle.at({n, x, v});
            if (std::isnan(p)) {
                row.bound_log = bound.log_value;
                row.vacuous = bound.vacuous();
                row.skipped = true;
                row.note = "enumeration budget exceeded";
                row.oracle_log = std::numeric_limits<double>::quiet_NaN();
                row.slack_log = std::numeric_limits<double>::quiet_NaN();
            } else {
                row = check_dominance(bound, std::log(p), Direction::upper);
            }
            row.suite = suite;
            row.bound_name = bound_name;
            row.generator = gen.name();
            row.n = n;
            row.x = x;
            row.v = v;
            row.oracle_kind = "enumeration";
            row.seed = cfg.seed;
            return row;
        };

        if (cfg.lemma2) {
            SummaryAccumulator acc("lemma2-exact", cfg.seed);
            for (std::int64_t n = 1; n <= cfg.lemma2->n_max; ++n)
                for (double x : cfg.lemma2->xs)
                    for (double v : cfg.lemma2->vs) {
                        auto row = joint_row("lemma2-exact", "lemma2", n, x, v,
                                             freedman_unit_bound(x, v));
                        acc.add(row);
                        result.rows.push_back(std::move(row));
                    }
            result.summaries.push_back(std::move(acc.s));
        }
        if (cfg.theorem2) {
            SummaryAccumulator acc("theorem2-exact", cfg.seed);
            for (double a : cfg.theorem2->alphas) {
                const Alpha alpha(a);
                const double c1 = gen.plus_moment(alpha);
                for (std::int64_t n = 1; n <= cfg.theorem2->n_max; ++n)
                    for (double x : cfg.theorem2->xs)
                        for (double v : cfg.theorem2->vs) {
                            BoundParams p{alpha, x, n, v, c1, 0.0};
                            auto row = joint_row("theorem2-exact", "theorem2", n, x, v,
                                                 theorem2_tail_bound(p));
                            row.alpha = a;
                            row.c1 = c1;
                            acc.add(row);
                            result.rows.push_back(std::move(row));
                        }
            }
            result.summaries.push_back(std::move(acc.s));
        }
    }

    if (cfg.corollary1) {
        const auto& sc = *cfg.corollary1;
        const Generator gen = three_point_generator();
        struct Cell {
            double a, x;
            std::int64_t n;
        };
        std::vector<Cell> grid;
        for (double a : sc.alphas)
            for (std::int64_t n : sc.ns)
                for (double x : sc.xs) grid.push_back({a, x, n});
        std::vector<VerificationVerdict> rows(grid.size());
        parallel_for(static_cast<std::int64_t>(grid.size()), workers, [&](std::int64_t i) {
            const auto [a, x, n] = grid[i];
            const Alpha alpha(a);
            const double c1 = gen.plus_moment(alpha);
            const double c2 = gen.variation_moment(alpha);
            auto row = exact_row(
                "corollary1-exact", "corollary1", gen.name(),
                [&] {
                    return enumerate_exact(
                        gen, n, Event::max_exceeds(static_cast<double>(n) * x), enum_opt);
                },
                [&] {
                    BoundParams p{alpha, x, n, 0.0, c1, c2};
                    return corollary1_tail_bound(p);
                },
                cfg.seed);
            row.alpha = a;
            row.n = n;
            row.x = x;
            row.c1 = c1;
            row.c2 = c2;
            rows[i] = std::move(row);
        });
        SummaryAccumulator acc("corollary1-exact", cfg.seed);
        for (auto& r : rows) {
            acc.add(r);
            result.rows.push_back(std::move(r));
        }
        result.summaries.push_back(std::move(acc.s));
    }

    if (cfg.theorem1_mc) {
        const auto& sc = *cfg.theorem1_mc;
        SummaryAccumulator acc("theorem1-mc", cfg.seed);
        acc.s.trials = sc.trials;
        acc.s.delta = cfg.delta;

        std::map<std::pair<GeneratorKind, double>, Generator> gens;
        for (GeneratorKind kind : sc.generators) {
            for (double a : sc.alphas) {
                const double key_alpha =
                    (kind == GeneratorKind::rademacher) ? 0.0 : a;  // alpha-free law
                const auto key = std::make_pair(kind, key_alpha);
                if (gens.count(key)) continue;
                switch (kind) {
                    case GeneratorKind::rademacher:
                        gens.emplace(key, Generator::rademacher());
                        break;
                    case GeneratorKind::truncated_heavy:
                        gens.emplace(key, Generator::truncated_heavy(Alpha(a)));
                        break;
                    case GeneratorKind::stationary_witness:
                        gens.emplace(key, Generator::stationary_witness(Alpha(a)));
                        break;
                    default:
                        throw std::invalid_argument(
                            "theorem1-mc: unsupported generator kind in config");
                }
            }
        }

        // identical simulations (the rademacher law does not depend on
        // alpha) are run once and reused
        std::map<std::tuple<GeneratorKind, double, std::int64_t, double>, MonteCarloEstimate>
            memo;
        struct Group {
            std::vector<double> log_n, log_decay;
            double alpha;
        };
        std::map<std::tuple<GeneratorKind, double, double>, Group> decay_groups;

        for (GeneratorKind kind : sc.generators) {
            for (double a : sc.alphas) {
                const Alpha alpha(a);
                const double key_alpha = (kind == GeneratorKind::rademacher) ? 0.0 : a;
                const Generator& gen = gens.at({kind, key_alpha});
                const double c1 = gen.cramer_moment(alpha);
                for (double x : sc.xs) {
                    for (std::int64_t n : sc.ns) {
                        const double threshold = static_cast<double>(n) * x;
                        const auto memo_key = std::make_tuple(kind, key_alpha, n, threshold);
                        auto found = memo.find(memo_key);
                        if (found == memo.end()) {
                            McOptions opt;
                            opt.trials = sc.trials;
                            opt.seed = cfg.seed;
                            opt.delta = cfg.delta;
                            opt.partitions = cfg.partitions;
                            const auto est = mc_tail_estimate(
                                gen, Event::max_exceeds(threshold), n, opt);
                            found = memo.emplace(memo_key, est).first;
                        }
                        const MonteCarloEstimate& est = found->second;
                        BoundParams bp{alpha, x, n, 0.0, c1, 0.0};
                        const TailBound bound = theorem1_tail_bound(bp);
                        auto row = check_dominance(bound, est.log_upper_cb(), Direction::upper);
                        row.suite = "theorem1-mc";
                        row.bound_name = "theorem1";
                        row.generator = gen.name();
                        row.alpha = a;
                        row.n = n;
                        row.x = x;
                        row.c1 = c1;
                        row.oracle_kind = "monte-carlo-ucb";
                        row.hits = est.hits;
                        row.trials = est.trials;
                        row.delta = cfg.delta;
                        row.seed = cfg.seed;
                        acc.add(row);

                        if (!row.vacuous) {
                            auto& grp = decay_groups[{kind, a, x}];
                            grp.alpha = a;
                            grp.log_n.push_back(std::log(static_cast<double>(n)));
                            const double log_c = std::log(theorem1_constant(alpha, x, c1));
                            grp.log_decay.push_back(std::log(log_c - bound.log_value));
                        }
                        result.rows.push_back(std::move(row));
                    }
                }
            }
        }

        // n-decay of the log bound: ln(ln C - ln bound) against ln n should
        // have slope alpha, within 10%, over the non-vacuous rows
        double worst_err = -1.0;
        bool all_ok = true;
        for (const auto& [key, grp] : decay_groups) {
            if (grp.log_n.size() < 3) continue;
            const double slope = fit_slope(grp.log_n, grp.log_decay);
            const double err = std::abs(slope - grp.alpha) / grp.alpha;
            if (err > worst_err) {
                worst_err = err;
                acc.s.decay_slope = slope;
                acc.s.decay_expected = grp.alpha;
            }
            if (err > 0.1) all_ok = false;
        }
        if (worst_err >= 0.0) acc.s.decay_ok = all_ok;
        result.summaries.push_back(std::move(acc.s));
    }

    if (cfg.certificate) {
        const auto& sc = *cfg.certificate;
        for (double a : sc.alphas) {
            const Alpha alpha(a);
            const WitnessDistribution dist(alpha);
            SummaryAccumulator acc("certificate", cfg.seed);
            acc.s.alpha = a;
            acc.s.n_max = sc.n_max;

            std::vector<std::int64_t> ns;
            for (std::int64_t n = 1; n <= sc.n_max && n > 0; n *= 2) ns.push_back(n);
            if (ns.empty() || ns.back() != sc.n_max) ns.push_back(sc.n_max);

            for (std::int64_t n : ns) {
                const CertificateRecord rec = optimality_certificate(dist, n);
                TailBound cert{rec.certificate_log,
                               "certificate(alpha=" + fmt17(a) + ", n=" + std::to_string(n) +
                                   ")"};
                auto row = check_dominance(cert, rec.threshold_log, Direction::lower);
                row.vacuous = false;
                row.suite = "certificate";
                row.bound_name = "certificate";
                row.alpha = a;
                row.n = n;
                row.oracle_kind = "certificate";
                row.seed = cfg.seed;
                acc.add(row);
                result.rows.push_back(std::move(row));
            }
            acc.s.n0 = optimality_threshold(alpha, sc.n_max, workers);
            result.summaries.push_back(std::move(acc.s));
        }
    }

    if (!cfg.out_jsonl.empty()) write_jsonl_file(result.rows, cfg.out_jsonl);
    if (!cfg.out_summary.empty()) write_summary_csv_file(result.summaries, cfg.out_summary);
    return result;
}

namespace {

void json_string(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void json_number(std::string& out, double v) {
    if (std::isfinite(v)) out += fmt17(v);
    else out += "null";  // JSON has no inf/nan; null marks log of a zero probability
}

template <typename T>
void json_opt(std::string& out, const std::optional<T>& v) {
    if (!v) {
        out += "null";
        return;
    }
    if constexpr (std::is_same_v<T, double>) json_number(out, *v);
    else out += std::to_string(*v);
}

}  // namespace

void write_jsonl(const std::vector<VerificationVerdict>& rows, std::ostream& out) {
    std::string line;
    for (const auto& r : rows) {
        line.clear();
        line += "{\"suite\":";
        json_string(line, r.suite);
        line += ",\"bound\":";
        json_string(line, r.bound_name);
        line += ",\"generator\":";
        if (r.generator.empty()) line += "null"; else json_string(line, r.generator);
        line += ",\"alpha\":";
        json_opt(line, r.alpha);
        line += ",\"n\":";
        json_opt(line, r.n);
        line += ",\"x\":";
        json_opt(line, r.x);
        line += ",\"v\":";
        json_opt(line, r.v);
        line += ",\"c1\":";
        json_opt(line, r.c1);
        line += ",\"c2\":";
        json_opt(line, r.c2);
        line += ",\"oracle\":";
        json_string(line, r.oracle_kind);
        line += ",\"oracle_log\":";
        json_number(line, r.oracle_log);
        line += ",\"bound_log\":";
        json_number(line, r.bound_log);
        line += ",\"slack_log\":";
        json_number(line, r.slack_log);
        line += ",\"dominates\":";
        line += r.dominates ? "true" : "false";
        line += ",\"vacuous\":";
        line += r.vacuous ? "true" : "false";
        line += ",\"skipped\":";
        line += r.skipped ? "true" : "false";
        line += ",\"hits\":";
        json_opt(line, r.hits);
        line += ",\"trials\":";
        json_opt(line, r.trials);
        line += ",\"delta\":";
        json_opt(line, r.delta);
        line += ",\"seed\":";
        line += std::to_string(r.seed);
        line += ",\"note\":";
        if (r.note.empty()) line += "null"; else json_string(line, r.note);
        line += "}\n";
        out << line;
    }
}

void write_summary_csv(const std::vector<SuiteSummary>& summaries, std::ostream& out) {
    out << "suite,alpha,rows,dominating,failing,vacuous,skipped,min_slack_log,trials,delta,"
           "seed,decay_slope,decay_expected,decay_ok,n0,n_max\n";
    auto opt_num = [](const std::optional<double>& v) {
        return v && std::isfinite(*v) ? fmt17(*v) : std::string();
    };
    for (const auto& s : summaries) {
        out << s.suite << ',' << opt_num(s.alpha) << ',' << s.rows << ',' << s.dominating << ','
            << s.failing << ',' << s.vacuous << ',' << s.skipped << ','
            << opt_num(s.min_slack_log) << ','
            << (s.trials ? std::to_string(*s.trials) : std::string()) << ','
            << opt_num(s.delta) << ',' << s.seed << ',' << opt_num(s.decay_slope) << ','
            << opt_num(s.decay_expected) << ','
            << (s.decay_ok ? (*s.decay_ok ? "true" : "false") : "") << ','
            << (s.n0 ? std::to_string(*s.n0) : std::string()) << ','
            << (s.n_max ? std::to_string(*s.n_max) : std::string()) << '\n';
    }
}

namespace {

std::ofstream open_out(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + p.parent_path().string());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

}  // namespace

void write_jsonl_file(const std::vector<VerificationVerdict>& rows, const std::string& path) {
    auto out = open_out(path);
    write_jsonl(rows, out);
    if (!out) throw IoError("write failed: " + path);
}

void write_summary_csv_file(const std::vector<SuiteSummary>& summaries,
                            const std::string& path) {
    auto out = open_out(path);
    write_summary_csv(summaries, out);
    if (!out) throw IoError("write failed: " + path);
}

std::vector<VerificationVerdict> read_jsonl_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::vector<VerificationVerdict> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        VerificationVerdict r;
        r.suite = j.at("suite").get<std::string>();
        r.bound_name = j.at("bound").get<std::string>();
        if (!j.at("generator").is_null()) r.generator = j["generator"].get<std::string>();
        auto opt_d = [&](const char* k) -> std::optional<double> {
            if (j.at(k).is_null()) return std::nullopt;
            return j[k].get<double>();
        };
        r.alpha = opt_d("alpha");
        if (!j.at("n").is_null()) r.n = j["n"].get<std::int64_t>();
        r.x = opt_d("x");
        r.v = opt_d("v");
        r.c1 = opt_d("c1");
        r.c2 = opt_d("c2");
        r.oracle_kind = j.at("oracle").get<std::string>();
        r.oracle_log = j.at("oracle_log").is_null() ? kNegInf : j["oracle_log"].get<double>();
        r.bound_log = j.at("bound_log").is_null() ? kNegInf : j["bound_log"].get<double>();
        r.slack_log = j.at("slack_log").is_null()
                          ? std::numeric_limits<double>::quiet_NaN()
                          : j["slack_log"].get<double>();
        r.dominates = j.at("dominates").get<bool>();
        r.vacuous = j.at("vacuous").get<bool>();
        r.skipped = j.at("skipped").get<bool>();
        if (!j.at("hits").is_null()) r.hits = j["hits"].get<std::uint64_t>();
        if (!j.at("trials").is_null()) r.trials = j["trials"].get<std::uint64_t>();
        r.delta = opt_d("delta");
        r.seed = j.at("seed").get<std::uint64_t>();
        if (!j.at("note").is_null()) r.note = j["note"].get<std::string>();
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SuiteSummary> summarize_rows(const std::vector<VerificationVerdict>& rows) {
    std::vector<SuiteSummary> out;
    std::map<std::pair<std::string, double>, std::size_t> index;
    for (const auto& r : rows) {
        // certificate summaries stay per-alpha, mirroring run_suite
        const double alpha_key =
            (r.suite == "certificate" && r.alpha) ? *r.alpha : std::numeric_limits<double>::max();
        const auto key = std::make_pair(r.suite, alpha_key);
        auto it = index.find(key);
        if (it == index.end()) {
            SuiteSummary s;
            s.suite = r.suite;
            if (r.suite == "certificate") s.alpha = r.alpha;
            s.seed = r.seed;
            if (r.trials) s.trials = r.trials;
            if (r.delta) s.delta = r.delta;
            it = index.emplace(key, out.size()).first;
            out.push_back(std::move(s));
        }
        auto& s = out[it->second];
        ++s.rows;
        if (r.skipped) {
            ++s.skipped;
            continue;
        }
        if (r.dominates) ++s.dominating; else ++s.failing;
        if (r.vacuous) ++s.vacuous;
        if (std::isfinite(r.slack_log)) {
            s.min_slack_log =
                s.min_slack_log ? std::min(*s.min_slack_log, r.slack_log) : r.slack_log;
        }
    }
    return out;
}

}  // namespace mtb
