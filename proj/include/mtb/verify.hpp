#pragma once
// Verification harness: sweeps parameter grids, compares every bound against
// exact enumeration oracles, Monte Carlo upper confidence bounds or the
// certificate floor, and emits machine-readable reports (JSON lines + CSV).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtb/bounds.hpp"
#include "mtb/simulate.hpp"

namespace mtb {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Direction {
    upper,  // bound must sit at or above the oracle value
    lower,  // bound is a lower-bound certificate; oracle is the floor it must clear
};

struct VerificationVerdict {
    std::string suite;
    std::string bound_name;
    std::string generator;  // empty -> null in reports
    std::optional<double> alpha;
    std::optional<std::int64_t> n;
    std::optional<double> x;
    std::optional<double> v;
    std::optional<double> c1;
    std::optional<double> c2;
    std::string oracle_kind;  // enumeration | monte-carlo-ucb | certificate
    double oracle_log = 0.0;
    double bound_log = 0.0;
    double slack_log = 0.0;
    bool dominates = false;
    bool vacuous = false;
    bool skipped = false;
    std::optional<std::uint64_t> hits;
    std::optional<std::uint64_t> trials;
    std::optional<double> delta;
    std::uint64_t seed = 0;
    std::string note;  // skip reason, empty otherwise
};

// Sign conventions: for `upper`, slack = bound - oracle and domination means
// slack >= 0.  For `lower` the roles swap: slack = oracle - bound (floor
// minus certificate) and domination means slack <= 0.
VerificationVerdict check_dominance(const TailBound& bound, double oracle_log, Direction dir);

// Two-sided Kolmogorov-Smirnov statistic of a sorted sample against the
// distribution whose tail function is `tail` (CDF = 1 - tail).
double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& tail);

// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

struct SweepConfig {
    struct Lemma1 {
        std::int64_t n_max = 20;  // x sweeps all integers in [1, n]
    };
    struct Lemma2Exact {
        std::int64_t n_max = 12;
        std::vector<double> xs{1, 2, 3};
        std::vector<double> vs{1, 2};
    };
    struct Theorem2Exact {
        std::int64_t n_max = 12;
        std::vector<double> alphas{0.1, 0.3, 0.5, 0.7, 0.9};
        std::vector<double> xs{1, 2, 3};
        std::vector<double> vs{1, 2};
    };
    struct Corollary1Exact {
        std::vector<double> alphas{0.3, 0.5, 0.7};
        std::vector<std::int64_t> ns{4, 8, 12, 16};
        std::vector<double> xs{1};
    };
    struct Theorem1Mc {
        std::vector<double> alphas{1.0 / 3.0, 0.5};
        std::vector<std::int64_t> ns{16, 64, 256, 1024};
        std::vector<double> xs{1};
        std::vector<GeneratorKind> generators{GeneratorKind::rademacher,
                                              GeneratorKind::truncated_heavy};
        std::uint64_t trials = 1000000;
    };
    struct Certificate {
        std::vector<double> alphas{0.3, 0.5, 0.7};
        std::int64_t n_max = 1000000;  // scanned exhaustively; rows on a log2 grid
    };

    std::optional<Lemma1> lemma1;
    std::optional<Lemma2Exact> lemma2;
    std::optional<Theorem2Exact> theorem2;
    std::optional<Corollary1Exact> corollary1;
    std::optional<Theorem1Mc> theorem1_mc;
    std::optional<Certificate> certificate;

    std::uint64_t seed = 20250801;
    double delta = 1e-3;
    int partitions = 1;
    std::uint64_t enum_budget = std::uint64_t{1} << 24;
    std::string out_jsonl;    // empty: do not write
    std::string out_summary;  // empty: do not write
};

struct SuiteSummary {
    std::string suite;
    std::optional<double> alpha;  // per-alpha summaries (certificate suite)
    std::int64_t rows = 0;
    std::int64_t dominating = 0;
    std::int64_t failing = 0;
    std::int64_t vacuous = 0;
    std::int64_t skipped = 0;
    std::optional<double> min_slack_log;
    std::optional<std::uint64_t> trials;
    std::optional<double> delta;
    std::uint64_t seed = 0;
    std::optional<double> decay_slope;     // fitted n-decay exponent
    std::optional<double> decay_expected;  // alpha it should match
    std::optional<bool> decay_ok;          // within 10% for every fitted group
    std::optional<std::int64_t> n0;        // certificate threshold
    std::optional<std::int64_t> n_max;
};

struct SuiteResult {
    std::vector<VerificationVerdict> rows;
    std::vector<SuiteSummary> summaries;

    bool all_dominate() const;  // over non-skipped rows
};

// Runs every configured suite.  Rows are emitted in a deterministic grid
// order regardless of the partition count; identical configs reproduce the
// output byte for byte.  Budget overruns become per-row skipped records.
SuiteResult run_suite(const SweepConfig& config);

// {-1, 0, +1} @ (1/4, 1/2, 1/4): the bounded supermartingale law used by the
// exact joint-event suites.
Generator three_point_generator();

void write_jsonl(const std::vector<VerificationVerdict>& rows, std::ostream& out);
void write_summary_csv(const std::vector<SuiteSummary>& summaries, std::ostream& out);

// Convenience wrappers that create parent directories and map failures to
// IoError; used by the CLI.
void write_jsonl_file(const std::vector<VerificationVerdict>& rows, const std::string& path);
void write_summary_csv_file(const std::vector<SuiteSummary>& summaries,
                            const std::string& path);

// Reads rows back from a JSON-lines verdict file (for report aggregation).
std::vector<VerificationVerdict> read_jsonl_file(const std::string& path);

// Aggregates already-computed rows into per-suite summaries (report path;
// scan metadata like n0 is not reconstructed).
std::vector<SuiteSummary> summarize_rows(const std::vector<VerificationVerdict>& rows);

}  // namespace mtb
