#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fspca/csv.hpp"
#include "fspca/error.hpp"
#include "fspca/metrics.hpp"
#include "fspca/oracle.hpp"
#include "fspca/solver.hpp"
#include "fspca/synth.hpp"

namespace fspca {

// Seeded trial campaigns: generate a covariance per trial, solve it, score
// the result against the exhaustive optimum, and aggregate.  Trials are
// independent and may run on several threads; rows are merged in trial order
// so the output is identical regardless of scheduling.

enum class SolverKind { go, ipu, go_lowrank };

inline const char* to_string(SolverKind s) {
    switch (s) {
        case SolverKind::go: return "go";
        case SolverKind::ipu: return "ipu";
        case SolverKind::go_lowrank: return "go-lowrank";
    }
    return "?";
}

/// Initialization policy for the iterative solver.  random_subspace runs
/// `restarts` independent starts and keeps the highest-objective result.
struct Initializer {
    enum class Kind { random_subspace, lowrank };
    Kind kind = Kind::lowrank;
    int restarts = 1;
};

struct CampaignSpec {
    SchemeSpec scheme;  // scheme.seed is ignored; per-trial seeds come from seed_base
    int m = 1;
    int k = 1;
    SolverKind solver = SolverKind::go;
    Initializer init;
    int trials = 1;
    std::uint64_t seed_base = 0;
    bool with_oracle = true;
    std::uint64_t oracle_cap = 200000;
    SolverConfig solver_template;  // ridge/tolerances; m, k overwritten
    int jobs = 1;

    void validate() const {
        scheme.validate();
        if (trials < 1) throw input_error("campaign: trials must be >= 1");
        if (init.restarts < 1) throw input_error("campaign: restarts must be >= 1");
        if (jobs < 1) throw input_error("campaign: jobs must be >= 1");
        if (!(1 <= m && m <= k && k <= scheme.d))
            throw input_error("campaign: need 1 <= m <= k <= d");
        if (with_oracle && binomial(scheme.d, k) > oracle_cap)
            throw oracle_cap_error("campaign: C(d, k) exceeds the oracle cap; disable the "
                                   "oracle or raise the cap");
    }
};

struct TrialRow {
    int trial = 0;
    std::uint64_t seed = 0;
    double ir = std::numeric_limits<double>::quiet_NaN();
    double re = std::numeric_limits<double>::quiet_NaN();
    int hit = 0;
    double objective = 0.0;
    double oracle_objective = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    bool failed = false;
    std::string error;
};

struct Aggregate {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double std_err = std::numeric_limits<double>::quiet_NaN();
    double std_dev = std::numeric_limits<double>::quiet_NaN();
};

struct TrialTable {
    std::vector<TrialRow> rows;
    Aggregate ir, re, hf, objective, iterations;
    int failures = 0;
};

namespace detail {

inline Aggregate aggregate_of(const std::vector<double>& xs) {
    Aggregate agg;
    if (xs.empty()) return agg;
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    agg.mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - agg.mean) * (x - agg.mean);
    agg.std_dev = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    agg.std_err = agg.std_dev / std::sqrt(n);
    return agg;
}

/// One run of the configured solver; returns (estimate, iterations).
inline std::pair<SubspaceEstimate, int> run_solver(const SymMat& a, const CampaignSpec& spec,
                                                   std::uint64_t trial_seed) {
    SolverConfig cfg = spec.solver_template;
    cfg.m = spec.m;
    cfg.k = spec.k;
    switch (spec.solver) {
        case SolverKind::go:
            return {go(a, spec.m, spec.k), 0};
        case SolverKind::go_lowrank:
            return {go_lowrank_init(a, spec.m, spec.k), 0};
        case SolverKind::ipu: {
            if (spec.init.kind == Initializer::Kind::lowrank) {
                SolveReport report = ipu_from_lowrank(a, cfg);
                return {std::move(report.estimate), report.iterations};
            }
            // Distinct stream from the covariance draw so restart count and
            // generation never interact.
            Rng init_rng(trial_seed ^ 0x9e3779b97f4a7c15ULL);
            std::optional<SolveReport> best;
            double best_obj = -std::numeric_limits<double>::infinity();
            for (int r = 0; r < spec.init.restarts; ++r) {
                SolveReport report =
                    ipu(a, cfg, random_subspace_init(a.dim(), spec.m, spec.k, init_rng));
                const double obj = report.objective_trace.back();
                if (obj > best_obj) {
                    best_obj = obj;
                    best = std::move(report);
                }
            }
            return {std::move(best->estimate), best->iterations};
        }
    }
    throw input_error("campaign: unknown solver");
}

inline TrialRow run_trial(const CampaignSpec& spec, int trial) {
    TrialRow row;
    row.trial = trial;
    row.seed = spec.seed_base + static_cast<std::uint64_t>(trial);
    try {
        SchemeSpec scheme = spec.scheme;
        scheme.seed = row.seed;
        const SymMat a = make_covariance(scheme);

        auto [estimate, iterations] = run_solver(a, spec, row.seed);
        row.objective = objective_value(a, estimate);
        row.iterations = iterations;

        if (spec.with_oracle) {
            const OracleResult oracle = brute_force(a, spec.m, spec.k, spec.oracle_cap);
            row.oracle_objective = oracle.optimal_objective;
            row.ir = best_intersection_ratio(estimate.support(), oracle);
            row.re = relative_error(row.objective, oracle.optimal_objective);
            row.hit = row.re <= 1e-3 ? 1 : 0;
        }
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
    }
    return row;
}

}  // namespace detail

inline TrialTable run_campaign(const CampaignSpec& spec) {
    spec.validate();
    TrialTable table;
    table.rows.resize(static_cast<std::size_t>(spec.trials));

    const int jobs = std::min(spec.jobs, spec.trials);
    if (jobs <= 1) {
        for (int t = 0; t < spec.trials; ++t) table.rows[static_cast<std::size_t>(t)] = detail::run_trial(spec, t);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        std::atomic<int> next{0};
        for (int w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (int t = next.fetch_add(1); t < spec.trials; t = next.fetch_add(1))
                    table.rows[static_cast<std::size_t>(t)] = detail::run_trial(spec, t);
            });
        for (auto& worker : workers) worker.join();
    }

    std::vector<double> irs, res, hits, objectives, iterations;
    for (const TrialRow& row : table.rows) {
        if (row.failed) {
            ++table.failures;
            continue;
        }
        objectives.push_back(row.objective);
        iterations.push_back(static_cast<double>(row.iterations));
        if (spec.with_oracle) {
            irs.push_back(row.ir);
            res.push_back(row.re);
            hits.push_back(static_cast<double>(row.hit));
        }
    }
    table.ir = detail::aggregate_of(irs);
    table.re = detail::aggregate_of(res);
    table.hf = detail::aggregate_of(hits);
    table.objective = detail::aggregate_of(objectives);
    table.iterations = detail::aggregate_of(iterations);
    return table;
}

/// Full solve report for trace export; identical to calling ipu directly.
inline SolveReport capture_trace(const SymMat& a, const SolverConfig& cfg,
                                 const SubspaceEstimate& init) {
    return ipu(a, cfg, init);
}

inline void write_trace_csv(std::ostream& out, const SolveReport& report) {
    out << "iter,objective,support_changed\n";
    for (std::size_t i = 0; i < report.objective_trace.size(); ++i) {
        const bool changed = i > 0 && !(report.support_history[i] == report.support_history[i - 1]);
        out << i << ',' << format_double(report.objective_trace[i]) << ',' << (changed ? 1 : 0)
            << '\n';
    }
}

inline void write_trial_table_csv(std::ostream& out, const TrialTable& table, bool with_oracle) {
    out << "trial,seed,ir,re,hit,objective,oracle_objective,iterations,failed\n";
    for (const TrialRow& row : table.rows) {
        out << row.trial << ',' << row.seed << ',';
        if (with_oracle && !row.failed)
            out << format_double(row.ir) << ',' << format_double(row.re) << ',' << row.hit;
        else
            out << ",,";
        out << ',' << format_double(row.objective) << ',';
        if (with_oracle && !row.failed) out << format_double(row.oracle_objective);
        out << ',' << row.iterations << ',' << (row.failed ? 1 : 0) << '\n';
    }
    const auto footer = [&](const char* name, const Aggregate& agg) {
        out << "# " << name << ",mean," << format_double(agg.mean) << ",std_err,"
            << format_double(agg.std_err) << ",std_dev," << format_double(agg.std_dev) << '\n';
    };
    footer("ir", table.ir);
    footer("re", table.re);
    footer("hf", table.hf);
    footer("objective", table.objective);
    footer("iterations", table.iterations);
}

inline nlohmann::ordered_json trial_table_json(const CampaignSpec& spec, const TrialTable& table) {
    nlohmann::ordered_json doc;
    doc["schema"] = "fspca-trials/v1";
    doc["spec"] = {{"d", spec.scheme.d},
                   {"m", spec.m},
                   {"k", spec.k},
                   {"solver", to_string(spec.solver)},
                   {"init", spec.init.kind == Initializer::Kind::lowrank ? "lowrank" : "random"},
                   {"restarts", spec.init.restarts},
                   {"trials", spec.trials},
                   {"seed_base", spec.seed_base},
                   {"oracle", spec.with_oracle}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const TrialRow& row : table.rows) {
        nlohmann::ordered_json r;
        r["trial"] = row.trial;
        r["seed"] = row.seed;
        if (row.failed) {
            r["failed"] = true;
            r["error"] = row.error;
        } else {
            r["objective"] = row.objective;
            r["iterations"] = row.iterations;
            if (spec.with_oracle) {
                r["ir"] = row.ir;
                r["re"] = row.re;
                r["hit"] = row.hit;
                r["oracle_objective"] = row.oracle_objective;
            }
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    const auto agg = [](const Aggregate& a) {
        return nlohmann::ordered_json{
            {"mean", a.mean}, {"std_err", a.std_err}, {"std_dev", a.std_dev}};
    };
    doc["aggregates"] = {{"ir", agg(table.ir)},
                         {"re", agg(table.re)},
                         {"hf", agg(table.hf)},
                         {"objective", agg(table.objective)},
                         {"iterations", agg(table.iterations)}};
    doc["failures"] = table.failures;
    return doc;
}

}  // namespace fspca
