// Command-line front end: solve / oracle / generate / campaign / trace.
//
// Exit codes: 0 success, 2 invalid flags, 3 input parse error,
//             4 solver failure, 5 exhaustive-search cap exceeded.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <fspca/fspca.hpp>

namespace {

using nlohmann::ordered_json;

struct InputSource {
    std::string covariance_csv;
    std::string data_csv;
    bool center = false;
    std::string scheme;  // A..F or zipf
    int d = 20;
    int n = 0;
    double zipf_c = 1.0;
    double zipf_t = 2.0;
    std::uint64_t seed = 0;
};

void add_input_flags(CLI::App* cmd, InputSource& src) {
    auto* cov = cmd->add_option("--covariance-csv", src.covariance_csv,
                                "CSV file holding a symmetric covariance matrix");
    auto* data = cmd->add_option("--data-csv", src.data_csv,
                                 "CSV file holding a d x n data matrix (rows = features)");
    auto* scheme = cmd->add_option("--scheme", src.scheme,
                                   "Built-in covariance scheme: A..F or zipf");
    cov->excludes(data)->excludes(scheme);
    data->excludes(scheme);
    cmd->add_flag("--center", src.center, "Center data rows before forming the Gram matrix");
    cmd->add_option("--d", src.d, "Dimension for --scheme inputs")->check(CLI::PositiveNumber);
    cmd->add_option("--n", src.n, "Sample count for data schemes E/F (default: d)");
    cmd->add_option("--zipf-c", src.zipf_c, "Zipf scale c (scheme zipf)");
    cmd->add_option("--zipf-t", src.zipf_t, "Zipf decay t > 1 (scheme zipf)");
    cmd->add_option("--seed", src.seed, "Seed for scheme generation and random starts");
}

fspca::SchemeSpec scheme_from_source(const InputSource& src) {
    if (src.scheme == "zipf") return fspca::zipf_scheme(src.d, src.zipf_c, src.zipf_t, src.seed);
    if (src.scheme.size() != 1)
        throw fspca::input_error("--scheme must be one of A..F or zipf, got '" + src.scheme + "'");
    return fspca::scheme_preset(src.scheme[0], src.d, src.seed, src.n);
}

fspca::SymMat load_covariance(const InputSource& src) {
    if (!src.covariance_csv.empty()) return fspca::load_covariance_csv(src.covariance_csv);
    if (!src.data_csv.empty())
        return fspca::sample_covariance(fspca::load_matrix_csv(src.data_csv), src.center);
    if (!src.scheme.empty()) return fspca::make_covariance(scheme_from_source(src));
    throw fspca::input_error("no input: give --covariance-csv, --data-csv, or --scheme");
}

/// Stream sink: --out selects a file, otherwise stdout.
struct OutputTarget {
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file = std::make_unique<std::ofstream>(path);
            if (!*file) throw fspca::parse_error("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file ? *file : std::cout; }
    std::unique_ptr<std::ofstream> file;
};

std::string join_support(const fspca::SupportIndices& support) {
    std::string out;
    for (int i = 0; i < support.k(); ++i) {
        if (i) out += ',';
        out += std::to_string(support[i]);
    }
    return out;
}

ordered_json estimate_json(const fspca::SubspaceEstimate& est) {
    ordered_json v = ordered_json::array();
    for (int i = 0; i < est.k(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < est.m(); ++j) row.push_back(est.block()(i, j));
        v.push_back(std::move(row));
    }
    return ordered_json{{"support", est.support().indices()}, {"v", std::move(v)}};
}

struct SolveOutput {
    std::string algo;
    const fspca::SymMat* a = nullptr;
    const fspca::SubspaceEstimate* estimate = nullptr;
    double objective = 0.0;
    double nev = 0.0;
    int iterations = 0;
    std::string converged_by = "none";
    const std::vector<double>* trace = nullptr;
};

void write_solve_output(std::ostream& out, const SolveOutput& res, const std::string& format) {
    const fspca::SubspaceEstimate& est = *res.estimate;
    if (format == "json") {
        ordered_json doc;
        doc["algo"] = res.algo;
        doc["d"] = est.d();
        doc["m"] = est.m();
        doc["k"] = est.k();
        doc["support"] = est.support().indices();
        doc["objective"] = res.objective;
        doc["nev"] = res.nev;
        doc["iterations"] = res.iterations;
        doc["converged_by"] = res.converged_by;
        doc["v"] = estimate_json(est)["v"];
        if (res.trace) doc["objective_trace"] = *res.trace;
        out << doc.dump(2) << '\n';
        return;
    }
    if (format == "csv") {
        out << "# algo," << res.algo << '\n';
        out << "# support," << join_support(est.support()) << '\n';
        out << "# objective," << fspca::format_double(res.objective) << '\n';
        out << "# nev," << fspca::format_double(res.nev) << '\n';
        out << "# iterations," << res.iterations << '\n';
        out << "# converged_by," << res.converged_by << '\n';
        fspca::write_matrix_csv(out, est.block());
        return;
    }
    out << "algo:         " << res.algo << '\n';
    out << "d, m, k:      " << est.d() << ", " << est.m() << ", " << est.k() << '\n';
    out << "support:      " << join_support(est.support()) << '\n';
    out << "objective:    " << fspca::format_double(res.objective) << '\n';
    out << "nev:          " << fspca::format_double(res.nev) << '\n';
    out << "iterations:   " << res.iterations << '\n';
    out << "converged_by: " << res.converged_by << '\n';
    out << "V (" << est.k() << " x " << est.m() << "):\n";
    fspca::write_matrix_csv(out, est.block());
}

int default_jobs() {
    if (const char* env = std::getenv("FSPCA_JOBS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

struct Cli {
    CLI::App app{"Row-sparse principal subspace estimation"};

    // solve / trace
    InputSource solve_input, oracle_input, trace_input;
    std::string algo = "go";
    int m = 1, k = 1;
    double eps = 0.1;
    std::string init = "lowrank";
    int restarts = 1;
    int max_iter = 100;
    std::string out_path, format = "pretty";

    // oracle
    std::uint64_t cap = 200000;
    bool cap_override = false;

    // campaign
    std::string camp_scheme;
    int trials = 100;
    std::string solver = "go";
    std::string json_path;
    bool no_oracle = false;
    int jobs = default_jobs();
    InputSource camp_source;

    // generate
    InputSource gen_source;

    int run(int argc, char** argv);
};

int cmd_solve(Cli& c, const InputSource& input, bool force_ipu, bool trace_csv) {
    const fspca::SymMat a = load_covariance(input);
    const std::string algo = force_ipu ? "ipu" : c.algo;

    fspca::SolverConfig cfg;
    cfg.m = c.m;
    cfg.k = c.k;
    cfg.ridge_eps = c.eps;
    cfg.max_iter = c.max_iter;
    cfg.seed = input.seed;
    cfg.validate(a.dim());

    SolveOutput res;
    res.algo = algo;
    res.a = &a;

    std::optional<fspca::SubspaceEstimate> estimate;
    std::optional<fspca::SolveReport> report;
    if (algo == "go") {
        estimate = fspca::go(a, c.m, c.k);
    } else if (algo == "go-lowrank") {
        estimate = fspca::go_lowrank_init(a, c.m, c.k);
    } else if (algo == "ipu") {
        if (c.init == "lowrank") {
            report = fspca::ipu_from_lowrank(a, cfg);
        } else if (c.init == "random") {
            fspca::Rng rng(input.seed ^ 0x9e3779b97f4a7c15ULL);
            for (int r = 0; r < c.restarts; ++r) {
                fspca::SolveReport candidate =
                    fspca::ipu(a, cfg, fspca::random_subspace_init(a.dim(), c.m, c.k, rng));
                if (!report ||
                    candidate.objective_trace.back() > report->objective_trace.back())
                    report = std::move(candidate);
            }
        } else {
            throw fspca::input_error("--init must be 'random' or 'lowrank'");
        }
        estimate = report->estimate;
        res.iterations = report->iterations;
        res.converged_by = fspca::to_string(report->converged_by);
        res.trace = &report->objective_trace;
    } else {
        throw fspca::input_error("--algo must be go, ipu, or go-lowrank");
    }

    res.estimate = &*estimate;
    res.objective = fspca::objective_value(a, *estimate);
    res.nev = fspca::normalized_explained_variance(a, *estimate);

    OutputTarget target(c.out_path);
    if (trace_csv) {
        if (!report) throw fspca::input_error("trace requires the iterative solver");
        fspca::write_trace_csv(target.stream(), *report);
    } else {
        write_solve_output(target.stream(), res, c.format);
    }
    return 0;
}

int cmd_oracle(Cli& c) {
    const fspca::SymMat a = load_covariance(c.oracle_input);
    const std::uint64_t cap = c.cap_override ? ~std::uint64_t{0} >> 1 : c.cap;
    const fspca::OracleResult result = fspca::brute_force(a, c.m, c.k, cap);

    OutputTarget target(c.out_path);
    std::ostream& out = target.stream();
    if (c.format == "json") {
        ordered_json doc;
        doc["support"] = result.optimal_support.indices();
        doc["objective"] = result.optimal_objective;
        doc["supports_examined"] = result.num_supports_examined;
        ordered_json ties = ordered_json::array();
        for (const auto& tie : result.ties) ties.push_back(tie.indices());
        doc["ties"] = std::move(ties);
        out << doc.dump(2) << '\n';
    } else if (c.format == "csv") {
        out << "# support," << join_support(result.optimal_support) << '\n';
        out << "# objective," << fspca::format_double(result.optimal_objective) << '\n';
        out << "# supports_examined," << result.num_supports_examined << '\n';
        for (const auto& tie : result.ties) out << "tie," << join_support(tie) << '\n';
    } else {
        out << "support:           " << join_support(result.optimal_support) << '\n';
        out << "objective:         " << fspca::format_double(result.optimal_objective) << '\n';
        out << "supports_examined: " << result.num_supports_examined << '\n';
        out << "ties:              " << result.ties.size() << '\n';
        for (const auto& tie : result.ties) out << "  " << join_support(tie) << '\n';
    }
    return 0;
}

int cmd_campaign(Cli& c) {
    fspca::CampaignSpec spec;
    c.camp_source.scheme = c.camp_scheme;
    spec.scheme = scheme_from_source(c.camp_source);
    spec.m = c.m;
    spec.k = c.k;
    spec.trials = c.trials;
    spec.seed_base = c.camp_source.seed;
    spec.with_oracle = !c.no_oracle;
    spec.oracle_cap = c.cap;
    spec.jobs = c.jobs;
    spec.solver_template.ridge_eps = c.eps;
    spec.solver_template.max_iter = c.max_iter;

    if (c.solver == "go") spec.solver = fspca::SolverKind::go;
    else if (c.solver == "go-lowrank") spec.solver = fspca::SolverKind::go_lowrank;
    else if (c.solver == "ipu") spec.solver = fspca::SolverKind::ipu;
    else throw fspca::input_error("--solver must be go, ipu, or go-lowrank");

    if (c.init == "lowrank") spec.init.kind = fspca::Initializer::Kind::lowrank;
    else if (c.init == "random") spec.init.kind = fspca::Initializer::Kind::random_subspace;
    else throw fspca::input_error("--init must be 'random' or 'lowrank'");
    spec.init.restarts = c.restarts;

    const fspca::TrialTable table = fspca::run_campaign(spec);

    if (!c.out_path.empty()) {
        std::ofstream out(c.out_path);
        if (!out) throw fspca::parse_error("cannot write '" + c.out_path + "'");
        fspca::write_trial_table_csv(out, table, spec.with_oracle);
    }
    if (!c.json_path.empty()) {
        std::ofstream out(c.json_path);
        if (!out) throw fspca::parse_error("cannot write '" + c.json_path + "'");
        out << fspca::trial_table_json(spec, table).dump(2) << '\n';
    }

    char line[256];
    std::snprintf(line, sizeof(line), "IR %.4f(%.4f) | RE %.6f(%.6f) | HF %.4f",
                  table.ir.mean, table.ir.std_err, table.re.mean, table.re.std_err,
                  table.hf.mean);
    std::cout << line << '\n';
    if (table.failures > 0) std::cout << "failed trials: " << table.failures << '\n';
    return 0;
}

int cmd_generate(Cli& c) {
    const fspca::SymMat a = fspca::make_covariance(scheme_from_source(c.gen_source));
    OutputTarget target(c.out_path);
    fspca::write_matrix_csv(target.stream(), a.mat());
    return 0;
}

int Cli::run(int argc, char** argv) {
    app.require_subcommand(1);

    const auto formats = CLI::IsMember({"pretty", "json", "csv"});
    const auto algos = CLI::IsMember({"go", "ipu", "go-lowrank"});
    const auto inits = CLI::IsMember({"random", "lowrank"});

    auto* solve = app.add_subcommand("solve", "Estimate a row-sparse principal subspace");
    add_input_flags(solve, solve_input);
    solve->add_option("--algo", algo, "go | ipu | go-lowrank")->check(algos);
    solve->add_option("--m", m, "Subspace dimension")->required();
    solve->add_option("--k", k, "Row sparsity (nonzero rows)")->required();
    solve->add_option("--eps", eps, "Ridge added to the working matrix (default 0.1)");
    solve->add_option("--init", init, "ipu start: random | lowrank")->check(inits);
    solve->add_option("--restarts", restarts, "Random starts to try (keep the best)");
    solve->add_option("--max-iter", max_iter, "Iteration cap");
    solve->add_option("--out", out_path, "Write the result here instead of stdout");
    solve->add_option("--format", format, "pretty | json | csv")->check(formats);

    auto* oracle = app.add_subcommand("oracle", "Exhaustive search over all k-subsets");
    add_input_flags(oracle, oracle_input);
    oracle->add_option("--m", m, "Subspace dimension")->required();
    oracle->add_option("--k", k, "Row sparsity")->required();
    oracle->add_option("--cap", cap, "Refuse when C(d,k) exceeds this (default 200000)");
    oracle->add_flag("--force", cap_override, "Search regardless of C(d,k)");
    oracle->add_option("--out", out_path, "Write the result here instead of stdout");
    oracle->add_option("--format", format, "pretty | json | csv")->check(formats);

    auto* campaign = app.add_subcommand("campaign", "Seeded multi-trial benchmark");
    campaign->add_option("--scheme", camp_scheme, "A..F or zipf")->required();
    campaign->add_option("--d", camp_source.d, "Dimension (default 20)");
    campaign->add_option("--n", camp_source.n, "Sample count for schemes E/F");
    campaign->add_option("--zipf-c", camp_source.zipf_c, "Zipf scale c");
    campaign->add_option("--zipf-t", camp_source.zipf_t, "Zipf decay t");
    campaign->add_option("--m", m, "Subspace dimension")->required();
    campaign->add_option("--k", k, "Row sparsity")->required();
    campaign->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
    campaign->add_option("--solver", solver, "go | ipu | go-lowrank")->check(algos);
    campaign->add_option("--init", init, "ipu start: random | lowrank")->check(inits);
    campaign->add_option("--restarts", restarts, "Random starts per trial");
    campaign->add_option("--seed", camp_source.seed, "Base seed; trial i uses seed+i");
    campaign->add_option("--eps", eps, "Ridge for the iterative solver");
    campaign->add_option("--max-iter", max_iter, "Iteration cap");
    campaign->add_flag("--no-oracle", no_oracle, "Skip the exhaustive reference");
    campaign->add_option("--cap", cap, "Exhaustive-search cap");
    campaign->add_option("--jobs", jobs, "Worker threads (or FSPCA_JOBS)");
    campaign->add_option("--out", out_path, "Trial table CSV path");
    campaign->add_option("--json", json_path, "Trial table JSON path");

    auto* trace = app.add_subcommand("trace", "Run the iterative solver, export the objective per step");
    add_input_flags(trace, trace_input);
    trace->add_option("--m", m, "Subspace dimension")->required();
    trace->add_option("--k", k, "Row sparsity")->required();
    trace->add_option("--eps", eps, "Ridge added to the working matrix");
    trace->add_option("--init", init, "random | lowrank")->check(inits);
    trace->add_option("--restarts", restarts, "Random starts to try");
    trace->add_option("--max-iter", max_iter, "Iteration cap");
    trace->add_option("--out", out_path, "Trace CSV path (default stdout)");

    auto* generate = app.add_subcommand("generate", "Write a synthetic covariance as CSV");
    generate->add_option("--scheme", gen_source.scheme, "A..F or zipf")->required();
    generate->add_option("--d", gen_source.d, "Dimension")->required();
    generate->add_option("--n", gen_source.n, "Sample count for schemes E/F");
    generate->add_option("--zipf-c", gen_source.zipf_c, "Zipf scale c");
    generate->add_option("--zipf-t", gen_source.zipf_t, "Zipf decay t");
    generate->add_option("--seed", gen_source.seed, "Seed");
    generate->add_option("--out", out_path, "Covariance CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(*this, solve_input, false, false);
        if (oracle->parsed()) return cmd_oracle(*this);
        if (campaign->parsed()) return cmd_campaign(*this);
        if (trace->parsed()) return cmd_solve(*this, trace_input, true, true);
        if (generate->parsed()) return cmd_generate(*this);
    } catch (const fspca::oracle_cap_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 5;
    } catch (const fspca::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const fspca::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    Cli cli;
    return cli.run(argc, argv);
}
