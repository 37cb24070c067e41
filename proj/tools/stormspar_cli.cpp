// Command-line front end: single solves, Monte-Carlo sweeps, and an
// HTP throughput benchmark comparing the serial and OpenMP trial paths.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stormspar/experiments.hpp"
#include "stormspar/io.hpp"

namespace {

using namespace stormspar;

std::uint64_t env_or_default_seed() {
    if (const char* env = std::getenv("STORMSPAR_SEED")) {
        char* end = nullptr;
        const std::uint64_t value = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') {
            return value;
        }
        throw std::invalid_argument("STORMSPAR_SEED is not an unsigned integer");
    }
    return 1;
}

ExperimentSpec preset(ExperimentKind kind) {
    ExperimentSpec spec;
    spec.kind = kind;
    spec.trials = 50;
    spec.base_seed = 1;
    spec.sample_factors = {2.5};
    spec.sigma_values = {0.01};
    switch (kind) {
        case ExperimentKind::phase_transition:
            spec.n_values = {200};
            spec.s_values = {10};
            spec.sample_factors = {1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0};
            break;
        case ExperimentKind::noise_sweep:
            spec.n_values = {300};
            spec.s_values = {10};
            // sqrt(s) * 10^(-snr/20) for target SNRs of 20..50 dB, then the
            // noise-free case.
            spec.sigma_values = {0.31622776601683794, 0.1, 0.031622776601683791, 0.01, 0.0};
            break;
        case ExperimentKind::dimension_table:
            spec.n_values = {100, 200, 500};
            spec.s_values = {10};
            break;
        case ExperimentKind::sparsity_table:
            spec.n_values = {2000};
            spec.s_values = {5, 10};
            break;
        case ExperimentKind::single:
            spec.n_values = {100};
            spec.s_values = {10};
            break;
    }
    return spec;
}

struct SweepCli {
    std::string config_path;
    std::vector<Eigen::Index> n_values;
    std::vector<Eigen::Index> s_values;
    std::vector<Eigen::Index> m_values;
    std::vector<double> factors;
    std::vector<double> sigmas;
    int trials = 0;
    std::uint64_t seed = 0;
    double tol = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    int max_outer = 0;
    int workers = omp_get_max_threads();
    std::string output;
    std::string format = "csv";

    CLI::Option* config_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* s_opt = nullptr;
    CLI::Option* m_opt = nullptr;
    CLI::Option* factors_opt = nullptr;
    CLI::Option* sigma_opt = nullptr;
    CLI::Option* trials_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* tol_opt = nullptr;
    CLI::Option* gamma_opt = nullptr;
    CLI::Option* delta_opt = nullptr;
    CLI::Option* max_outer_opt = nullptr;
};

void add_sweep_options(CLI::App* cmd, SweepCli& cli, const std::string& default_output) {
    cli.output = default_output;
    cli.config_opt = cmd->add_option("--config", cli.config_path,
                                     "JSON config mirroring the experiment spec (flags override)");
    cli.n_opt = cmd->add_option("--n", cli.n_values, "signal dimension grid");
    cli.s_opt = cmd->add_option("--s", cli.s_values, "sparsity grid");
    cli.m_opt = cmd->add_option("--m", cli.m_values, "explicit sample-size grid");
    cli.factors_opt = cmd->add_option("--factors", cli.factors, "m/K sample-factor grid");
    cli.sigma_opt = cmd->add_option("--sigma", cli.sigmas, "noise level grid");
    cli.trials_opt = cmd->add_option("--trials", cli.trials, "trials per grid point");
    cli.seed_opt = cmd->add_option("--seed", cli.seed, "base seed (STORMSPAR_SEED fallback)");
    cli.tol_opt = cmd->add_option("--tol", cli.tol, "success tolerance on the relative error");
    cli.gamma_opt = cmd->add_option("--gamma", cli.gamma, "row subsample fraction (0 = default rule)");
    cli.delta_opt = cmd->add_option("--delta", cli.delta, "outer stopping tolerance");
    cli.max_outer_opt = cmd->add_option("--max-outer", cli.max_outer, "outer iteration cap");
    cmd->add_option("--workers", cli.workers, "parallel trial workers")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--output", cli.output, "output path stem");
    cmd->add_option("--format", cli.format, "records/aggregate file format")
        ->check(CLI::IsMember({"csv", "json"}));
}

ExperimentSpec resolve_spec(const SweepCli& cli, ExperimentKind kind) {
    ExperimentSpec spec = preset(kind);
    bool seed_from_config = false;
    if (cli.config_opt->count() > 0) {
        std::ifstream in(cli.config_path);
        if (!in) {
            throw std::runtime_error("cannot read config file: " + cli.config_path);
        }
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::parse_error& error) {
            throw std::runtime_error("cannot parse config file " + cli.config_path + ": " +
                                     error.what());
        }
        apply_spec_json(spec, doc);
        seed_from_config = doc.contains("base_seed");
    }
    if (cli.m_opt->count() > 0 && cli.factors_opt->count() > 0) {
        throw std::invalid_argument("give either --m or --factors, not both");
    }
    if (cli.n_opt->count() > 0) spec.n_values = cli.n_values;
    if (cli.s_opt->count() > 0) spec.s_values = cli.s_values;
    if (cli.m_opt->count() > 0) {
        spec.m_rule = MRule::explicit_list;
        spec.m_values = cli.m_values;
    }
    if (cli.factors_opt->count() > 0) {
        spec.m_rule = MRule::factor_times_k;
        spec.sample_factors = cli.factors;
    }
    if (cli.sigma_opt->count() > 0) spec.sigma_values = cli.sigmas;
    if (cli.trials_opt->count() > 0) spec.trials = cli.trials;
    if (cli.tol_opt->count() > 0) spec.success_tol = cli.tol;
    if (cli.gamma_opt->count() > 0) spec.gamma = cli.gamma;
    if (cli.delta_opt->count() > 0) spec.delta = cli.delta;
    if (cli.max_outer_opt->count() > 0) spec.max_outer_iters = cli.max_outer;
    if (cli.seed_opt->count() > 0) {
        spec.base_seed = cli.seed;
    } else if (!seed_from_config) {
        spec.base_seed = env_or_default_seed();
    }
    return spec;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write output file: " + path);
    }
    return out;
}

void write_sweep_files(const ExperimentSpec& spec, const std::vector<TrialRecord>& records,
                       const std::vector<AggregateRow>& rows, const std::string& stem,
                       OutputFormat format) {
    const std::string ext = format == OutputFormat::csv ? ".csv" : ".json";
    const std::string records_path = stem + "_records" + ext;
    const std::string aggregate_path = stem + "_aggregate" + ext;
    {
        std::ofstream out = open_output(records_path);
        if (format == OutputFormat::csv) {
            write_records_csv(out, records);
        } else {
            out << records_to_json(records).dump(2) << '\n';
        }
    }
    {
        std::ofstream out = open_output(aggregate_path);
        if (format == OutputFormat::csv) {
            write_aggregates_csv(out, rows, spec.kind);
        } else {
            out << aggregates_to_json(rows).dump(2) << '\n';
        }
    }
    std::cout << "wrote " << records_path << '\n' << "wrote " << aggregate_path << '\n';

    // Plot-ready (x, y) series, one file per (n, s) curve.
    if (spec.kind == ExperimentKind::phase_transition ||
        spec.kind == ExperimentKind::noise_sweep) {
        const bool by_factor = spec.kind == ExperimentKind::phase_transition;
        std::map<std::pair<Eigen::Index, Eigen::Index>, std::vector<std::pair<double, double>>>
            curves;
        for (const AggregateRow& row : rows) {
            if (by_factor) {
                curves[{row.n, row.s}].emplace_back(row.factor, row.success_rate);
            } else if (std::isfinite(row.mean_snr_db)) {
                curves[{row.n, row.s}].emplace_back(row.mean_snr_db, row.mean_rel_error);
            }
        }
        for (auto& [key, points] : curves) {
            std::sort(points.begin(), points.end());
            std::ostringstream name;
            name << stem << "_curve_n" << key.first << "_s" << key.second << ".csv";
            std::ofstream out = open_output(name.str());
            write_series_csv(out, by_factor ? "factor" : "snr_db",
                             by_factor ? "success_rate" : "mean_rel_error", points);
            std::cout << "wrote " << name.str() << '\n';
        }
    }
}

int run_sweep(const SweepCli& cli, ExperimentKind kind) {
    const ExperimentSpec spec = resolve_spec(cli, kind);
    const std::vector<TrialRecord> records = run_experiment(spec, cli.workers);
    const std::vector<AggregateRow> rows = aggregate(records);
    write_aggregates_csv(std::cout, rows, spec.kind);
    write_sweep_files(spec, records, rows, cli.output, output_format_from_string(cli.format));
    return 0;
}

struct SolveCli {
    Eigen::Index n = 100;
    Eigen::Index s = 10;
    Eigen::Index m = 0;  // 0 = default_sample_size(n, s, 2.5)
    double sigma = 0.01;
    double gamma = 0.0;  // 0 = default_gamma(n, s, m)
    double delta = 0.01;
    double tol = 1e-2;
    double mu = 1.0;
    int max_outer = 5000;
    int max_inner = 100;
    bool adaptive = false;
    std::uint64_t seed = 0;
    std::string format = "text";
    CLI::Option* seed_opt = nullptr;
};

int run_solve(const SolveCli& cli) {
    if (cli.s > cli.n) {
        throw std::invalid_argument("sparsity exceeds dimension");
    }
    if (cli.n < 1 || cli.s < 1) {
        throw std::invalid_argument("n and s must be positive");
    }
    const std::uint64_t seed = cli.seed_opt->count() > 0 ? cli.seed : env_or_default_seed();
    const Eigen::Index m = cli.m > 0 ? cli.m : default_sample_size(cli.n, cli.s, 2.5);
    const double gamma = cli.gamma > 0.0 ? cli.gamma : default_gamma(cli.n, cli.s, m);

    SeededRng truth_rng(seed, 0);
    SeededRng ensemble_rng(seed, 1);
    const GroundTruth truth = generate_ground_truth(cli.n, cli.s, truth_rng);
    const Ensemble ensemble = generate_ensemble(truth, m, cli.sigma, ensemble_rng);

    StormSparConfig config;
    config.gamma = gamma;
    config.delta = cli.delta;
    config.max_outer_iters = cli.max_outer;
    config.htp.step_size = cli.mu;
    config.htp.max_inner_iters = cli.max_inner;
    config.htp.adaptive_step = cli.adaptive;
    config.seed = SeededRng(seed, 2);

    const auto start = std::chrono::steady_clock::now();
    const SolveResult result =
        stormspar_solve(ensemble.matrix, ensemble.measurements, cli.s, config);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double rel_error = relative_error(result.estimate, truth);
    const bool success = is_success(result.estimate, truth, cli.tol);
    const double final_objective =
        objective(ensemble.matrix, ensemble.measurements, result.estimate);
    const char* termination =
        result.termination == Termination::converged ? "converged" : "max_iters";

    if (cli.format == "json") {
        nlohmann::json report{{"n", cli.n},
                              {"s", cli.s},
                              {"m", m},
                              {"sigma", cli.sigma},
                              {"gamma", gamma},
                              {"delta", cli.delta},
                              {"seed", seed},
                              {"success_tol", cli.tol},
                              {"termination", termination},
                              {"outer_iters", result.outer_iters},
                              {"rel_error", rel_error},
                              {"objective", final_objective},
                              {"success", success},
                              {"step_norm_trace", result.step_norm_trace},
                              {"objective_trace", result.objective_trace},
                              {"wall_time_s", elapsed}};
        std::cout << report.dump(2) << '\n';
    } else {
        char line[128];
        std::cout << "stormspar solve\n";
        std::cout << "n: " << cli.n << "\ns: " << cli.s << "\nm: " << m << '\n';
        std::snprintf(line, sizeof(line), "sigma: %g\ngamma: %.6f\ndelta: %g\n", cli.sigma,
                      gamma, cli.delta);
        std::cout << line << "seed: " << seed << '\n';
        std::cout << "termination: " << termination << '\n';
        std::cout << "outer_iters: " << result.outer_iters << '\n';
        std::snprintf(line, sizeof(line), "rel_error: %.6e\nobjective: %.6e\n", rel_error,
                      final_objective);
        std::cout << line;
        std::snprintf(line, sizeof(line), "success: %s (tol %g)\n", success ? "true" : "false",
                      cli.tol);
        std::cout << line;
        std::snprintf(line, sizeof(line), "wall_time_s: %.6f\n", elapsed);
        std::cout << line << "step_norm_trace:\n";
        for (std::size_t i = 0; i < result.step_norm_trace.size(); ++i) {
            std::snprintf(line, sizeof(line), "  %zu %.6e\n", i + 1, result.step_norm_trace[i]);
            std::cout << line;
        }
    }
    return success ? 0 : 1;
}

struct BenchCli {
    Eigen::Index n = 1000;
    Eigen::Index s = 25;
    Eigen::Index m = 0;
    double sigma = 0.0;
    int count = 64;
    int workers = omp_get_max_threads();
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

// Batch of seeded compressed-sensing instances (signs known) pushed through
// htp_solve twice: once on the serial reference loop, once on the OpenMP
// pool. Results must match bitwise; the timing ratio is the speedup.
int run_htp_bench(const BenchCli& cli) {
    if (cli.count < 1) {
        throw std::invalid_argument("count must be positive");
    }
    const std::uint64_t seed = cli.seed_opt->count() > 0 ? cli.seed : env_or_default_seed();
    const Eigen::Index m = cli.m > 0 ? cli.m : default_sample_size(cli.n, cli.s, 2.5);
    if (cli.s > std::min(m, cli.n)) {
        throw std::invalid_argument("sparsity exceeds min(m, n)");
    }

    const auto solve_instance = [&](int index) {
        const std::uint64_t instance_seed = trial_seed(seed, cli.n, cli.s, m, cli.sigma, index);
        SeededRng truth_rng(instance_seed, 0);
        SeededRng data_rng(instance_seed, 1);
        const GroundTruth truth = generate_ground_truth(cli.n, cli.s, truth_rng);
        Matrix A(m, cli.n);
        for (Eigen::Index j = 0; j < cli.n; ++j) {
            for (Eigen::Index i = 0; i < m; ++i) {
                A(i, j) = data_rng.normal();
            }
        }
        Vector b = A * truth.signal;
        if (cli.sigma > 0.0) {
            for (Eigen::Index i = 0; i < m; ++i) {
                b[i] += cli.sigma * data_rng.normal();
            }
        }
        return htp_solve(A, b, cli.s, HtpConfig{});
    };

    std::vector<HtpResult> serial_results(static_cast<std::size_t>(cli.count));
    const auto serial_start = std::chrono::steady_clock::now();
    for (int i = 0; i < cli.count; ++i) {
        serial_results[static_cast<std::size_t>(i)] = solve_instance(i);
    }
    const double serial_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - serial_start).count();

    std::vector<HtpResult> parallel_results(static_cast<std::size_t>(cli.count));
    const auto parallel_start = std::chrono::steady_clock::now();
#pragma omp parallel for schedule(dynamic) num_threads(cli.workers)
    for (int i = 0; i < cli.count; ++i) {
        parallel_results[static_cast<std::size_t>(i)] = solve_instance(i);
    }
    const double parallel_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - parallel_start).count();

    bool identical = true;
    int converged = 0;
    double inner_iters = 0.0;
    for (int i = 0; i < cli.count; ++i) {
        const auto& lhs = serial_results[static_cast<std::size_t>(i)];
        const auto& rhs = parallel_results[static_cast<std::size_t>(i)];
        identical = identical && lhs.solution == rhs.solution &&
                    lhs.support == rhs.support && lhs.inner_iters == rhs.inner_iters;
        converged += lhs.converged ? 1 : 0;
        inner_iters += lhs.inner_iters;
    }

    char line[160];
    std::cout << "htp-bench n=" << cli.n << " s=" << cli.s << " m=" << m
              << " sigma=" << cli.sigma << " count=" << cli.count
              << " workers=" << cli.workers << '\n';
    std::snprintf(line, sizeof(line),
                  "serial:   %.3f s (%.1f solves/s), converged %d/%d, mean inner iters %.1f\n",
                  serial_seconds, cli.count / serial_seconds, converged, cli.count,
                  inner_iters / cli.count);
    std::cout << line;
    std::snprintf(line, sizeof(line), "parallel: %.3f s (%.1f solves/s)\n", parallel_seconds,
                  cli.count / parallel_seconds);
    std::cout << line;
    std::snprintf(line, sizeof(line), "speedup:  %.2fx\n", serial_seconds / parallel_seconds);
    std::cout << line;
    std::cout << "identical results: " << (identical ? "yes" : "no") << '\n';
    return identical ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse phase retrieval by stochastic alternating minimization"};
    app.require_subcommand(1);

    SolveCli solve_cli;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one synthetic instance");
    solve_cmd->add_option("--n", solve_cli.n, "signal dimension");
    solve_cmd->add_option("--s", solve_cli.s, "sparsity");
    solve_cmd->add_option("--m", solve_cli.m, "sample count (0 = 2.5x default size)");
    solve_cmd->add_option("--sigma", solve_cli.sigma, "noise level");
    solve_cmd->add_option("--gamma", solve_cli.gamma, "row subsample fraction (0 = default rule)");
    solve_cmd->add_option("--delta", solve_cli.delta, "outer stopping tolerance");
    solve_cmd->add_option("--tol", solve_cli.tol, "success tolerance");
    solve_cmd->add_option("--mu", solve_cli.mu, "HTP step size");
    solve_cmd->add_option("--max-outer", solve_cli.max_outer, "outer iteration cap");
    solve_cmd->add_option("--max-inner", solve_cli.max_inner, "HTP iteration cap");
    solve_cmd->add_flag("--adaptive-step", solve_cli.adaptive, "adaptive HTP step size");
    solve_cli.seed_opt =
        solve_cmd->add_option("--seed", solve_cli.seed, "seed (STORMSPAR_SEED fallback)");
    solve_cmd->add_option("--format", solve_cli.format, "report format")
        ->check(CLI::IsMember({"text", "json"}));

    SweepCli phase_cli;
    CLI::App* phase_cmd =
        app.add_subcommand("phase-transition", "success rate vs sample factor m/K");
    add_sweep_options(phase_cmd, phase_cli, "phase_transition");

    SweepCli noise_cli;
    CLI::App* noise_cmd =
        app.add_subcommand("noise-sweep", "reconstruction error vs measurement SNR");
    add_sweep_options(noise_cmd, noise_cli, "noise_sweep");

    SweepCli table_cli;
    std::string table_by = "dimension";
    CLI::App* table_cmd =
        app.add_subcommand("table", "success-rate tables over dimension or sparsity");
    table_cmd->add_option("--by", table_by, "varying parameter")
        ->check(CLI::IsMember({"dimension", "sparsity"}));
    add_sweep_options(table_cmd, table_cli, "table");

    BenchCli bench_cli;
    CLI::App* bench_cmd =
        app.add_subcommand("htp-bench", "HTP throughput, serial vs OpenMP pool");
    bench_cmd->add_option("--n", bench_cli.n, "signal dimension");
    bench_cmd->add_option("--s", bench_cli.s, "sparsity");
    bench_cmd->add_option("--m", bench_cli.m, "sample count (0 = 2.5x default size)");
    bench_cmd->add_option("--sigma", bench_cli.sigma, "noise level");
    bench_cmd->add_option("--count", bench_cli.count, "number of instances");
    bench_cmd->add_option("--workers", bench_cli.workers, "parallel workers")
        ->check(CLI::PositiveNumber);
    bench_cli.seed_opt =
        bench_cmd->add_option("--seed", bench_cli.seed, "seed (STORMSPAR_SEED fallback)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(solve_cmd)) {
            return run_solve(solve_cli);
        }
        if (app.got_subcommand(phase_cmd)) {
            return run_sweep(phase_cli, ExperimentKind::phase_transition);
        }
        if (app.got_subcommand(noise_cmd)) {
            return run_sweep(noise_cli, ExperimentKind::noise_sweep);
        }
        if (app.got_subcommand(table_cmd)) {
            return run_sweep(table_cli, table_by == "dimension"
                                            ? ExperimentKind::dimension_table
                                            : ExperimentKind::sparsity_table);
        }
        if (app.got_subcommand(bench_cmd)) {
            return run_htp_bench(bench_cli);
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 2;
    }
    return 2;
}
