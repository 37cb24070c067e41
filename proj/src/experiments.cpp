#include "stormspar/experiments.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace stormspar {

namespace {

struct TrialTask {
    Eigen::Index n = 0;
    Eigen::Index s = 0;
    Eigen::Index m = 0;
    double factor = 0.0;
    double sigma = 0.0;
    int trial_index = 0;
    std::uint64_t seed = 0;
};

std::vector<TrialTask> expand_grid(const ExperimentSpec& spec) {
    if (spec.trials < 1) {
        throw std::invalid_argument("run_experiment: trials must be positive");
    }
    if (spec.n_values.empty() || spec.s_values.empty() || spec.sigma_values.empty()) {
        throw std::invalid_argument("run_experiment: empty parameter grid");
    }
    const bool explicit_m = spec.m_rule == MRule::explicit_list;
    if (explicit_m ? spec.m_values.empty() : spec.sample_factors.empty()) {
        throw std::invalid_argument("run_experiment: empty sample-size grid");
    }
    std::vector<TrialTask> tasks;
    for (const Eigen::Index n : spec.n_values) {
        for (const Eigen::Index s : spec.s_values) {
            const std::size_t m_points =
                explicit_m ? spec.m_values.size() : spec.sample_factors.size();
            for (std::size_t mi = 0; mi < m_points; ++mi) {
                const double factor = explicit_m ? 0.0 : spec.sample_factors[mi];
                const Eigen::Index m =
                    explicit_m ? spec.m_values[mi] : default_sample_size(n, s, factor);
                for (const double sigma : spec.sigma_values) {
                    for (int t = 0; t < spec.trials; ++t) {
                        tasks.push_back({n, s, m, factor, sigma, t,
                                         trial_seed(spec.base_seed, n, s, m, sigma, t)});
                    }
                }
            }
        }
    }
    return tasks;
}

TrialRecord run_trial(const TrialTask& task, const ExperimentSpec& spec) {
    TrialRecord record;
    record.n = task.n;
    record.s = task.s;
    record.m = task.m;
    record.factor = task.factor;
    record.sigma = task.sigma;
    record.trial_index = task.trial_index;
    record.seed = task.seed;

    const double gamma =
        spec.gamma > 0.0 ? spec.gamma : default_gamma(task.n, task.s, task.m);
    const auto subsample_count =
        static_cast<Eigen::Index>(std::floor(gamma * static_cast<double>(task.m)));
    if (task.s > task.n || task.s > subsample_count) {
        record.termination = TrialTermination::skipped;
        record.rel_error = std::numeric_limits<double>::quiet_NaN();
        record.snr_db = std::numeric_limits<double>::quiet_NaN();
        return record;
    }

    const auto start = std::chrono::steady_clock::now();
    SeededRng truth_rng(task.seed, 0);
    SeededRng ensemble_rng(task.seed, 1);
    const GroundTruth truth = generate_ground_truth(task.n, task.s, truth_rng);
    const Ensemble ensemble = generate_ensemble(truth, task.m, task.sigma, ensemble_rng);

    StormSparConfig config;
    config.gamma = gamma;
    config.delta = spec.delta;
    config.max_outer_iters = spec.max_outer_iters;
    config.htp = spec.htp;
    config.seed = SeededRng(task.seed, 2);
    const SolveResult solution =
        stormspar_solve(ensemble.matrix, ensemble.measurements, task.s, config);

    record.success = is_success(solution.estimate, truth, spec.success_tol);
    record.rel_error = relative_error(solution.estimate, truth);
    record.snr_db = measurement_snr_db(ensemble);
    record.outer_iters = solution.outer_iters;
    record.termination = solution.termination == Termination::converged
                             ? TrialTermination::converged
                             : TrialTermination::max_iters;
    record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, Eigen::Index n, Eigen::Index s,
                         Eigen::Index m, double sigma, int trial_index) {
    std::uint64_t h = base_seed;
    h = mix64(h ^ static_cast<std::uint64_t>(n));
    h = mix64(h ^ static_cast<std::uint64_t>(s));
    h = mix64(h ^ static_cast<std::uint64_t>(m));
    h = mix64(h ^ std::bit_cast<std::uint64_t>(sigma));
    h = mix64(h ^ static_cast<std::uint64_t>(trial_index));
    return h;
}

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, int worker_count) {
    if (worker_count < 1) {
        throw std::invalid_argument("run_experiment: worker_count must be positive");
    }
    const std::vector<TrialTask> tasks = expand_grid(spec);
    std::vector<TrialRecord> records(tasks.size());
    if (worker_count == 1) {
        // Serial reference path; must stay result-identical to the pool below.
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            records[i] = run_trial(tasks[i], spec);
        }
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(worker_count)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
            records[static_cast<std::size_t>(i)] =
                run_trial(tasks[static_cast<std::size_t>(i)], spec);
        }
    }
    return records;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records) {
    struct Accumulator {
        AggregateRow row;
        int successes = 0;
        double rel_error_sum = 0.0;
        double snr_sum = 0.0;
        double iter_sum_success = 0.0;
        double iter_sum_all = 0.0;
    };
    std::vector<Accumulator> groups;
    for (const TrialRecord& record : records) {
        if (record.termination == TrialTermination::skipped) {
            continue;
        }
        Accumulator* acc = nullptr;
        for (Accumulator& candidate : groups) {
            if (candidate.row.n == record.n && candidate.row.s == record.s &&
                candidate.row.m == record.m && candidate.row.sigma == record.sigma) {
                acc = &candidate;
                break;
            }
        }
        if (acc == nullptr) {
            groups.emplace_back();
            acc = &groups.back();
            acc->row.n = record.n;
            acc->row.s = record.s;
            acc->row.m = record.m;
            acc->row.factor = record.factor;
            acc->row.sigma = record.sigma;
        }
        acc->row.trial_count += 1;
        acc->successes += record.success ? 1 : 0;
        acc->rel_error_sum += record.rel_error;
        acc->snr_sum += record.snr_db;
        acc->iter_sum_all += record.outer_iters;
        if (record.success) {
            acc->iter_sum_success += record.outer_iters;
        }
    }

    std::vector<AggregateRow> rows;
    rows.reserve(groups.size());
    for (Accumulator& acc : groups) {
        AggregateRow row = acc.row;
        row.success_rate = static_cast<double>(acc.successes) / row.trial_count;
        row.mean_rel_error = acc.rel_error_sum / row.trial_count;
        row.mean_snr_db = acc.snr_sum / row.trial_count;
        row.mean_outer_iters = acc.successes > 0
                                   ? acc.iter_sum_success / acc.successes
                                   : acc.iter_sum_all / row.trial_count;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace stormspar
