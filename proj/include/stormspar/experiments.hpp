#pragma once

#include <cstdint>
#include <vector>

#include "stormspar/solver.hpp"

namespace stormspar {

enum class ExperimentKind { phase_transition, noise_sweep, dimension_table, sparsity_table, single };
enum class MRule { explicit_list, factor_times_k };

// A sweep definition: the Cartesian product of the parameter grids, each
// point repeated `trials` times with per-trial seeds derived from base_seed.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::single;
    std::vector<Eigen::Index> n_values;
    std::vector<Eigen::Index> s_values;
    MRule m_rule = MRule::factor_times_k;
    std::vector<Eigen::Index> m_values;  // used when m_rule == explicit_list
    std::vector<double> sample_factors;  // used when m_rule == factor_times_k
    std::vector<double> sigma_values;
    int trials = 100;
    std::uint64_t base_seed = 0;
    double success_tol = 1e-2;

    // Solver knobs shared by every trial. gamma = 0 means "use
    // default_gamma(n, s, m) at each grid point".
    double gamma = 0.0;
    double delta = 0.01;
    int max_outer_iters = 5000;
    HtpConfig htp;
};

enum class TrialTermination { converged, max_iters, skipped };

struct TrialRecord {
    Eigen::Index n = 0;
    Eigen::Index s = 0;
    Eigen::Index m = 0;
    double factor = 0.0;  // m/K sample factor; 0 when m was given explicitly
    double sigma = 0.0;
    int trial_index = 0;
    std::uint64_t seed = 0;
    bool success = false;
    double rel_error = 0.0;
    double snr_db = 0.0;  // realized measurement SNR; +inf when noise-free
    int outer_iters = 0;
    double wall_time = 0.0;  // seconds; excluded from determinism guarantees
    TrialTermination termination = TrialTermination::skipped;
};

struct AggregateRow {
    Eigen::Index n = 0;
    Eigen::Index s = 0;
    Eigen::Index m = 0;
    double factor = 0.0;
    double sigma = 0.0;
    double success_rate = 0.0;     // successes / trial_count, exactly
    double mean_rel_error = 0.0;   // over all valid trials
    double mean_outer_iters = 0.0; // over successful trials (all valid ones if none succeeded)
    double mean_snr_db = 0.0;      // over all valid trials
    int trial_count = 0;           // valid (non-skipped) trials in the group
};

// Stated 64-bit mixing hash of the trial coordinates; makes trial results
// independent of worker count and execution order.
std::uint64_t trial_seed(std::uint64_t base_seed, Eigen::Index n, Eigen::Index s,
                         Eigen::Index m, double sigma, int trial_index);

// Runs the full grid x trials product. worker_count = 1 takes the serial
// reference path; worker_count > 1 runs the identical per-trial code on an
// OpenMP pool. Either way the record list is a pure function of the spec,
// wall_time fields aside. Infeasible grid points (s > floor(gamma m) or
// s > n) produce skipped records instead of failing the run.
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, int worker_count);

// Groups records by (n, s, m, sigma) in first-appearance order. Skipped
// trials never enter the denominators; groups with no valid trials are
// dropped (the skipped records still carry the flag).
std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records);

}  // namespace stormspar
