#include "stormspar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace stormspar {

double default_gamma(Eigen::Index n, Eigen::Index s, Eigen::Index m) {
    if (n < 1 || s < 1 || m < 1) {
        throw std::invalid_argument("default_gamma: n, s, m must be positive");
    }
    const double ratio = static_cast<double>(s) / static_cast<double>(m);
    return std::min(ratio * std::log(static_cast<double>(n) / 0.001), 0.6);
}

Eigen::Index default_sample_size(Eigen::Index n, Eigen::Index s, double factor) {
    if (n < 1 || s < 1) {
        throw std::invalid_argument("default_sample_size: n and s must be positive");
    }
    if (factor <= 0.0) {
        throw std::invalid_argument("default_sample_size: factor must be positive");
    }
    const double unit = static_cast<double>(s) *
                        (std::log(static_cast<double>(n)) + std::log(100.0));
    return static_cast<Eigen::Index>(std::floor(factor * unit));
}

RowSample subsample_rows(const Matrix& A, const Vector& y, double gamma, SeededRng& rng) {
    if (A.rows() != y.size()) {
        throw std::invalid_argument("subsample_rows: dimension mismatch between A and y");
    }
    if (gamma <= 0.0 || gamma > 1.0) {
        throw std::invalid_argument("subsample_rows: gamma must be in (0, 1]");
    }
    const Eigen::Index m = A.rows();
    const auto count =
        static_cast<Eigen::Index>(std::floor(gamma * static_cast<double>(m)));
    if (count < 1) {
        throw std::invalid_argument("subsample_rows: floor(gamma * m) must be at least 1");
    }
    // Partial Fisher-Yates; the first `count` slots are the sample, in draw
    // order.
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(m));
    std::iota(pool.begin(), pool.end(), Eigen::Index{0});
    for (Eigen::Index k = 0; k < count; ++k) {
        const auto offset = static_cast<Eigen::Index>(
            rng.uniform_below(static_cast<std::uint64_t>(m - k)));
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(k + offset)]);
    }
    pool.resize(static_cast<std::size_t>(count));

    RowSample sample;
    sample.matrix = A(pool, Eigen::all);
    sample.rhs = y(pool);
    sample.indices = std::move(pool);
    return sample;
}

SolveResult stormspar_solve(const Matrix& A, const Vector& y, Eigen::Index s,
                            const StormSparConfig& config,
                            std::optional<Vector> initial_guess) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (y.size() != m) {
        throw std::invalid_argument("stormspar_solve: dimension mismatch between A and y");
    }
    if (!y.allFinite()) {
        throw std::invalid_argument("stormspar_solve: measurements must be finite");
    }
    if (s < 1 || s > n) {
        throw std::invalid_argument("stormspar_solve: need 1 <= s <= n");
    }
    if (config.gamma <= 0.0 || config.gamma > 1.0) {
        throw std::invalid_argument("stormspar_solve: gamma must be in (0, 1]");
    }
    if (config.delta <= 0.0 || config.max_outer_iters < 1) {
        throw std::invalid_argument("stormspar_solve: invalid config");
    }
    const auto subsample_count =
        static_cast<Eigen::Index>(std::floor(config.gamma * static_cast<double>(m)));
    if (s > subsample_count) {
        throw std::invalid_argument(
            "stormspar_solve: sparsity exceeds floor(gamma * m) subsampled rows");
    }

    SeededRng rng = config.seed;  // the solve owns a copy of the stream
    Vector x;
    if (initial_guess.has_value()) {
        if (initial_guess->size() != n) {
            throw std::invalid_argument("stormspar_solve: initial guess has wrong length");
        }
        x = std::move(*initial_guess);
    } else {
        x.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            x[i] = rng.normal();
        }
    }

    SolveResult result;
    for (int iteration = 1; iteration <= config.max_outer_iters; ++iteration) {
        const RowSample sample = subsample_rows(A, y, config.gamma, rng);
        const Vector phases = sign_vector(sample.matrix * x);
        const Vector rhs = hadamard(phases, sample.rhs);
        HtpResult inner = htp_solve(sample.matrix, rhs, s, config.htp);

        const double step_norm = (inner.solution - x).norm();
        x = std::move(inner.solution);
        result.step_norm_trace.push_back(step_norm);
        result.objective_trace.push_back(objective(A, y, x));
        result.outer_iters = iteration;
        if (step_norm <= config.delta) {
            result.termination = Termination::converged;
            break;
        }
    }
    result.estimate = refit(A, y, x, s);
    return result;
}

Vector refit(const Matrix& A, const Vector& y, const Vector& x, Eigen::Index s) {
    const SupportSet support = top_s_support(x, s);
    const Vector phases = sign_vector(A * x);
    return restricted_least_squares(A, hadamard(phases, y), support);
}

double objective(const Matrix& A, const Vector& y, const Vector& x) {
    if (A.rows() != y.size() || A.cols() != x.size()) {
        throw std::invalid_argument("objective: dimension mismatch");
    }
    return 0.5 * (y - (A * x).cwiseAbs()).squaredNorm();
}

}  // namespace stormspar
