#include "stormspar/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace stormspar {

GroundTruth generate_ground_truth(Eigen::Index n, Eigen::Index s, SeededRng& rng) {
    if (n < 1 || s < 1 || s > n) {
        throw std::invalid_argument("generate_ground_truth: need 1 <= s <= n");
    }
    // Uniform size-s subset via partial Fisher-Yates over {0, ..., n-1}.
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Eigen::Index{0});
    for (Eigen::Index k = 0; k < s; ++k) {
        const auto offset = static_cast<Eigen::Index>(
            rng.uniform_below(static_cast<std::uint64_t>(n - k)));
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(k + offset)]);
    }
    std::vector<Eigen::Index> support(pool.begin(), pool.begin() + s);
    std::sort(support.begin(), support.end());

    Vector signal = Vector::Zero(n);
    for (const Eigen::Index i : support) {
        double value = rng.normal();
        while (value == 0.0) {
            value = rng.normal();  // keeps the nonzero count at exactly s
        }
        signal[i] = value;
    }
    return GroundTruth{std::move(signal), SupportSet{std::move(support), s}, n, s};
}

Ensemble generate_ensemble(const GroundTruth& truth, Eigen::Index m, double sigma, SeededRng& rng) {
    if (m < 1) {
        throw std::invalid_argument("generate_ensemble: need m >= 1");
    }
    if (sigma < 0.0) {
        throw std::invalid_argument("generate_ensemble: sigma must be nonnegative");
    }
    Matrix A(m, truth.n);
    for (Eigen::Index j = 0; j < truth.n; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
            A(i, j) = rng.normal();
        }
    }
    Vector clean = (A * truth.signal).cwiseAbs();
    Vector measurements = clean;
    if (sigma > 0.0) {
        for (Eigen::Index i = 0; i < m; ++i) {
            measurements[i] += sigma * rng.normal();
        }
    }
    return Ensemble{std::move(A), std::move(clean), std::move(measurements), sigma, m};
}

double relative_error(const Vector& estimate, const GroundTruth& truth) {
    if (estimate.size() != truth.signal.size()) {
        throw std::invalid_argument("relative_error: length mismatch");
    }
    const double denom = truth.signal.norm();
    if (denom == 0.0) {
        throw std::invalid_argument("relative_error: ground truth has zero norm");
    }
    return std::min((estimate + truth.signal).norm(), (estimate - truth.signal).norm()) / denom;
}

bool is_success(const Vector& estimate, const GroundTruth& truth, double tol) {
    if (tol <= 0.0) {
        throw std::invalid_argument("is_success: tol must be positive");
    }
    if (truth.s < truth.n && top_s_support(estimate, truth.s) == truth.support) {
        return true;
    }
    return relative_error(estimate, truth) <= tol;
}

double measurement_snr_db(const Ensemble& ensemble) {
    const double signal_power = ensemble.clean_measurements.squaredNorm();
    const double noise_power =
        (ensemble.measurements - ensemble.clean_measurements).squaredNorm();
    if (noise_power == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(signal_power / noise_power);
}

}  // namespace stormspar
