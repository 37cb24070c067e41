#include "stormspar/htp.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace stormspar {

HtpResult htp_solve(const Matrix& A, const Vector& b, Eigen::Index s, const HtpConfig& config) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (b.size() != m) {
        throw std::invalid_argument("htp_solve: dimension mismatch between A and b");
    }
    if (s < 1 || s > std::min(m, n)) {
        throw std::invalid_argument("htp_solve: need 1 <= s <= min(m, n)");
    }
    if (config.step_size <= 0.0 || config.max_inner_iters < 1) {
        throw std::invalid_argument("htp_solve: invalid config");
    }

    // Scaling (A, b) by 1/sqrt(m) turns the gradient A~^t (b~ - A~ x) into
    // A^t (b - A x) / m; no scaled copies are needed.
    const double scale = 1.0 / static_cast<double>(m);

    HtpResult result;
    result.solution = Vector::Zero(n);
    result.support = top_s_support(result.solution, s);

    for (int k = 1; k <= config.max_inner_iters; ++k) {
        const Vector residual = b - A * result.solution;
        if (k > 1) {
            result.residual_trace.push_back(residual.norm());
        }
        const Vector gradient = A.transpose() * residual;

        double step = config.step_size * scale;
        if (config.adaptive_step) {
            Vector restricted = Vector::Zero(n);
            for (const Eigen::Index i : result.support.indices) {
                restricted[i] = gradient[i];
            }
            const double numerator = restricted.squaredNorm();
            const double denominator = (A * restricted).squaredNorm();
            if (numerator > 0.0 && denominator > 0.0) {
                step = numerator / denominator;
            }
        }

        SupportSet selected = top_s_support(result.solution + step * gradient, s);
        result.solution = restricted_least_squares(A, b, selected);
        result.inner_iters = k;
        const bool stalled = config.support_stall_stop && selected == result.support;
        result.support = std::move(selected);
        if (stalled) {
            result.converged = true;
            break;
        }
    }
    result.residual_trace.push_back((b - A * result.solution).norm());
    return result;
}

}  // namespace stormspar
