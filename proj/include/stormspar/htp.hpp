#pragma once

#include "stormspar/linalg.hpp"

namespace stormspar {

struct HtpConfig {
    // Gradient step size on the rescaled system (A, b) / sqrt(m). The
    // rescaling gives the columns unit expected norm under the Gaussian
    // model, where mu = 1 is the stable default; it cancels in the
    // least-squares step, so the minimizer is unchanged.
    double step_size = 1.0;
    int max_inner_iters = 100;
    // Stop once the selected support repeats. The repeated support makes the
    // least-squares iterate an exact fixed point.
    bool support_stall_stop = true;
    // Per-iteration step ||g_S||^2 / ||A g_S||^2 with g restricted to the
    // previous support, instead of the fixed step. Off by default.
    bool adaptive_step = false;
};

struct HtpResult {
    Vector solution;  // length n, nonzeros only inside `support`
    SupportSet support;
    int inner_iters = 0;
    bool converged = false;
    std::vector<double> residual_trace;  // ||A x^k - b|| after each LS solve
};

// Hard Thresholding Pursuit for min ||A x - b|| s.t. ||x||_0 <= s, from
// x^0 = 0: gradient step, top-s support selection, exact least squares on
// the selected support. The initial comparison support is the tie-broken
// top-s of the zero vector, so a zero right-hand side converges in one
// iteration.
HtpResult htp_solve(const Matrix& A, const Vector& b, Eigen::Index s, const HtpConfig& config = {});

}  // namespace stormspar
