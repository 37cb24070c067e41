#pragma once

#include <optional>
#include <vector>

#include "stormspar/htp.hpp"
#include "stormspar/model.hpp"

namespace stormspar {

struct StormSparConfig {
    double gamma = 0.5;        // row subsample fraction, in (0, 1]
    double delta = 0.01;       // stop once ||x_l - x_{l-1}||_2 <= delta
    int max_outer_iters = 5000;
    HtpConfig htp;
    SeededRng seed;            // stream owning the initialization and row draws
};

enum class Termination { converged, max_iters };

struct SolveResult {
    Vector estimate;  // refitted on the final support, at most s nonzeros
    int outer_iters = 0;
    Termination termination = Termination::max_iters;
    std::vector<double> step_norm_trace;  // ||x_l - x_{l-1}|| per outer iteration
    std::vector<double> objective_trace;  // full-data 0.5 ||y - |A x_l||^2, diagnostic
};

// min((s/m) ln(n / 0.001), 0.6), the default subsample fraction.
double default_gamma(Eigen::Index n, Eigen::Index s, Eigen::Index m);

// floor(factor * s * (ln n + ln 100)). factor = 1 gives the sample-size
// unit K; the experiment presets use factor = 2.5.
Eigen::Index default_sample_size(Eigen::Index n, Eigen::Index s, double factor);

struct RowSample {
    Matrix matrix;  // selected rows of A, in draw order
    Vector rhs;     // matching entries of y
    std::vector<Eigen::Index> indices;
};

// floor(gamma * m) rows drawn uniformly without replacement, fresh each
// call.
RowSample subsample_rows(const Matrix& A, const Vector& y, double gamma, SeededRng& rng);

// Stochastic alternating minimization for y ~ |A x| with ||x||_0 <= s.
// Each outer iteration resamples rows, estimates signs against the current
// iterate, and solves the resulting compressed-sensing subproblem with HTP;
// the returned estimate is refit on the final support against the full
// data. The initial guess defaults to an i.i.d. standard normal vector
// drawn from config.seed.
SolveResult stormspar_solve(const Matrix& A, const Vector& y, Eigen::Index s,
                            const StormSparConfig& config,
                            std::optional<Vector> initial_guess = std::nullopt);

// Freezes the top-s support of x, re-estimates signs from the full data,
// and solves one support-restricted least-squares problem on all rows.
Vector refit(const Matrix& A, const Vector& y, const Vector& x, Eigen::Index s);

// 0.5 * || y - |A x| ||_2^2.
double objective(const Matrix& A, const Vector& y, const Vector& x);

}  // namespace stormspar
