#pragma once

#include "stormspar/linalg.hpp"
#include "stormspar/rng.hpp"

namespace stormspar {

// Hidden s-sparse signal together with its support.
struct GroundTruth {
    Vector signal;       // length n, exactly s nonzeros
    SupportSet support;  // ascending indices of the nonzeros
    Eigen::Index n = 0;
    Eigen::Index s = 0;
};

// One synthetic phaseless measurement set.
struct Ensemble {
    Matrix matrix;              // m x n, i.i.d. N(0, 1) entries
    Vector clean_measurements;  // |A x|, entrywise
    Vector measurements;        // clean + sigma * N(0, I)
    double noise_sigma = 0.0;
    Eigen::Index m = 0;
};

// Draws a uniformly random size-s support and fills it with i.i.d. standard
// normal values (exact zeros are redrawn). Consumes the stream; a fresh rng
// with the same (seed, stream_id) reproduces the output bit for bit.
GroundTruth generate_ground_truth(Eigen::Index n, Eigen::Index s, SeededRng& rng);

// Gaussian sampling matrix (filled in column-major order), magnitudes of
// A x, and additive Gaussian noise of level sigma on top. With sigma = 0 the
// measurements equal the clean magnitudes exactly.
Ensemble generate_ensemble(const GroundTruth& truth, Eigen::Index m, double sigma, SeededRng& rng);

// min(||est + x||, ||est - x||) / ||x||; the min absorbs the global sign
// ambiguity of magnitude measurements.
double relative_error(const Vector& estimate, const GroundTruth& truth);

// True when the relative error is within tol or the top-s support of the
// estimate matches the true support exactly. The support branch is skipped
// at s = n, where it would hold for any estimate.
bool is_success(const Vector& estimate, const GroundTruth& truth, double tol = 1e-2);

// 10 log10 of clean power over realized noise power. Returns +infinity when
// the realized noise is zero (the sigma = 0 case).
double measurement_snr_db(const Ensemble& ensemble);

}  // namespace stormspar
