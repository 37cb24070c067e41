#pragma once

#include <Eigen/Dense>

#include <vector>

namespace stormspar {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Sorted set of column indices with a target size (the sparsity level).
// Equality compares the index sets.
struct SupportSet {
    std::vector<Eigen::Index> indices;  // strictly increasing, each in [0, n)
    Eigen::Index capacity = 0;

    Eigen::Index size() const { return static_cast<Eigen::Index>(indices.size()); }
    bool operator==(const SupportSet& other) const { return indices == other.indices; }
};

// Elementwise sign with sign(0) = +1; every output entry is exactly +1 or -1.
Vector sign_vector(const Vector& v);

// Elementwise product. Throws std::invalid_argument on length mismatch.
Vector hadamard(const Vector& a, const Vector& b);

// Indices of the s entries of largest magnitude, ties broken toward the
// smaller index. Requires 1 <= s <= v.size().
SupportSet top_s_support(const Vector& v, Eigen::Index s);

// v with every entry outside top_s_support(v, s) zeroed.
Vector hard_threshold(const Vector& v, Eigen::Index s);

// Minimizes ||A(:, S) z - b||_2 over z and scatters z back into an n-vector
// that is zero off the support. Backed by a rank-revealing complete
// orthogonal decomposition; a rank-deficient A(:, S) yields the minimum-norm
// minimizer.
Vector restricted_least_squares(const Matrix& A, const Vector& b, const SupportSet& support);

}  // namespace stormspar
