#include "stormspar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stormspar {

Vector sign_vector(const Vector& v) {
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out[i] = v[i] >= 0.0 ? 1.0 : -1.0;
    }
    return out;
}

Vector hadamard(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hadamard: length mismatch");
    }
    return a.cwiseProduct(b);
}

SupportSet top_s_support(const Vector& v, Eigen::Index s) {
    if (s < 1 || s > v.size()) {
        throw std::invalid_argument("top_s_support: need 1 <= s <= length(v)");
    }
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    // Total order: |v_i| descending, then index ascending.
    const auto larger = [&v](Eigen::Index a, Eigen::Index b) {
        const double fa = std::abs(v[a]);
        const double fb = std::abs(v[b]);
        return fa > fb || (fa == fb && a < b);
    };
    std::nth_element(idx.begin(), idx.begin() + (s - 1), idx.end(), larger);
    idx.resize(static_cast<std::size_t>(s));
    std::sort(idx.begin(), idx.end());
    return SupportSet{std::move(idx), s};
}

Vector hard_threshold(const Vector& v, Eigen::Index s) {
    const SupportSet support = top_s_support(v, s);
    Vector out = Vector::Zero(v.size());
    for (const Eigen::Index i : support.indices) {
        out[i] = v[i];
    }
    return out;
}

Vector restricted_least_squares(const Matrix& A, const Vector& b, const SupportSet& support) {
    if (support.indices.empty()) {
        throw std::invalid_argument("restricted_least_squares: empty support");
    }
    if (A.rows() != b.size()) {
        throw std::invalid_argument("restricted_least_squares: dimension mismatch");
    }
    for (const Eigen::Index i : support.indices) {
        if (i < 0 || i >= A.cols()) {
            throw std::invalid_argument("restricted_least_squares: support index out of range");
        }
    }
    const Matrix submatrix = A(Eigen::all, support.indices);
    const Vector coeffs = Eigen::CompleteOrthogonalDecomposition<Matrix>(submatrix).solve(b);
    Vector out = Vector::Zero(A.cols());
    for (Eigen::Index k = 0; k < support.size(); ++k) {
        out[support.indices[static_cast<std::size_t>(k)]] = coeffs[k];
    }
    return out;
}

}  // namespace stormspar
