#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>

#include "loia/rng.hpp"

namespace loia {

inline double rel_residual(const Matrix& a, const Matrix& b) {
    const double scale = std::max({a.norm(), b.norm(), std::numeric_limits<double>::min()});
    return (a - b).norm() / scale;
}

inline double condition_number(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return svd.singularValues()(0) / smin;
}

inline Eigen::Index numeric_rank(const Matrix& a, double rel_tol = 1e-10) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cut = rel_tol * sv(0);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    return r;
}

// Thin orthonormal basis of the column space (same column count as input).
inline Matrix orthonormalize(const Matrix& a) {
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
}

// Orthonormal basis of the orthogonal complement of colspace(a), dimension
// rows - cols. Columns of `a` must be independent.
inline Matrix orthonormal_complement(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
    return svd.matrixU().rightCols(a.rows() - a.cols());
}

// Largest relative out-of-subspace component over the columns of x, with the
// subspace given by the columns of basis. Zero columns contribute zero.
inline double containment_residual(const Matrix& x, const Matrix& basis) {
    if (x.cols() == 0) return 0.0;
    const Matrix q = orthonormalize(basis);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const Vector col = x.col(j);
        const double n = col.norm();
        if (n == 0.0) continue;
        const Vector out = col - q * (q.adjoint() * col);
        worst = std::max(worst, out.norm() / n);
    }
    return worst;
}

// For each column of x, distance to the nearest column of y, relative to the
// column norm; returns the worst case. The literal "column subset" relation.
inline double column_subset_residual(const Matrix& x, const Matrix& y) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double n = std::max(x.col(j).norm(), std::numeric_limits<double>::min());
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < y.cols(); ++i)
            best = std::min(best, (x.col(j) - y.col(i)).norm() / n);
        worst = std::max(worst, best);
    }
    return worst;
}

// sin of the largest principal angle between two equal-dimension subspaces,
// via the projection residual (I - Qa Qa^†) Qb; stays accurate near zero
// where sqrt(1 - cos^2) loses half the digits.
inline double subspace_distance(const Matrix& a, const Matrix& b) {
    const Matrix qa = orthonormalize(a);
    const Matrix qb = orthonormalize(b);
    const Matrix ra = qb - qa * (qa.adjoint() * qb);
    const Matrix rb = qa - qb * (qb.adjoint() * qa);
    Eigen::JacobiSVD<Matrix> sa(ra);
    Eigen::JacobiSVD<Matrix> sb(rb);
    return std::max(sa.singularValues().maxCoeff(), sb.singularValues().maxCoeff());
}

// Rescales every nonzero column to unit 2-norm.
inline Matrix normalize_columns(const Matrix& a) {
    Matrix out = a;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        const double n = out.col(j).norm();
        if (n > 0.0) out.col(j) /= n;
    }
    return out;
}

}  // namespace loia
