#pragma once

#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "loia/channel.hpp"
#include "loia/errors.hpp"
#include "loia/filters.hpp"
#include "loia/linalg.hpp"

namespace loia {

// Closed-form precoders for the 3-user MIMO channel with an even antenna
// count M and d = M/2 streams per user, no symbol extension.
struct MimoPrecoders {
    Matrix V1;  // M x M/2, selected eigenvectors of T
    Matrix V2;  // M x M/2, P3^-1 V1
    Matrix V3;  // M x M/2, P2 V1
    Matrix T;   // P3 P1 P2
    Vector eigenvalues;         // all M eigenvalues of T
    std::vector<int> selected;  // indices of the M/2 eigenvectors used

    std::vector<Matrix> precoders() const { return {V1, V2, V3}; }
    std::vector<int> streams() const {
        const int d = static_cast<int>(V1.cols());
        return {d, d, d};
    }
};

struct MimoResiduals {
    double eq23 = 0;  // span(H12 V2) = span(H13 V3), principal-angle distance
    double eq24 = 0;  // H21 V1 = H23 V3
    double eq25 = 0;  // H31 V1 = H32 V2

    double max_alignment() const { return std::max({eq23, eq24, eq25}); }
};

namespace detail {

inline Matrix solve_link(const ChannelSet& set, int rx, int tx_lhs, int tx_rhs) {
    const Matrix& lhs = set.link(rx, tx_lhs);
    if (condition_number(lhs) > 1e8)
        throw SingularityError("p_matrices_mimo: ill-conditioned link H[" + std::to_string(rx) +
                               std::to_string(tx_lhs) + "]");
    return lhs.partialPivLu().solve(set.link(rx, tx_rhs));
}

// Inverse iteration with Rayleigh-quotient updates; the eigensolver's raw
// vectors carry ~1e-8 residuals, which is not enough for the alignment
// tolerances downstream.
inline Vector refine_eigenpair(const Matrix& t, Vector v) {
    const double scale = t.norm();
    v.normalize();
    for (int pass = 0; pass < 3; ++pass) {
        const Complex lambda = v.dot(t * v);  // Rayleigh quotient, v unit norm
        if ((t * v - lambda * v).norm() <= 1e-14 * scale) break;
        const Matrix shifted = t - lambda * Matrix::Identity(t.rows(), t.cols());
        const Vector w = shifted.fullPivLu().solve(v);
        const double wn = w.norm();
        if (!std::isfinite(wn) || wn == 0.0) break;
        v = w / wn;
    }
    return v;
}

// Unit norm, first component of magnitude > tol rotated real-positive; fixes
// the phase so serialized fixtures compare equal.
inline Vector canonical_eigenvector(Vector v) {
    v.normalize();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-12) {
            v *= std::conj(v(i)) / mag;
            break;
        }
    }
    return v;
}

}  // namespace detail

// P1 = (H12)^-1 H13, P2 = (H23)^-1 H21, P3 = (H31)^-1 H32, by linear solve.
inline std::array<Matrix, 3> p_matrices_mimo(const ChannelSet& set) {
    if (set.structure() != Structure::Dense || set.users() != 3)
        throw ParameterError("p_matrices_mimo: needs a 3-user dense channel set");
    return {detail::solve_link(set, 1, 2, 3), detail::solve_link(set, 2, 3, 1),
            detail::solve_link(set, 3, 1, 2)};
}

// T = P3 P1 P2; V1 = M/2 eigenvectors of T, V2 = P3^-1 V1, V3 = P2 V1.
// Default selection: eigenvalues sorted by magnitude descending, then phase
// ascending; any size-M/2 subset achieves alignment, the rule only fixes
// reproducibility. An explicit subset can be passed instead.
inline MimoPrecoders build_precoders_mimo(const Matrix& p1, const Matrix& p2, const Matrix& p3,
                                          std::optional<std::vector<int>> selection = std::nullopt) {
    const Eigen::Index dim = p1.rows();
    if (dim % 2 != 0 || p1.cols() != dim || p2.rows() != dim || p2.cols() != dim ||
        p3.rows() != dim || p3.cols() != dim)
        throw ParameterError("build_precoders_mimo: need square M x M inputs with M even");
    const Eigen::Index d = dim / 2;

    MimoPrecoders out;
    out.T = p3 * p1 * p2;

    Eigen::ComplexEigenSolver<Matrix> eig(out.T);
    if (eig.info() != Eigen::Success || condition_number(eig.eigenvectors()) > 1e8)
        throw DegeneracyError("build_precoders_mimo: T is defective or near-defective");
    out.eigenvalues = eig.eigenvalues();

    if (selection) {
        out.selected = *selection;
        if (out.selected.size() != static_cast<std::size_t>(d))
            throw ParameterError("build_precoders_mimo: selection must have M/2 indices");
    } else {
        std::vector<int> order(static_cast<std::size_t>(dim));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const double ma = std::abs(out.eigenvalues(a));
            const double mb = std::abs(out.eigenvalues(b));
            if (ma != mb) return ma > mb;
            return std::arg(out.eigenvalues(a)) < std::arg(out.eigenvalues(b));
        });
        out.selected.assign(order.begin(), order.begin() + d);
    }

    out.V1.resize(dim, d);
    for (Eigen::Index j = 0; j < d; ++j)
        out.V1.col(j) = detail::canonical_eigenvector(
            detail::refine_eigenpair(out.T, eig.eigenvectors().col(out.selected[static_cast<std::size_t>(j)])));
    if (numeric_rank(out.V1, 1e-9) != d)
        throw DegeneracyError("build_precoders_mimo: selected eigenvectors are dependent");

    // span(T V1) = span(V1); the eigenvector reading of T V1 = V1.
    if (subspace_distance(out.T * out.V1, out.V1) > 1e-9)
        throw DegeneracyError("build_precoders_mimo: V1 is not T-invariant");

    // V2, V3 deliberately not re-normalized; the exact equalities (24)-(25)
    // hold only for the raw products.
    out.V2 = p3.partialPivLu().solve(out.V1);
    out.V3 = p2 * out.V1;
    return out;
}

inline MimoResiduals verify_alignment_mimo(const ChannelSet& set, const MimoPrecoders& pre) {
    MimoResiduals r;
    r.eq23 = subspace_distance(set.link(1, 2) * pre.V2, set.link(1, 3) * pre.V3);
    r.eq24 = rel_residual(set.link(2, 1) * pre.V1, set.link(2, 3) * pre.V3);
    r.eq25 = rel_residual(set.link(3, 1) * pre.V1, set.link(3, 2) * pre.V2);
    return r;
}

inline FilterSet receive_filters_mimo(const ChannelSet& set, const MimoPrecoders& pre,
                                      double gate = 1e-8) {
    const double worst = verify_alignment_mimo(set, pre).max_alignment();
    if (worst > gate)
        throw AlignmentError("receive_filters_mimo: alignment residual " + std::to_string(worst) +
                             " above gate");
    FilterSet f;
    f.U.push_back(detail::null_filter(set.link(1, 2) * pre.V2));
    f.U.push_back(detail::null_filter(set.link(2, 1) * pre.V1));
    f.U.push_back(detail::null_filter(set.link(3, 1) * pre.V1));
    return f;
}

}  // namespace loia
