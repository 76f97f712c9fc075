#pragma once

#include <vector>

#include "loia/channel.hpp"
#include "loia/errors.hpp"
#include "loia/linalg.hpp"

namespace loia {

// Per-user receive filters U^[k], orthonormal columns.
struct FilterSet {
    std::vector<Matrix> U;  // U[k-1] is M x d_k
};

namespace detail {

// U^[k] = orthonormal basis of the orthogonal complement of the column space
// of the interference matrix seen at receiver k.
inline Matrix null_filter(const Matrix& interference) {
    if (numeric_rank(interference) != interference.cols())
        throw DegeneracyError("receive filter: interference matrix is rank deficient");
    return orthonormal_complement(interference);
}

}  // namespace detail

// TDD role swap: filters become transmit precoders on the reverse network and
// precoders become receive filters. Applying twice restores the assignment.
struct RoleSwap {
    std::vector<Matrix> precoders;
    std::vector<Matrix> filters;
};

inline RoleSwap reverse_roles(const std::vector<Matrix>& precoders, const FilterSet& filters) {
    return RoleSwap{filters.U, precoders};
}

// Mean per-user leakage of unit-power streams, used by the reciprocity checks:
// for each receiver k, || U_k^† H^[kj] V_j ||_F^2 summed over j != k, with
// V columns normalized and U orthonormalized.
inline double unit_leakage(const ChannelSet& set, const std::vector<Matrix>& precoders,
                           const std::vector<Matrix>& filters) {
    double total = 0.0;
    for (int k = 1; k <= set.users(); ++k) {
        const Matrix u = orthonormalize(filters[static_cast<std::size_t>(k - 1)]);
        for (int j = 1; j <= set.users(); ++j) {
            if (j == k) continue;
            const Matrix v = normalize_columns(precoders[static_cast<std::size_t>(j - 1)]);
            total += (u.adjoint() * set.link(k, j) * v).squaredNorm();
        }
    }
    return total / set.users();
}

}  // namespace loia
