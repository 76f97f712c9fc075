#pragma once

#include <string>
#include <vector>

#include "loia/channel.hpp"
#include "loia/errors.hpp"
#include "loia/filters.hpp"
#include "loia/linalg.hpp"

namespace loia {

// Closed-form precoders for the 3-user SISO channel over M = 2n+1 symbol
// extensions. Stream split is d = {n+1, n, n}.
struct SisoPrecoders {
    Matrix V1;  // M x (n+1)
    Matrix V2;  // M x n
    Matrix V3;  // M x n
    Vector T;   // diagonal entries of T = P1 P2 P3
    Matrix B;   // M x n, [Tw ... T^n w]
    Matrix C;   // M x n, [w ... T^(n-1) w]
    Vector w;   // all-ones
    int n = 0;

    std::vector<Matrix> precoders() const { return {V1, V2, V3}; }
    std::vector<int> streams() const { return {n + 1, n, n}; }
};

struct SisoDiagP {
    Vector p1, p2, p3;  // diagonal entries
};

struct SisoResiduals {
    double eq10 = 0;  // H12 V2 = H13 V3
    double eq11 = 0;  // H23 V3 inside span(H21 V1)
    double eq12 = 0;  // H32 V2 inside span(H31 V1)
    double eq31 = 0;  // B = T C
    double eq32 = 0;  // columns of B subset of columns of V1
    double eq33 = 0;  // columns of C subset of columns of V1

    double max_alignment() const { return std::max({eq10, eq11, eq12}); }
};

namespace detail {

inline Vector diag_of(const Matrix& m) { return m.diagonal(); }

inline Vector diag_ratio(const ChannelSet& set, int rx_num, int tx_num, int rx_den, int tx_den) {
    const Vector num = diag_of(set.link(rx_num, tx_num));
    const Vector den = diag_of(set.link(rx_den, tx_den));
    Vector out(num.size());
    for (Eigen::Index i = 0; i < num.size(); ++i) {
        if (std::abs(den(i)) < 1e-12)
            throw SingularityError("p_matrices_siso: singular link H[" + std::to_string(rx_den) +
                                   std::to_string(tx_den) + "] at extension slot " + std::to_string(i));
        out(i) = num(i) / den(i);
    }
    return out;
}

}  // namespace detail

// P1 = H12 (H13)^-1, P2 = H23 (H21)^-1, P3 = H31 (H32)^-1, element-wise on
// the diagonals.
inline SisoDiagP p_matrices_siso(const ChannelSet& set) {
    if (set.structure() != Structure::Diagonal || set.users() != 3)
        throw ParameterError("p_matrices_siso: needs a 3-user diagonal channel set");
    return SisoDiagP{detail::diag_ratio(set, 1, 2, 1, 3), detail::diag_ratio(set, 2, 3, 2, 1),
                     detail::diag_ratio(set, 3, 1, 3, 2)};
}

// T = P1 P2 P3, V1 = [w Tw ... T^n w], V2 = P3 C, V3 = P2^-1 B.
inline SisoPrecoders build_precoders_siso(const Vector& p1, const Vector& p2, const Vector& p3, int n) {
    const Eigen::Index dim = p1.size();
    if (n < 1 || dim != 2 * n + 1 || p2.size() != dim || p3.size() != dim)
        throw ParameterError("build_precoders_siso: need M = 2n+1 with n >= 1");

    SisoPrecoders out;
    out.n = n;
    out.w = Vector::Ones(dim);
    out.T = p1.cwiseProduct(p2).cwiseProduct(p3);

    // Krylov columns w, Tw, ..., T^n w; B and C are column blocks of V1, so
    // B = T C holds with the identical floating-point product sequence.
    out.V1.resize(dim, n + 1);
    out.V1.col(0) = out.w;
    for (int j = 1; j <= n; ++j) out.V1.col(j) = out.T.cwiseProduct(out.V1.col(j - 1));
    out.C = out.V1.leftCols(n);
    out.B = out.V1.rightCols(n);

    if (numeric_rank(out.V1, 1e-9) != n + 1)
        throw DegeneracyError("build_precoders_siso: V1 is rank deficient (repeated T entries)");

    out.V2 = p3.asDiagonal() * out.C;
    Matrix v3(dim, n);
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(p2(i)) < 1e-12)
            throw SingularityError("build_precoders_siso: P2 not invertible at slot " + std::to_string(i));
        v3.row(i) = out.B.row(i) / p2(i);
    }
    out.V3 = v3;

    if (rel_residual(out.B, out.T.asDiagonal() * out.C) > 1e-12 ||
        column_subset_residual(out.B, out.V1) > 1e-12 ||
        column_subset_residual(out.C, out.V1) > 1e-12)
        throw DegeneracyError("build_precoders_siso: construction identities violated");
    return out;
}

inline SisoPrecoders build_precoders_siso(const SisoDiagP& p, int n) {
    return build_precoders_siso(p.p1, p.p2, p.p3, n);
}

// Residuals of the IA conditions (10)-(12) and of the generator identities
// (31)-(33) the construction satisfies.
inline SisoResiduals verify_alignment_siso(const ChannelSet& set, const SisoPrecoders& pre) {
    SisoResiduals r;
    r.eq10 = rel_residual(set.link(1, 2) * pre.V2, set.link(1, 3) * pre.V3);
    r.eq11 = containment_residual(set.link(2, 3) * pre.V3, set.link(2, 1) * pre.V1);
    r.eq12 = containment_residual(set.link(3, 2) * pre.V2, set.link(3, 1) * pre.V1);
    r.eq31 = rel_residual(pre.B, pre.T.asDiagonal() * pre.C);
    r.eq32 = column_subset_residual(pre.B, pre.V1);
    r.eq33 = column_subset_residual(pre.C, pre.V1);
    return r;
}

// U1 = null(H12 V2), U2 = null(H21 V1), U3 = null(H31 V1). Requires the
// alignment residuals to be below the gate.
inline FilterSet receive_filters_siso(const ChannelSet& set, const SisoPrecoders& pre,
                                      double gate = 1e-8) {
    const double worst = verify_alignment_siso(set, pre).max_alignment();
    if (worst > gate)
        throw AlignmentError("receive_filters_siso: alignment residual " + std::to_string(worst) +
                             " above gate");
    FilterSet f;
    f.U.push_back(detail::null_filter(set.link(1, 2) * pre.V2));
    f.U.push_back(detail::null_filter(set.link(2, 1) * pre.V1));
    f.U.push_back(detail::null_filter(set.link(3, 1) * pre.V1));
    return f;
}

}  // namespace loia
