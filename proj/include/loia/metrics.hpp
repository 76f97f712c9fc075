#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "loia/channel.hpp"
#include "loia/iia.hpp"
#include "loia/linalg.hpp"

namespace loia {

struct RateResult {
    std::vector<double> per_user;  // bits per channel use
    double sum = 0.0;
};

namespace detail {

inline double log2_det_hermitian(const Matrix& a) {
    // a is Hermitian positive definite; log-det via LDLT diagonal.
    Eigen::LDLT<Matrix> ldlt(a);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) acc += std::log2(std::abs(ldlt.vectorD()(i).real()));
    return acc;
}

}  // namespace detail

// Per-user interference power trace(U_k^† Q_k U_k), with per-stream power
// P/d_j on unit-norm precoder columns.
inline std::vector<double> leakage_per_user(const ChannelSet& set, const std::vector<Matrix>& precoders,
                                            const std::vector<Matrix>& filters, const TransmitConfig& cfg) {
    std::vector<Matrix> vn;
    vn.reserve(precoders.size());
    for (const auto& v : precoders) vn.push_back(normalize_columns(v));
    std::vector<double> out;
    for (int k = 1; k <= set.users(); ++k) {
        const Matrix& u = filters[static_cast<std::size_t>(k - 1)];
        const Matrix q = interference_covariance(set, vn, k, cfg);
        out.push_back((u.adjoint() * q * u).trace().real());
    }
    return out;
}

// R_k = log2 det(I + (P/d_k) (U^†(Q_k + N0 I)U)^-1 U^† H V V^† H^† U), with
// residual interference treated as noise. SISO-extension rates are reported
// per channel use (divided by M).
inline RateResult sum_rate(const ChannelSet& set, const std::vector<Matrix>& precoders,
                           const std::vector<Matrix>& filters, const TransmitConfig& cfg) {
    std::vector<Matrix> vn;
    vn.reserve(precoders.size());
    for (const auto& v : precoders) vn.push_back(normalize_columns(v));

    RateResult res;
    const double per_use = (set.structure() == Structure::Diagonal) ? 1.0 / set.dim() : 1.0;
    for (int k = 1; k <= set.users(); ++k) {
        const Matrix& u = filters[static_cast<std::size_t>(k - 1)];
        const Matrix q = interference_covariance(set, vn, k, cfg);
        const Matrix noise = u.adjoint() * (q + cfg.noise * Matrix::Identity(set.dim(), set.dim())) * u;
        const Matrix hv = set.link(k, k) * vn[static_cast<std::size_t>(k - 1)];
        const Eigen::Index d = u.cols();
        // Whiten: det(I + N^-1 S) = det(I + c G G^†) with G = L^-1 U^† H V,
        // N = L L^†, which keeps the argument Hermitian positive definite.
        Eigen::LLT<Matrix> llt((noise + Matrix(noise.adjoint())) / 2.0);
        const Matrix g = llt.matrixL().solve(u.adjoint() * hv);
        const double c = cfg.power / cfg.streams[static_cast<std::size_t>(k - 1)];
        const Matrix eff = Matrix::Identity(d, d) + c * (g * g.adjoint());
        res.per_user.push_back(std::max(0.0, detail::log2_det_hermitian(eff) * per_use));
    }
    res.sum = std::accumulate(res.per_user.begin(), res.per_user.end(), 0.0);
    return res;
}

// TDMA reference: each user active 1/3 of the time with power 3P spread over
// M streams of its direct link, no interference.
inline RateResult orthogonal_baseline(const ChannelSet& set, const TransmitConfig& cfg) {
    if (set.users() != 3) throw ParameterError("orthogonal_baseline: K = 3 only");
    RateResult res;
    const double per_use = (set.structure() == Structure::Diagonal) ? 1.0 / set.dim() : 1.0;
    const double gain = 3.0 * cfg.power / (set.dim() * cfg.noise);
    for (int k = 1; k <= set.users(); ++k) {
        const Matrix& h = set.link(k, k);
        const Matrix a = Matrix::Identity(set.dim(), set.dim()) + gain * (h * h.adjoint());
        res.per_user.push_back(detail::log2_det_hermitian(a) / 3.0 * per_use);
    }
    res.sum = std::accumulate(res.per_user.begin(), res.per_user.end(), 0.0);
    return res;
}

}  // namespace loia
