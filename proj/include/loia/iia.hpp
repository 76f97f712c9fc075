#pragma once

#include <utility>
#include <vector>

#include "loia/channel.hpp"
#include "loia/errors.hpp"
#include "loia/filters.hpp"
#include "loia/linalg.hpp"
#include "loia/rng.hpp"

namespace loia {

enum class Direction { Forward, Reverse };

// State of the alternating leakage-minimization baseline.
struct IiaState {
    std::vector<Matrix> V;  // per-user M x d_k precoders, orthonormal columns
    std::vector<Matrix> U;  // per-user M x d_k filters, orthonormal columns
    int iteration = 0;
    std::vector<std::pair<int, double>> leakage_history;  // per full iteration
    std::vector<double> half_leakage;                     // per half-step, for CSV export
};

// Q_k = sum_{j != k} (P/d_j) H^[kj] V_j V_j^† H^[kj]^†.
inline Matrix interference_covariance(const ChannelSet& set, const std::vector<Matrix>& precoders,
                                      int k, const TransmitConfig& cfg) {
    Matrix q = Matrix::Zero(set.dim(), set.dim());
    for (int j = 1; j <= set.users(); ++j) {
        if (j == k) continue;
        const Matrix& v = precoders[static_cast<std::size_t>(j - 1)];
        const Matrix hv = set.link(k, j) * v;
        q += (cfg.power / cfg.streams[static_cast<std::size_t>(j - 1)]) * (hv * hv.adjoint());
    }
    return (q + Matrix(q.adjoint())) / 2.0;  // clamp Hermitian drift
}

inline double mean_leakage(const ChannelSet& set, const std::vector<Matrix>& precoders,
                           const std::vector<Matrix>& filters, const TransmitConfig& cfg) {
    double total = 0.0;
    for (int k = 1; k <= set.users(); ++k) {
        const Matrix& u = filters[static_cast<std::size_t>(k - 1)];
        const Matrix q = interference_covariance(set, precoders, k, cfg);
        total += (u.adjoint() * q * u).trace().real();
    }
    return total / set.users();
}

// One sweep of the cited alternating minimization: each receiver of the given
// direction takes the eigenvectors of the d smallest eigenvalues of its
// interference covariance. Reverse runs on the reciprocal network with U as
// the transmit side.
inline IiaState iia_half_step(const ChannelSet& set, IiaState state, const TransmitConfig& cfg,
                              Direction dir) {
    const ChannelSet rev = reciprocal(set);
    const ChannelSet& net = (dir == Direction::Forward) ? set : rev;
    const std::vector<Matrix>& tx = (dir == Direction::Forward) ? state.V : state.U;
    std::vector<Matrix>& rx = (dir == Direction::Forward) ? state.U : state.V;

    for (int k = 1; k <= net.users(); ++k) {
        const Matrix q = interference_covariance(net, tx, k, cfg);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(q);
        // ascending eigenvalues; ties broken by index order
        rx[static_cast<std::size_t>(k - 1)] =
            eig.eigenvectors().leftCols(cfg.streams[static_cast<std::size_t>(k - 1)]);
    }
    return state;
}

// Random orthonormal init, then `iterations` forward+reverse sweeps.
// leakage_history gets iterations+1 entries including iteration 0.
inline IiaState iia_run(const ChannelSet& set, const TransmitConfig& cfg, int iterations,
                        Seed seed) {
    if (iterations < 0) throw ParameterError("iia_run: iterations must be >= 0");
    IiaState state;
    Rng rng(seed);
    for (int k = 0; k < set.users(); ++k)
        state.V.push_back(orthonormalize(rng.cgauss_matrix(set.dim(), cfg.streams[static_cast<std::size_t>(k)])));
    for (int k = 0; k < set.users(); ++k)
        state.U.push_back(orthonormalize(rng.cgauss_matrix(set.dim(), cfg.streams[static_cast<std::size_t>(k)])));

    double leak = mean_leakage(set, state.V, state.U, cfg);
    state.leakage_history.emplace_back(0, leak);
    state.half_leakage.push_back(leak);

    const ChannelSet rev = reciprocal(set);
    for (int it = 1; it <= iterations; ++it) {
        state = iia_half_step(set, std::move(state), cfg, Direction::Forward);
        state.half_leakage.push_back(mean_leakage(set, state.V, state.U, cfg));
        state = iia_half_step(set, std::move(state), cfg, Direction::Reverse);
        state.half_leakage.push_back(mean_leakage(rev, state.U, state.V, cfg));
        state.iteration = it;
        state.leakage_history.emplace_back(it, mean_leakage(set, state.V, state.U, cfg));
    }
    return state;
}

}  // namespace loia
