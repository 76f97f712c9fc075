#pragma once

#include <string>
#include <vector>

#include "loia/errors.hpp"
#include "loia/linalg.hpp"
#include "loia/rng.hpp"

namespace loia {

enum class Structure { Diagonal, Dense };

struct ChannelMatrix {
    Matrix entries;  // M x M complex gains
    Structure structure = Structure::Dense;
    int tx = 0;  // 1-based user indices
    int rx = 0;
};

// The full K*K link collection {H^[kj]} of one network realization.
class ChannelSet {
public:
    ChannelSet(int users, int dim, Structure structure, Seed seed)
        : K_(users),
          M_(dim),
          structure_(structure),
          seed_(seed),
          links_(static_cast<std::size_t>(users) * users) {}

    int users() const { return K_; }
    int dim() const { return M_; }
    Structure structure() const { return structure_; }
    Seed seed() const { return seed_; }

    // Link from transmitter tx to receiver rx, both 1-based.
    const Matrix& link(int rx, int tx) const { return links_[index(rx, tx)]; }
    void set_link(int rx, int tx, Matrix h) { links_[index(rx, tx)] = std::move(h); }

private:
    std::size_t index(int rx, int tx) const {
        return static_cast<std::size_t>(rx - 1) * K_ + static_cast<std::size_t>(tx - 1);
    }

    int K_;
    int M_;
    Structure structure_;
    Seed seed_;
    std::vector<Matrix> links_;
};

struct TransmitConfig {
    double power = 1.0;    // per-node total power, linear, relative to noise
    double noise = 1.0;    // noise power, linear
    std::vector<int> streams;  // d^[k], one entry per user
};

namespace detail {

inline Matrix sample_diagonal_link(Rng& rng, int dim) {
    // Resample entries within 1e-6 of zero; the construction divides by them.
    Vector d(dim);
    for (int i = 0; i < dim; ++i) {
        Complex z;
        do {
            z = rng.cgauss();
        } while (std::abs(z) < 1e-6);
        d(i) = z;
    }
    return d.asDiagonal();
}

inline Matrix sample_dense_link(Rng& rng, int dim) {
    Matrix h;
    do {
        h = rng.cgauss_matrix(dim, dim);
    } while (condition_number(h) > 1e8);
    return h;
}

}  // namespace detail

// 3-user SISO channel over a 2n+1 symbol extension; diagonal link matrices
// with i.i.d. CN(0,1) diagonal entries.
inline ChannelSet sample_siso_extended(int users, int extension, Seed seed) {
    if (users != 3) throw ParameterError("sample_siso_extended: only K = 3 supported");
    if (extension < 1) throw ParameterError("sample_siso_extended: extension parameter n must be >= 1");
    const int dim = 2 * extension + 1;
    ChannelSet set(users, dim, Structure::Diagonal, seed);
    Rng rng(seed);
    for (int rx = 1; rx <= users; ++rx)
        for (int tx = 1; tx <= users; ++tx)
            set.set_link(rx, tx, detail::sample_diagonal_link(rng, dim));
    return set;
}

// 3-user MIMO channel, even antenna count, dense i.i.d. CN(0,1) links.
inline ChannelSet sample_mimo(int users, int antennas, Seed seed) {
    if (users != 3) throw ParameterError("sample_mimo: only K = 3 supported");
    if (antennas < 2 || antennas % 2 != 0)
        throw ParameterError("sample_mimo: antenna count must be even and >= 2");
    ChannelSet set(users, antennas, Structure::Dense, seed);
    Rng rng(seed);
    for (int rx = 1; rx <= users; ++rx)
        for (int tx = 1; tx <= users; ++tx)
            set.set_link(rx, tx, detail::sample_dense_link(rng, antennas));
    return set;
}

// Reverse (TDD) network: the link from node k to node j is the conjugate
// transpose of H^[kj]. Applying twice restores the original set bit-exactly.
inline ChannelSet reciprocal(const ChannelSet& set) {
    ChannelSet rev(set.users(), set.dim(), set.structure(), set.seed());
    for (int rx = 1; rx <= set.users(); ++rx)
        for (int tx = 1; tx <= set.users(); ++tx)
            rev.set_link(rx, tx, set.link(tx, rx).adjoint());
    return rev;
}

}  // namespace loia
