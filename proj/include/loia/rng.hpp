#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace loia {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Seed {
    std::uint64_t value = 0;
};

// splitmix64; used to derive independent per-realization seeds from a base seed.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Circularly symmetric complex Gaussian sampler, CN(0,1) per entry.
class Rng {
public:
    explicit Rng(Seed seed) : gen_(seed.value) {}

    Complex cgauss() {
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        const double re = normal_(gen_);
        const double im = normal_(gen_);
        return {re * inv_sqrt2, im * inv_sqrt2};
    }

    Matrix cgauss_matrix(Eigen::Index rows, Eigen::Index cols) {
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cgauss();
        return m;
    }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace loia
