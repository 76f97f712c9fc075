#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "loia/experiment.hpp"
#include "loia/metrics.hpp"
#include "loia/mimo.hpp"
#include "loia/siso.hpp"

using namespace loia;

namespace {

struct LoiaSolution {
    std::vector<Matrix> V;
    std::vector<Matrix> U;
};

LoiaSolution loia_mimo(const ChannelSet& set) {
    const auto p = p_matrices_mimo(set);
    const MimoPrecoders pre = build_precoders_mimo(p[0], p[1], p[2]);
    return {pre.precoders(), receive_filters_mimo(set, pre).U};
}

}  // namespace

TEST_CASE("leakage of an aligned solution is negligible") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const ChannelSet set = sample_mimo(3, 2, Seed{s});
        const auto sol = loia_mimo(set);
        TransmitConfig tc{1e4, 1.0, {1, 1, 1}};
        for (double lk : leakage_per_user(set, sol.V, sol.U, tc)) REQUIRE(lk <= 1e-9 * tc.power);

        // oracle: explicit U^† H V products
        double direct = 0.0;
        for (int k = 1; k <= 3; ++k)
            for (int j = 1; j <= 3; ++j)
                if (j != k)
                    direct += tc.power *
                              (sol.U[k - 1].adjoint() * set.link(k, j) * normalize_columns(sol.V[j - 1]))
                                  .squaredNorm();
        REQUIRE(direct / 3.0 <= 1e-9 * tc.power);
    }
}

TEST_CASE("leakage equals eigenvalue sum when U spans the interference space") {
    const ChannelSet set = sample_mimo(3, 4, Seed{6});
    Rng rng(Seed{7});
    std::vector<Matrix> v;
    for (int k = 0; k < 3; ++k) v.push_back(normalize_columns(rng.cgauss_matrix(4, 2)));
    TransmitConfig tc{5.0, 1.0, {2, 2, 2}};
    const Matrix q = interference_covariance(set, v, 1, tc);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(q);
    std::vector<Matrix> u = {eig.eigenvectors(), Matrix::Identity(4, 4), Matrix::Identity(4, 4)};
    const auto lk = leakage_per_user(set, v, u, tc);
    REQUIRE(lk[0] == Catch::Approx(eig.eigenvalues().sum()).epsilon(1e-10));
}

TEST_CASE("single-user unit-gain rate is one bit") {
    ChannelSet solo(1, 1, Structure::Dense, Seed{0});
    solo.set_link(1, 1, Matrix::Ones(1, 1));
    TransmitConfig tc{1.0, 1.0, {1}};
    const RateResult r = sum_rate(solo, {Matrix::Ones(1, 1)}, {Matrix::Ones(1, 1)}, tc);
    REQUIRE(r.sum == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero direct channel gives zero rate") {
    ChannelSet set = sample_mimo(3, 2, Seed{12});
    set.set_link(2, 2, Matrix::Zero(2, 2));
    const auto sol = loia_mimo(set);
    TransmitConfig tc{100.0, 1.0, {1, 1, 1}};
    const RateResult r = sum_rate(set, sol.V, sol.U, tc);
    REQUIRE(r.per_user[1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(r.sum == Catch::Approx(r.per_user[0] + r.per_user[1] + r.per_user[2]));
}

TEST_CASE("aligned rate matches the interference-free bound at 40 dB") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const ChannelSet set = sample_mimo(3, 2, Seed{s});
        const auto sol = loia_mimo(set);
        TransmitConfig tc{1e4, 1.0, {1, 1, 1}};
        const RateResult r = sum_rate(set, sol.V, sol.U, tc);
        // oracle: drop the interference terms entirely
        for (int k = 1; k <= 3; ++k) {
            const Matrix u = sol.U[k - 1];
            const Matrix hv = set.link(k, k) * normalize_columns(sol.V[k - 1]);
            const Matrix g = u.adjoint() * hv;
            const double bound = std::log2(1.0 + tc.power * (g.adjoint() * g)(0, 0).real());
            REQUIRE(r.per_user[k - 1] == Catch::Approx(bound).epsilon(0.01));
        }
    }
}

TEST_CASE("orthogonal baseline closed-form checks") {
    // M = 1, |h| = 1, P = 1: (1/3) log2(1 + 3) = 2/3
    ChannelSet tiny(3, 1, Structure::Dense, Seed{0});
    for (int rx = 1; rx <= 3; ++rx)
        for (int tx = 1; tx <= 3; ++tx) tiny.set_link(rx, tx, Matrix::Ones(1, 1));
    TransmitConfig tc{1.0, 1.0, {1, 1, 1}};
    const RateResult r = orthogonal_baseline(tiny, tc);
    REQUIRE(r.per_user[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-12));

    // identity 2x2 links with 3P/N0 = 4: per user (1/3) * 2 * log2(1 + 2)
    ChannelSet id2(3, 2, Structure::Dense, Seed{0});
    for (int rx = 1; rx <= 3; ++rx)
        for (int tx = 1; tx <= 3; ++tx) id2.set_link(rx, tx, Matrix::Identity(2, 2));
    TransmitConfig tc2{4.0 / 3.0, 1.0, {1, 1, 1}};
    const RateResult r2 = orthogonal_baseline(id2, tc2);
    REQUIRE(r2.per_user[0] == Catch::Approx(2.0 / 3.0 * std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("orthogonal baseline matches independent log-det evaluation") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const ChannelSet set = sample_mimo(3, 2, Seed{s});
        TransmitConfig tc{1e4, 1.0, {1, 1, 1}};
        const RateResult r = orthogonal_baseline(set, tc);
        for (int k = 1; k <= 3; ++k) {
            const Matrix& h = set.link(k, k);
            const Matrix a =
                Matrix::Identity(2, 2) + (3.0 * tc.power / 2.0) * (h * h.adjoint());
            const double expect = std::log2(std::abs(a.determinant())) / 3.0;
            REQUIRE(r.per_user[k - 1] == Catch::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("rates are monotone in SNR for every scheme") {
    ExperimentConfig cfg;
    cfg.snr_grid_db = {0, 10, 20, 30, 40};
    cfg.realizations = 20;
    cfg.seed = Seed{77};
    const auto rows = run_experiment(cfg);
    std::map<std::string, std::vector<double>> by_scheme;
    for (const auto& row : rows) by_scheme[row.scheme].push_back(row.mean_sum_rate);
    REQUIRE(by_scheme.size() == 3);
    for (const auto& [scheme, rates] : by_scheme)
        for (std::size_t i = 1; i < rates.size(); ++i) REQUIRE(rates[i] >= rates[i - 1]);
}

TEST_CASE("experiment output is byte-identical under the same seed") {
    ExperimentConfig cfg;
    cfg.snr_grid_db = {10, 30};
    cfg.realizations = 5;
    cfg.seed = Seed{123};
    const std::string a = experiment_csv(run_experiment(cfg));
    const std::string b = experiment_csv(run_experiment(cfg));
    REQUIRE(a == b);
    REQUIRE(a.rfind("scheme,snr_db,mean_sum_rate,stderr,mean_leakage,training_rounds", 0) == 0);
}

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg;
    cfg.realizations = 0;
    REQUIRE_THROWS_AS(run_experiment(cfg), ParameterError);
    cfg.realizations = 1;
    cfg.snr_grid_db.clear();
    REQUIRE_THROWS_AS(run_experiment(cfg), ParameterError);
}

TEST_CASE("iia history csv has the right shape") {
    ExperimentConfig cfg;
    cfg.realizations = 3;
    cfg.iia_iterations = 4;
    cfg.seed = Seed{9};
    const std::string csv = iia_history_csv(cfg, 40.0);
    std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
    REQUIRE(lines == 1 + 5);  // header + iterations 0..4
    const std::string half = iia_history_csv(cfg, 40.0, true);
    REQUIRE(static_cast<std::size_t>(std::count(half.begin(), half.end(), '\n')) == 1 + 9);
}
