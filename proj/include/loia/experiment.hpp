#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "loia/channel.hpp"
#include "loia/iia.hpp"
#include "loia/metrics.hpp"
#include "loia/mimo.hpp"
#include "loia/protocol.hpp"
#include "loia/siso.hpp"

namespace loia {

enum class Scheme { Loia, Iia, Orthogonal };

inline std::string scheme_name(Scheme s, int iia_iterations) {
    switch (s) {
        case Scheme::Loia: return "LOIA";
        case Scheme::Iia: return "IIA(" + std::to_string(iia_iterations) + ")";
        case Scheme::Orthogonal: return "Orthogonal";
    }
    return "?";
}

struct ExperimentConfig {
    bool mimo = true;
    int n = 1;        // SISO extension parameter (M = 2n+1)
    int antennas = 2; // MIMO antenna count
    std::vector<Scheme> schemes{Scheme::Loia, Scheme::Iia, Scheme::Orthogonal};
    std::vector<double> snr_grid_db{0, 10, 20, 30, 40, 50, 60};
    int realizations = 200;
    int iia_iterations = 2;
    Seed seed{1};
    std::string output_path;

    void validate() const {
        if (realizations < 1) throw ParameterError("experiment: realizations must be >= 1");
        if (snr_grid_db.empty()) throw ParameterError("experiment: SNR grid must be non-empty");
    }

    std::vector<int> streams() const {
        if (mimo) return {antennas / 2, antennas / 2, antennas / 2};
        return {n + 1, n, n};
    }
};

struct AggregateRow {
    std::string scheme;
    double snr_db = 0;
    double mean_sum_rate = 0;
    double stderr_sum_rate = 0;
    double mean_leakage = 0;
    int training_rounds = 0;
};

namespace detail {

struct SchemeSolution {
    std::vector<Matrix> V;
    std::vector<Matrix> U;
    bool orthogonal = false;
    int training_rounds = 0;
};

inline SchemeSolution solve_scheme(Scheme s, const ExperimentConfig& cfg, const ChannelSet& set,
                                   Seed realization_seed) {
    SchemeSolution sol;
    switch (s) {
        case Scheme::Loia: {
            if (cfg.mimo) {
                const auto p = p_matrices_mimo(set);
                const MimoPrecoders pre = build_precoders_mimo(p[0], p[1], p[2]);
                sol.V = pre.precoders();
                sol.U = receive_filters_mimo(set, pre).U;
            } else {
                const SisoPrecoders pre = build_precoders_siso(p_matrices_siso(set), cfg.n);
                sol.V = pre.precoders();
                sol.U = receive_filters_siso(set, pre).U;
            }
            sol.training_rounds = 3;  // Phase I + two exchanges, independent of n, M
            break;
        }
        case Scheme::Iia: {
            // Leakage minimization is invariant to a common power scale, so the
            // state is computed once and reused across the SNR grid.
            TransmitConfig tc{1.0, 1.0, cfg.streams()};
            const IiaState st = iia_run(set, tc, cfg.iia_iterations, realization_seed);
            sol.V = st.V;
            sol.U = st.U;
            sol.training_rounds = iia_overhead(cfg.iia_iterations, set.users(), set.dim(),
                                               cfg.streams()[0]).training_rounds();
            break;
        }
        case Scheme::Orthogonal:
            sol.orthogonal = true;
            sol.training_rounds = 1;  // direct-link estimation only
            break;
    }
    return sol;
}

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

}  // namespace detail

inline std::string experiment_csv(const std::vector<AggregateRow>& rows);

// Monte Carlo sweep: for every (scheme, SNR) aggregate the sum rate and
// leakage over `realizations` independent channel draws. Channels are shared
// across schemes and SNRs within a realization (paired comparison); the child
// seed of realization r is split_seed(seed, r), so output is deterministic.
inline std::vector<AggregateRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t ns = cfg.schemes.size();
    const std::size_t nsnr = cfg.snr_grid_db.size();
    std::vector<std::vector<double>> rates(ns * nsnr);    // per cell, one value per realization
    std::vector<std::vector<double>> leak(ns * nsnr);

    std::vector<int> rounds(ns, 0);
    for (int r = 0; r < cfg.realizations; ++r) {
        const Seed child{split_seed(cfg.seed.value, static_cast<std::uint64_t>(r))};
        const ChannelSet set = cfg.mimo ? sample_mimo(3, cfg.antennas, child)
                                        : sample_siso_extended(3, cfg.n, child);
        const Seed init{split_seed(child.value, 0xabcdULL)};
        for (std::size_t si = 0; si < ns; ++si) {
            const auto sol = detail::solve_scheme(cfg.schemes[si], cfg, set, init);
            rounds[si] = sol.training_rounds;
            for (std::size_t qi = 0; qi < nsnr; ++qi) {
                TransmitConfig tc{std::pow(10.0, cfg.snr_grid_db[qi] / 10.0), 1.0, cfg.streams()};
                double rate, lk;
                if (sol.orthogonal) {
                    rate = orthogonal_baseline(set, tc).sum;
                    lk = 0.0;
                } else {
                    rate = sum_rate(set, sol.V, sol.U, tc).sum;
                    const auto per_user = leakage_per_user(set, sol.V, sol.U, tc);
                    lk = std::accumulate(per_user.begin(), per_user.end(), 0.0) / per_user.size();
                }
                rates[si * nsnr + qi].push_back(rate);
                leak[si * nsnr + qi].push_back(lk);
            }
        }
    }

    std::vector<AggregateRow> out;
    for (std::size_t si = 0; si < ns; ++si)
        for (std::size_t qi = 0; qi < nsnr; ++qi) {
            const auto& rs = rates[si * nsnr + qi];
            const double mean = std::accumulate(rs.begin(), rs.end(), 0.0) / rs.size();
            double var = 0.0;
            for (double x : rs) var += (x - mean) * (x - mean);
            const double se = rs.size() > 1 ? std::sqrt(var / (rs.size() - 1.0) / rs.size()) : 0.0;
            const auto& ls = leak[si * nsnr + qi];
            AggregateRow row;
            row.scheme = scheme_name(cfg.schemes[si], cfg.iia_iterations);
            row.snr_db = cfg.snr_grid_db[qi];
            row.mean_sum_rate = mean;
            row.stderr_sum_rate = se;
            row.mean_leakage = std::accumulate(ls.begin(), ls.end(), 0.0) / ls.size();
            row.training_rounds = rounds[si];
            out.push_back(row);
        }

    if (!cfg.output_path.empty()) {
        std::ofstream f(cfg.output_path);
        if (!f) throw std::runtime_error("cannot open for writing: " + cfg.output_path);
        f << experiment_csv(out);
    }
    return out;
}

inline std::string experiment_csv(const std::vector<AggregateRow>& rows) {
    std::ostringstream s;
    s << "scheme,snr_db,mean_sum_rate,stderr,mean_leakage,training_rounds\n";
    for (const auto& r : rows)
        s << r.scheme << ',' << detail::format_double(r.snr_db) << ','
          << detail::format_double(r.mean_sum_rate) << ',' << detail::format_double(r.stderr_sum_rate)
          << ',' << detail::format_double(r.mean_leakage) << ',' << r.training_rounds << "\n";
    return s.str();
}

// Fig. 1-style data: per-iteration mean leakage of the iterative baseline,
// averaged over realizations, linear and dB.
inline std::string iia_history_csv(const ExperimentConfig& cfg, double power_db,
                                   bool per_half_step = false) {
    cfg.validate();
    std::vector<double> acc;
    for (int r = 0; r < cfg.realizations; ++r) {
        const Seed child{split_seed(cfg.seed.value, static_cast<std::uint64_t>(r))};
        const ChannelSet set = cfg.mimo ? sample_mimo(3, cfg.antennas, child)
                                        : sample_siso_extended(3, cfg.n, child);
        TransmitConfig tc{std::pow(10.0, power_db / 10.0), 1.0, cfg.streams()};
        const IiaState st = iia_run(set, tc, cfg.iia_iterations,
                                    Seed{split_seed(child.value, 0xabcdULL)});
        const std::vector<double>& h = per_half_step
                                           ? st.half_leakage
                                           : [&] {
                                                 std::vector<double> v;
                                                 for (const auto& [it, lk] : st.leakage_history)
                                                     v.push_back(lk);
                                                 return v;
                                             }();
        if (acc.empty()) acc.assign(h.size(), 0.0);
        for (std::size_t i = 0; i < h.size(); ++i) acc[i] += h[i];
    }
    std::ostringstream s;
    s << "iteration,mean_leakage,mean_leakage_db\n";
    const double step = per_half_step ? 0.5 : 1.0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        const double mean = acc[i] / cfg.realizations;
        s << detail::format_double(step * static_cast<double>(i)) << ','
          << detail::format_double(mean) << ','
          << detail::format_double(10.0 * std::log10(std::max(mean, 1e-300))) << "\n";
    }
    return s.str();
}

}  // namespace loia
