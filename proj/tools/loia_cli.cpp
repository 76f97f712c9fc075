// Command-line front end: fig1 (leakage-vs-iteration data), fig3 (sum-rate
// sweep), verify (alignment residual suite), protocol-trace (distributed run
// with knowledge audit). All outputs are CSV or JSON files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loia/loia.hpp"

namespace {

using namespace loia;

// Accepts "a:b:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo, hi, step;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0)
            throw ParameterError("bad SNR grid '" + text + "', expected lo:hi:step");
        for (double x = lo; x <= hi + 1e-9; x += step) out.push_back(x);
    } else {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ParameterError("empty SNR grid");
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
}

struct CommonArgs {
    std::string mode = "mimo";
    int n = 1;
    int antennas = 2;
    int realizations = 200;
    int iters = 2;
    std::uint64_t seed = 1;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--mode", mode, "siso or mimo")->check(CLI::IsMember({"siso", "mimo"}));
        cmd->add_option("--n", n, "SISO extension parameter (M = 2n+1)");
        cmd->add_option("--antennas", antennas, "MIMO antenna count (even)");
        cmd->add_option("--realizations", realizations, "Monte Carlo realizations");
        cmd->add_option("--iters", iters, "iterative baseline iteration count");
        cmd->add_option("--seed", seed, "base RNG seed");
        cmd->add_option("--out", out, "output path ('-' for stdout)");
    }

    ExperimentConfig experiment() const {
        ExperimentConfig cfg;
        cfg.mimo = (mode == "mimo");
        cfg.n = n;
        cfg.antennas = antennas;
        cfg.realizations = realizations;
        cfg.iia_iterations = iters;
        cfg.seed = Seed{seed};
        return cfg;
    }
};

int cmd_fig1(const CommonArgs& args, double power_db, int iterations, bool per_half_step) {
    ExperimentConfig cfg = args.experiment();
    cfg.iia_iterations = iterations;
    write_text(args.out, iia_history_csv(cfg, power_db, per_half_step));
    return 0;
}

int cmd_fig3(const CommonArgs& args, const std::string& snr) {
    ExperimentConfig cfg = args.experiment();
    cfg.snr_grid_db = parse_grid(snr);
    write_text(args.out, experiment_csv(run_experiment(cfg)));
    return 0;
}

int cmd_verify(const CommonArgs& args, const std::string& fixture) {
    double worst_align = 0.0, worst_leak = 0.0;
    int checked = 0;

    auto check_set = [&](const ChannelSet& set) {
        if (set.structure() == Structure::Diagonal) {
            const int n = (set.dim() - 1) / 2;
            const SisoPrecoders pre = build_precoders_siso(p_matrices_siso(set), n);
            worst_align = std::max(worst_align, verify_alignment_siso(set, pre).max_alignment());
            const FilterSet f = receive_filters_siso(set, pre);
            worst_leak = std::max(worst_leak, unit_leakage(set, pre.precoders(), f.U));
        } else {
            const auto p = p_matrices_mimo(set);
            const MimoPrecoders pre = build_precoders_mimo(p[0], p[1], p[2]);
            worst_align = std::max(worst_align, verify_alignment_mimo(set, pre).max_alignment());
            const FilterSet f = receive_filters_mimo(set, pre);
            worst_leak = std::max(worst_leak, unit_leakage(set, pre.precoders(), f.U));
        }
        ++checked;
    };

    if (!fixture.empty()) {
        check_set(channel_set_from_json(read_json(fixture)));
    } else {
        for (int r = 0; r < args.realizations; ++r) {
            const Seed child{split_seed(args.seed, static_cast<std::uint64_t>(r))};
            check_set(args.mode == "mimo" ? sample_mimo(3, args.antennas, child)
                                          : sample_siso_extended(3, args.n, child));
        }
    }

    std::printf("checked %d realization(s): max alignment residual %.3e, max leakage %.3e\n",
                checked, worst_align, worst_leak);
    if (worst_align > 1e-9 || worst_leak > 1e-9) {
        std::fprintf(stderr, "verify: residuals above 1e-9\n");
        return 1;
    }
    return 0;
}

int cmd_protocol_trace(const CommonArgs& args, const std::string& fixture_out) {
    const Seed seed{args.seed};
    OverheadLedger ledger;
    nlohmann::json trace;
    if (args.mode == "mimo") {
        const ChannelSet set = sample_mimo(3, args.antennas, seed);
        const auto res = run_loia_protocol_mimo(set);
        ledger = res.ledger;
        trace = trace_to_json(res.trace);
        if (!fixture_out.empty()) write_json(fixture_out, channel_set_to_json(set));
    } else {
        const ChannelSet set = sample_siso_extended(3, args.n, seed);
        const auto res = run_loia_protocol_siso(set, args.n);
        ledger = res.ledger;
        trace = trace_to_json(res.trace);
        if (!fixture_out.empty()) write_json(fixture_out, channel_set_to_json(set));
    }
    write_text(args.out, trace.dump(2) + "\n");
    std::fprintf(stderr, "training rounds: %d, pilot vectors: %d\n", ledger.training_rounds(),
                 ledger.pilot_vectors_sent());
    for (const auto& ph : ledger.phases)
        std::fprintf(stderr, "  %s: %d round(s), %d pilot vector(s)\n", ph.phase.c_str(), ph.rounds,
                     ph.pilot_vectors);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3-user interference alignment simulator: closed-form distributed construction, "
                 "iterative baseline, and overhead accounting"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file overriding defaults");

    CommonArgs args;

    auto* fig1 = app.add_subcommand("fig1", "leakage-vs-iteration CSV for the iterative baseline");
    args.attach(fig1);
    double power_db = 40.0;
    int fig1_iters = 5000;
    bool per_half = false;
    fig1->add_option("--snr", power_db, "transmit power in dB over the noise floor");
    fig1->add_option("--iterations", fig1_iters, "iteration count for the history");
    fig1->add_flag("--per-half-step", per_half, "emit one row per half-step");

    auto* fig3 = app.add_subcommand("fig3", "sum-rate sweep CSV: LOIA vs IIA vs orthogonal");
    args.attach(fig3);
    std::string snr = "0:60:5";
    fig3->add_option("--snr", snr, "SNR grid in dB, lo:hi:step or comma list");

    auto* verify = app.add_subcommand("verify", "alignment residual suite");
    args.attach(verify);
    std::string fixture;
    verify->add_option("--fixture", fixture, "verify a channel-set JSON fixture instead of sampling");

    auto* ptrace = app.add_subcommand("protocol-trace", "distributed run with knowledge audit");
    args.attach(ptrace);
    std::string fixture_out;
    ptrace->add_option("--export-channels", fixture_out, "also write the channel set as a JSON fixture");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fig1->parsed()) return cmd_fig1(args, power_db, fig1_iters, per_half);
        if (fig3->parsed()) return cmd_fig3(args, snr);
        if (verify->parsed()) return cmd_verify(args, fixture);
        if (ptrace->parsed()) return cmd_protocol_trace(args, fixture_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
