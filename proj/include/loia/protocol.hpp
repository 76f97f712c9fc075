#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loia/channel.hpp"
#include "loia/errors.hpp"
#include "loia/filters.hpp"
#include "loia/mimo.hpp"
#include "loia/rng.hpp"
#include "loia/siso.hpp"

namespace loia {

enum class Provenance { LocalEstimation, TrainingObservation, Predefined };

// A node's knowledge set. Every matrix a protocol step consumes must be read
// through get(), which throws if the node never legitimately obtained it.
class Node {
public:
    Node() = default;
    explicit Node(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }

    void learn(const std::string& label, Matrix m, Provenance p) {
        known_[label] = std::move(m);
        provenance_[label] = p;
    }

    bool knows(const std::string& label) const { return known_.count(label) > 0; }

    const Matrix& get(const std::string& label, const std::string& step) const {
        auto it = known_.find(label);
        if (it == known_.end())
            throw ProtocolError("knowledge violation: node " + name_ + " at step '" + step +
                                "' read " + label + " which it does not know");
        return it->second;
    }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        for (const auto& [l, m] : known_) out.push_back(l);
        return out;
    }

private:
    std::string name_;
    std::map<std::string, Matrix> known_;
    std::map<std::string, Provenance> provenance_;
};

struct TraceEvent {
    std::string step;
    std::string node;
    std::string action;
    std::vector<std::string> matrices_read;
    std::vector<std::string> matrices_written;
};

struct OverheadLedger {
    struct PhaseEntry {
        std::string phase;
        int rounds = 0;
        int pilot_vectors = 0;
    };
    std::vector<PhaseEntry> phases;

    int training_rounds() const {
        int n = 0;
        for (const auto& p : phases) n += p.rounds;
        return n;
    }
    int pilot_vectors_sent() const {
        int n = 0;
        for (const auto& p : phases) n += p.pilot_vectors;
        return n;
    }
};

struct ProtocolOptions {
    // When set, every trained matrix is perturbed with complex Gaussian noise
    // at this pilot SNR (dB); default is exact transfer.
    std::optional<double> pilot_snr_db;
    Seed noise_seed{0};
};

template <typename PrecoderT>
struct ProtocolResult {
    PrecoderT precoders;
    FilterSet filters;
    OverheadLedger ledger;
    std::vector<TraceEvent> trace;
    std::map<std::string, Node> nodes;  // final knowledge, for audits
};

namespace detail {

class ProtocolRun {
public:
    explicit ProtocolRun(const ChannelSet& set, const ProtocolOptions& opt)
        : set_(set), opt_(opt), rng_(opt.noise_seed) {
        for (int i = 1; i <= set.users(); ++i) {
            nodes_.emplace("TX" + std::to_string(i), Node("TX" + std::to_string(i)));
            nodes_.emplace("RX" + std::to_string(i), Node("RX" + std::to_string(i)));
        }
    }

    Node& node(const std::string& name) { return nodes_.at(name); }

    // Phase I: RX k estimates its own incoming links, nothing else.
    void phase1() {
        for (int k = 1; k <= set_.users(); ++k) {
            TraceEvent ev{"phase1", rx(k), "estimate incoming channels", {}, {}};
            for (int j = 1; j <= set_.users(); ++j) {
                const std::string label = h_label(k, j);
                node(rx(k)).learn(label, set_.link(k, j), Provenance::LocalEstimation);
                ev.matrices_written.push_back(label);
            }
            trace_.push_back(ev);
        }
        ledger_.phases.push_back({"phase1-pilots", 1, set_.users() * set_.dim()});
    }

    // Step 2 / step 4 training: the sender's matrix becomes known at every
    // listed destination (exact by default, noisy if configured).
    void train(const std::string& step, const std::string& from, const std::string& label,
               const std::vector<std::string>& to) {
        const Matrix& m = node(from).get(label, step);
        const Matrix sent = perturb(m);
        TraceEvent ev{step, from, "send pilots along " + label, {label}, {}};
        trace_.push_back(ev);
        for (const auto& dest : to) {
            node(dest).learn(label, sent, Provenance::TrainingObservation);
            trace_.push_back({step, dest, "observe " + label, {}, {label}});
        }
    }

    void add_round(const std::string& phase, int pilot_vectors) {
        ledger_.phases.push_back({phase, 1, pilot_vectors});
    }

    void record(TraceEvent ev) { trace_.push_back(std::move(ev)); }

    const ChannelSet& channels() const { return set_; }
    OverheadLedger ledger() const { return ledger_; }
    std::vector<TraceEvent> trace() const { return trace_; }
    std::map<std::string, Node> nodes() const { return nodes_; }

    static std::string tx(int i) { return "TX" + std::to_string(i); }
    static std::string rx(int i) { return "RX" + std::to_string(i); }
    static std::string h_label(int k, int j) {
        return "H[" + std::to_string(k) + std::to_string(j) + "]";
    }

private:
    Matrix perturb(const Matrix& m) {
        if (!opt_.pilot_snr_db) return m;
        const double sigma =
            m.norm() / std::sqrt(static_cast<double>(m.size())) * std::pow(10.0, -*opt_.pilot_snr_db / 20.0);
        return m + sigma * rng_.cgauss_matrix(m.rows(), m.cols());
    }

    const ChannelSet& set_;
    ProtocolOptions opt_;
    Rng rng_;
    std::map<std::string, Node> nodes_;
    std::vector<TraceEvent> trace_;
    OverheadLedger ledger_;
};

inline Matrix protocol_filter(ProtocolRun& run, int k, int observed_tx) {
    const std::string label = ProtocolRun::h_label(k, observed_tx) + "V[" + std::to_string(observed_tx) + "]";
    const Matrix& eff = run.node(ProtocolRun::rx(k)).get(label, "step4");
    run.record({"step4", ProtocolRun::rx(k), "compute U[" + std::to_string(k) + "]", {label}, {"U[" + std::to_string(k) + "]"}});
    return null_filter(eff);
}

}  // namespace detail

// Full three-phase distributed run for the SISO construction. In exact mode
// the outputs are bit-identical to the centralized pipeline.
inline ProtocolResult<SisoPrecoders> run_loia_protocol_siso(const ChannelSet& set, int n,
                                                            const ProtocolOptions& opt = {}) {
    using PR = detail::ProtocolRun;
    if (set.structure() != Structure::Diagonal)
        throw ParameterError("run_loia_protocol_siso: needs a diagonal channel set");
    PR run(set, opt);
    run.phase1();

    // Step 1: each RX forms its own P from channels it estimated itself.
    struct Ratio {
        int rx, num_tx, den_tx;
    };
    const Ratio defs[3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
    for (int i = 0; i < 3; ++i) {
        const auto& d = defs[i];
        const std::string step = "step1";
        const Matrix num = run.node(PR::rx(d.rx)).get(PR::h_label(d.rx, d.num_tx), step);
        const Matrix den = run.node(PR::rx(d.rx)).get(PR::h_label(d.rx, d.den_tx), step);
        Vector p(num.rows());
        for (Eigen::Index m = 0; m < p.size(); ++m) p(m) = num(m, m) / den(m, m);
        const std::string plabel = "P" + std::to_string(i + 1);
        run.node(PR::rx(d.rx)).learn(plabel, Matrix(p.asDiagonal()), Provenance::LocalEstimation);
        run.record({step, PR::rx(d.rx), "compute " + plabel,
                    {PR::h_label(d.rx, d.num_tx), PR::h_label(d.rx, d.den_tx)},
                    {plabel}});
    }

    // Step 2: RX -> TX training conveys P1, P2, P3 to every TX.
    const std::vector<std::string> all_tx = {PR::tx(1), PR::tx(2), PR::tx(3)};
    for (int i = 1; i <= 3; ++i)
        run.train("step2", PR::rx(i), "P" + std::to_string(i), all_tx);
    run.add_round("step2-pilots", 3 * set.dim());

    // Step 3: each TX builds its precoder from {P1, P2, P3, w} only. Every TX
    // runs the same arithmetic, so the shared pieces (T, Krylov columns) are
    // bit-identical across nodes.
    SisoPrecoders pre;
    for (int i = 1; i <= 3; ++i) {
        const std::string step = "step3";
        Node& tx = run.node(PR::tx(i));
        const Vector p1 = tx.get("P1", step).diagonal();
        const Vector p2 = tx.get("P2", step).diagonal();
        const Vector p3 = tx.get("P3", step).diagonal();
        const SisoPrecoders local = build_precoders_siso(p1, p2, p3, n);
        const std::string vlabel = "V[" + std::to_string(i) + "]";
        const Matrix v = (i == 1) ? local.V1 : (i == 2) ? local.V2 : local.V3;
        tx.learn(vlabel, v, Provenance::LocalEstimation);
        run.record({step, PR::tx(i), "compute " + vlabel, {"P1", "P2", "P3"}, {vlabel}});
        if (i == 1) pre = local;
    }
    pre.V2 = run.node(PR::tx(2)).get("V[2]", "collect");
    pre.V3 = run.node(PR::tx(3)).get("V[3]", "collect");

    // Step 4: TX -> RX training; RX k observes the effective matrices H^[kj]V^[j].
    for (int j = 1; j <= 3; ++j) {
        const std::string vlabel = "V[" + std::to_string(j) + "]";
        run.record({"step4", PR::tx(j), "send pilots along " + vlabel, {vlabel}, {}});
        const Matrix& v = run.node(PR::tx(j)).get(vlabel, "step4");
        for (int k = 1; k <= 3; ++k) {
            if (k == j) continue;
            const std::string label = PR::h_label(k, j) + vlabel;
            run.node(PR::rx(k)).learn(label, set.link(k, j) * v, Provenance::TrainingObservation);
            run.record({"step4", PR::rx(k), "observe " + label, {}, {label}});
        }
    }
    run.add_round("step4-pilots", (n + 1) + n + n);

    FilterSet filters;
    filters.U.push_back(detail::protocol_filter(run, 1, 2));
    filters.U.push_back(detail::protocol_filter(run, 2, 1));
    filters.U.push_back(detail::protocol_filter(run, 3, 1));

    return {pre, filters, run.ledger(), run.trace(), run.nodes()};
}

// Distributed run for the MIMO construction.
inline ProtocolResult<MimoPrecoders> run_loia_protocol_mimo(const ChannelSet& set,
                                                            const ProtocolOptions& opt = {}) {
    using PR = detail::ProtocolRun;
    if (set.structure() != Structure::Dense)
        throw ParameterError("run_loia_protocol_mimo: needs a dense channel set");
    PR run(set, opt);
    run.phase1();

    struct Solve {
        int rx, lhs_tx, rhs_tx;
    };
    const Solve defs[3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
    for (int i = 0; i < 3; ++i) {
        const auto& d = defs[i];
        const std::string step = "step1";
        const Matrix& lhs = run.node(PR::rx(d.rx)).get(PR::h_label(d.rx, d.lhs_tx), step);
        const Matrix& rhs = run.node(PR::rx(d.rx)).get(PR::h_label(d.rx, d.rhs_tx), step);
        if (condition_number(lhs) > 1e8)
            throw SingularityError("run_loia_protocol_mimo: ill-conditioned link at RX" +
                                   std::to_string(d.rx));
        const std::string plabel = "P" + std::to_string(i + 1);
        run.node(PR::rx(d.rx)).learn(plabel, lhs.partialPivLu().solve(rhs), Provenance::LocalEstimation);
        run.record({step, PR::rx(d.rx), "compute " + plabel,
                    {PR::h_label(d.rx, d.lhs_tx), PR::h_label(d.rx, d.rhs_tx)},
                    {plabel}});
    }

    const std::vector<std::string> all_tx = {PR::tx(1), PR::tx(2), PR::tx(3)};
    for (int i = 1; i <= 3; ++i)
        run.train("step2", PR::rx(i), "P" + std::to_string(i), all_tx);
    run.add_round("step2-pilots", 3 * set.dim());

    MimoPrecoders pre;
    for (int i = 1; i <= 3; ++i) {
        const std::string step = "step3";
        Node& tx = run.node(PR::tx(i));
        const MimoPrecoders local =
            build_precoders_mimo(tx.get("P1", step), tx.get("P2", step), tx.get("P3", step));
        const std::string vlabel = "V[" + std::to_string(i) + "]";
        const Matrix v = (i == 1) ? local.V1 : (i == 2) ? local.V2 : local.V3;
        tx.learn(vlabel, v, Provenance::LocalEstimation);
        run.record({step, PR::tx(i), "compute " + vlabel, {"P1", "P2", "P3"}, {vlabel}});
        if (i == 1) pre = local;
    }
    pre.V2 = run.node(PR::tx(2)).get("V[2]", "collect");
    pre.V3 = run.node(PR::tx(3)).get("V[3]", "collect");

    for (int j = 1; j <= 3; ++j) {
        const std::string vlabel = "V[" + std::to_string(j) + "]";
        run.record({"step4", PR::tx(j), "send pilots along " + vlabel, {vlabel}, {}});
        const Matrix& v = run.node(PR::tx(j)).get(vlabel, "step4");
        for (int k = 1; k <= 3; ++k) {
            if (k == j) continue;
            const std::string label = PR::h_label(k, j) + vlabel;
            run.node(PR::rx(k)).learn(label, set.link(k, j) * v, Provenance::TrainingObservation);
            run.record({"step4", PR::rx(k), "observe " + label, {}, {label}});
        }
    }
    run.add_round("step4-pilots", 3 * (set.dim() / 2));

    FilterSet filters;
    filters.U.push_back(detail::protocol_filter(run, 1, 2));
    filters.U.push_back(detail::protocol_filter(run, 2, 1));
    filters.U.push_back(detail::protocol_filter(run, 3, 1));

    return {pre, filters, run.ledger(), run.trace(), run.nodes()};
}

// Training cost of the iterative baseline: one forward and one reverse pilot
// round per iteration, d pilot vectors per node per round.
inline OverheadLedger iia_overhead(int iterations, int users, int /*antennas*/, int streams) {
    if (iterations < 0) throw ParameterError("iia_overhead: iterations must be >= 0");
    OverheadLedger ledger;
    for (int it = 1; it <= iterations; ++it) {
        ledger.phases.push_back({"iter" + std::to_string(it) + "-forward", 1, users * streams});
        ledger.phases.push_back({"iter" + std::to_string(it) + "-reverse", 1, users * streams});
    }
    return ledger;
}

}  // namespace loia
