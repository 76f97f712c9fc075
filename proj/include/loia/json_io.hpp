#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "loia/channel.hpp"
#include "loia/errors.hpp"
#include "loia/protocol.hpp"

namespace loia {

inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json rrow = nlohmann::json::array();
        nlohmann::json irow = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(rrow);
        im.push_back(irow);
    }
    return {{"re", re}, {"im", im}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const Eigen::Index rows = static_cast<Eigen::Index>(re.size());
    const Eigen::Index cols = rows ? static_cast<Eigen::Index>(re[0].size()) : 0;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = Complex(re[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>(),
                              im[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>());
    return m;
}

inline nlohmann::json channel_set_to_json(const ChannelSet& set) {
    nlohmann::json mats = nlohmann::json::array();
    for (int rx = 1; rx <= set.users(); ++rx)
        for (int tx = 1; tx <= set.users(); ++tx) {
            nlohmann::json entry = matrix_to_json(set.link(rx, tx));
            entry["rx"] = rx;
            entry["tx"] = tx;
            mats.push_back(entry);
        }
    return {{"K", set.users()},
            {"M", set.dim()},
            {"structure", set.structure() == Structure::Diagonal ? "diagonal" : "dense"},
            {"seed", set.seed().value},
            {"matrices", mats}};
}

inline ChannelSet channel_set_from_json(const nlohmann::json& j) {
    const int users = j.at("K").get<int>();
    const int dim = j.at("M").get<int>();
    const std::string s = j.at("structure").get<std::string>();
    if (s != "diagonal" && s != "dense")
        throw ParameterError("channel_set_from_json: unknown structure '" + s + "'");
    ChannelSet set(users, dim, s == "diagonal" ? Structure::Diagonal : Structure::Dense,
                   Seed{j.at("seed").get<std::uint64_t>()});
    for (const auto& entry : j.at("matrices"))
        set.set_link(entry.at("rx").get<int>(), entry.at("tx").get<int>(), matrix_from_json(entry));
    return set;
}

// Named matrix collections (precoder / filter fixtures) share the schema.
inline nlohmann::json matrices_to_json(const std::vector<std::pair<std::string, Matrix>>& mats) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [name, m] : mats) {
        nlohmann::json entry = matrix_to_json(m);
        entry["name"] = name;
        arr.push_back(entry);
    }
    return {{"matrices", arr}};
}

inline nlohmann::json trace_to_json(const std::vector<TraceEvent>& trace) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& ev : trace)
        arr.push_back({{"step", ev.step},
                       {"node", ev.node},
                       {"action", ev.action},
                       {"matrices_read", ev.matrices_read},
                       {"matrices_written", ev.matrices_written}});
    return arr;
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

inline nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return nlohmann::json::parse(in);
}

}  // namespace loia
