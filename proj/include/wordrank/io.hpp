#ifndef WORDRANK_IO_HPP
#define WORDRANK_IO_HPP

#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "wordrank/asymptotics.hpp"
#include "wordrank/chain.hpp"
#include "wordrank/common.hpp"
#include "wordrank/regime.hpp"
#include "wordrank/spectral.hpp"

namespace wordrank {

// Chain-spec file format: an object with
//   n       number of non-absorbing states,
//   matrix  (n+1) x (n+1) row-stochastic transition matrix, row 0 absorbing,
//   initial n probabilities for states 1..n (the deficit starts absorbed),
//   labels  optional n+1 state names, index 0 being the absorbing state.
inline ChainSpec chain_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw IoError("chain spec must be a JSON object");
    if (!j.contains("n") || !j["n"].is_number_unsigned())
        throw IoError("chain spec needs an unsigned field 'n'");
    ChainSpec spec;
    spec.n = j["n"].get<std::size_t>();

    if (!j.contains("matrix") || !j["matrix"].is_array() || j["matrix"].size() != spec.n + 1)
        throw IoError("'matrix' must be an array of n+1 rows");
    spec.p0 = Matrix(spec.n + 1, spec.n + 1);
    for (std::size_t i = 0; i <= spec.n; ++i) {
        const auto& row = j["matrix"][i];
        if (!row.is_array() || row.size() != spec.n + 1)
            throw IoError("matrix row " + std::to_string(i) + " must have n+1 entries");
        for (std::size_t k = 0; k <= spec.n; ++k) {
            if (!row[k].is_number())
                throw IoError("matrix entry [" + std::to_string(i) + "][" + std::to_string(k) +
                              "] is not a number");
            spec.p0(i, k) = row[k].get<double>();
        }
    }

    if (!j.contains("initial") || !j["initial"].is_array() || j["initial"].size() != spec.n)
        throw IoError("'initial' must be an array of n entries");
    spec.initial.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        if (!j["initial"][i].is_number())
            throw IoError("initial entry " + std::to_string(i) + " is not a number");
        spec.initial[i] = j["initial"][i].get<double>();
    }

    if (j.contains("labels")) {
        if (!j["labels"].is_array() || j["labels"].size() != spec.n + 1)
            throw IoError("'labels' must list n+1 names (index 0 = absorbing state)");
        spec.labels.resize(spec.n + 1);
        for (std::size_t i = 0; i <= spec.n; ++i) spec.labels[i] = j["labels"][i].get<std::string>();
    }
    return spec;
}

inline nlohmann::json chain_to_json(const ChainSpec& spec) {
    nlohmann::json j;
    j["n"] = spec.n;
    j["matrix"] = nlohmann::json::array();
    for (std::size_t i = 0; i <= spec.n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k <= spec.n; ++k) row.push_back(spec.p0(i, k));
        j["matrix"].push_back(std::move(row));
    }
    j["initial"] = spec.initial;
    if (!spec.labels.empty()) j["labels"] = spec.labels;
    return j;
}

inline ChainSpec load_chain(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("cannot parse chain spec: ") + e.what());
    }
    return chain_from_json(j);
}

inline ChainSpec load_chain(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    return load_chain(f);
}

inline nlohmann::json validation_to_json(const ValidationReport& report) {
    nlohmann::json j;
    j["ok"] = report.ok();
    j["errors"] = nlohmann::json::array();
    j["warnings"] = nlohmann::json::array();
    for (const auto& issue : report.issues) {
        if (issue.severity == IssueSeverity::Error)
            j["errors"].push_back(issue.message);
        else
            j["warnings"].push_back(issue.message);
    }
    return j;
}

inline nlohmann::json rate_to_json(const RateParameters& rate, const ChainSpec& spec) {
    nlohmann::json j;
    j["nu"] = rate.nu;
    j["inv_nu"] = rate.inv_nu;
    j["alpha"] = rate.alpha;
    j["cycles"] = nlohmann::json::array();
    for (const auto& e : rate.table) {
        nlohmann::json c;
        c["states"] = nlohmann::json::array();
        for (std::size_t s : e.states) c["states"].push_back(spec.label(s));
        c["weight"] = e.weight;
        c["k"] = e.k;
        c["contribution"] = e.contribution;
        j["cycles"].push_back(std::move(c));
    }
    return j;
}

inline nlohmann::json regime_to_json(const RegimeReport& report, const ChainSpec& spec) {
    nlohmann::json j;
    j["regime"] = regime_name(report.regime);
    if (report.beta) j["beta"] = *report.beta;
    if (report.exact_order) j["exact_order"] = *report.exact_order;
    if (report.nu) j["nu"] = *report.nu;
    if (report.alpha) j["alpha"] = *report.alpha;
    if (report.rate) j["rate"] = rate_to_json(*report.rate, spec);
    if (report.shared_cycle_vertex)
        j["shared_cycle_vertex"] = spec.label(*report.shared_cycle_vertex);
    if (!report.critical_components.empty()) {
        j["critical_components"] = nlohmann::json::array();
        for (const auto& comp : report.critical_components) {
            nlohmann::json states = nlohmann::json::array();
            for (std::size_t s : comp) states.push_back(spec.label(s));
            j["critical_components"].push_back(std::move(states));
        }
    }
    if (!report.max_weight_cycle.empty()) {
        j["max_weight_cycle"] = nlohmann::json::array();
        for (std::size_t s : report.max_weight_cycle) j["max_weight_cycle"].push_back(spec.label(s));
    }
    j["warnings"] = report.warnings;
    return j;
}

inline nlohmann::json fit_to_json(const FitResult& fit) {
    nlohmann::json j;
    j["model"] = fit.model == FitResult::Model::Power ? "power" : "exponential";
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["t_min"] = fit.t_min;
    j["t_max"] = fit.t_max;
    j["residual"] = fit.residual;
    j["samples"] = fit.samples;
    return j;
}

}  // namespace wordrank

#endif  // WORDRANK_IO_HPP
