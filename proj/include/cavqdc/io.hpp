// Copyright 2026 The cavqdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * JSON configuration and result records.
 *
 * A configuration is one JSON document with sections
 * {params, round, detector, security, feasibility, sweep}; only
 * params.{g, Omega, Delta, k} are required.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "cavqdc/feasibility.hpp"
#include "cavqdc/protocol.hpp"
#include "cavqdc/security.hpp"

namespace cavqdc::io {

using nlohmann::json;

struct SecuritySettings {
    std::string eve = "intercept-resend-atom-z";
    std::size_t rounds = 100000;
    std::size_t check_rounds = 100000;

    bool operator==(const SecuritySettings&) const = default;
};

struct FeasibilitySettings {
    feasibility::HardwareConstants constants;
    std::size_t mc_rounds = 20000;  ///< per dark-count grid point; 0 disables the Monte-Carlo column

    bool operator==(const FeasibilitySettings&) const = default;
};

struct RunConfig {
    protocol::RoundConfig round;
    std::size_t n_rounds = 10000;
    SecuritySettings security;
    FeasibilitySettings feasibility;
    std::vector<double> sweep_t_window{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& field, const std::string& what) {
    throw Error(Errc::InvalidConfig, field + ": " + what);
}

inline const json* find(const json& doc, const std::string& section, const std::string& key) {
    if (!doc.contains(section)) return nullptr;
    const auto& s = doc.at(section);
    if (!s.is_object()) fail(section, "must be an object");
    if (!s.contains(key) || s.at(key).is_null()) return nullptr;
    return &s.at(key);
}

inline double number(const json& doc, const std::string& section, const std::string& key) {
    const auto* v = find(doc, section, key);
    if (!v) fail(section + "." + key, "missing required field");
    if (!v->is_number()) fail(section + "." + key, "must be a number");
    return v->get<double>();
}

template <typename T>
void optional_field(const json& doc, const std::string& section, const std::string& key, T& out) {
    const auto* v = find(doc, section, key);
    if (!v) return;
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v->is_boolean()) fail(section + "." + key, "must be a boolean");
        } else if constexpr (std::is_arithmetic_v<T>) {
            if (!v->is_number()) fail(section + "." + key, "must be a number");
            if constexpr (std::is_unsigned_v<T>) {
                if (v->is_number_float() || v->get<double>() < 0) fail(section + "." + key, "must be a non-negative integer");
            } else if constexpr (std::is_integral_v<T>) {
                if (v->is_number_float()) fail(section + "." + key, "must be an integer");
            }
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v->is_string()) fail(section + "." + key, "must be a string");
        }
        out = v->get<T>();
    } catch (const json::exception& e) {
        fail(section + "." + key, e.what());
    }
}

}  // namespace detail

/// Parses and validates a configuration document. Errors are InvalidConfig
/// with the offending field named first.
inline RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) detail::fail("<root>", "configuration must be a JSON object");
    RunConfig rc;
    auto& r = rc.round;
    const double g = detail::number(doc, "params", "g");
    const double Omega = detail::number(doc, "params", "Omega");
    const double Delta = detail::number(doc, "params", "Delta");
    const double k = detail::number(doc, "params", "k");
    double gamma = 0.0;
    detail::optional_field(doc, "params", "gamma", gamma);
    try {
        r.params = PhysicalParams(g, Omega, Delta, k, gamma);
    } catch (const Error& e) {
        detail::fail("params", e.what());
    }

    detail::optional_field(doc, "round", "n_receivers", r.n_receivers);
    detail::optional_field(doc, "round", "p_check", r.p_check);
    if (const auto* v = detail::find(doc, "round", "t_map")) {
        if (!v->is_number()) detail::fail("round.t_map", "must be a number or null");
        r.t_map = v->get<double>();
    }
    detail::optional_field(doc, "round", "t_window", r.t_window);
    if (const auto* v = detail::find(doc, "round", "k_window")) {
        if (!v->is_number()) detail::fail("round.k_window", "must be a number or null");
        r.k_window = v->get<double>();
    }
    std::string convention = std::string(protocol::to_string(r.success_convention));
    detail::optional_field(doc, "round", "success_convention", convention);
    const auto conv = protocol::parse_convention(convention);
    if (!conv) detail::fail("round.success_convention", "expected \"survival\" or \"integrated\"");
    r.success_convention = *conv;
    detail::optional_field(doc, "round", "ideal_pnr", r.ideal_pnr);
    detail::optional_field(doc, "round", "seed", r.seed);
    detail::optional_field(doc, "round", "cutoff", r.cutoff);
    detail::optional_field(doc, "round", "n_rounds", rc.n_rounds);

    detail::optional_field(doc, "detector", "efficiency", r.detector.efficiency);
    detail::optional_field(doc, "detector", "dark_prob", r.detector.dark_prob);

    detail::optional_field(doc, "security", "eve", rc.security.eve);
    if (!security::parse_eve(rc.security.eve)) detail::fail("security.eve", "unknown strategy " + rc.security.eve);
    detail::optional_field(doc, "security", "rounds", rc.security.rounds);
    detail::optional_field(doc, "security", "check_rounds", rc.security.check_rounds);

    auto& hw = rc.feasibility.constants;
    detail::optional_field(doc, "feasibility", "t_r", hw.t_r);
    detail::optional_field(doc, "feasibility", "Q", hw.Q);
    detail::optional_field(doc, "feasibility", "t_d", hw.t_d);
    detail::optional_field(doc, "feasibility", "T_d", hw.T_d);
    detail::optional_field(doc, "feasibility", "t1", hw.t1);
    detail::optional_field(doc, "feasibility", "t2", hw.t2);
    detail::optional_field(doc, "feasibility", "mc_rounds", rc.feasibility.mc_rounds);

    if (const auto* v = detail::find(doc, "sweep", "t_window")) {
        if (!v->is_array()) detail::fail("sweep.t_window", "must be an array of numbers");
        rc.sweep_t_window.clear();
        for (const auto& x : *v) {
            if (!x.is_number()) detail::fail("sweep.t_window", "must be an array of numbers");
            rc.sweep_t_window.push_back(x.get<double>());
        }
    }

    try {
        r.validate();
        hw.validate();
    } catch (const Error& e) {
        throw Error(Errc::InvalidConfig, std::string(e.what()).substr(std::string("InvalidConfig: ").size()));
    }
    return rc;
}

inline RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        detail::fail("<parse>", std::string("byte ") + std::to_string(e.byte) + ": " + e.what());
    }
    return parse_config(doc);
}

/// Config echo; re-parses to an equal RunConfig.
inline json to_json(const RunConfig& rc) {
    const auto& r = rc.round;
    json j;
    j["params"] = {{"g", r.params.g()},
                   {"Omega", r.params.Omega()},
                   {"Delta", r.params.Delta()},
                   {"k", r.params.k()},
                   {"gamma", r.params.gamma()}};
    j["round"] = {{"n_receivers", r.n_receivers},
                  {"p_check", r.p_check},
                  {"t_map", r.t_map ? json(*r.t_map) : json(nullptr)},
                  {"t_window", r.t_window},
                  {"k_window", r.k_window ? json(*r.k_window) : json(nullptr)},
                  {"success_convention", protocol::to_string(r.success_convention)},
                  {"ideal_pnr", r.ideal_pnr},
                  {"seed", r.seed},
                  {"cutoff", r.cutoff},
                  {"n_rounds", rc.n_rounds}};
    j["detector"] = {{"efficiency", r.detector.efficiency}, {"dark_prob", r.detector.dark_prob}};
    j["security"] = {{"eve", rc.security.eve}, {"rounds", rc.security.rounds}, {"check_rounds", rc.security.check_rounds}};
    const auto& hw = rc.feasibility.constants;
    j["feasibility"] = {{"t_r", hw.t_r}, {"Q", hw.Q},   {"t_d", hw.t_d},
                        {"T_d", hw.T_d}, {"t1", hw.t1}, {"t2", hw.t2},
                        {"mc_rounds", rc.feasibility.mc_rounds}};
    j["sweep"] = {{"t_window", rc.sweep_t_window}};
    return j;
}

inline json to_json(const protocol::Observation& o) {
    json j;
    if (o.label) {
        j["label"] = protocol::to_string(*o.label);
    } else {
        j["clicks"] = {o.clicks_plus, o.clicks_minus};
    }
    j["bits"] = o.bits;
    return j;
}

/// Per-round log record.
inline json round_record(std::size_t index, const protocol::RoundOutcome& r) {
    json j;
    j["round"] = index;
    j["mode"] = protocol::to_string(r.mode);
    j["sent"] = r.sent ? json(to_string(*r.sent)) : json(nullptr);
    json clicks = json::array();
    for (const auto& e : r.detection.events) clicks.push_back({{"t", e.time}, {"channel", protocol::to_string(e.channel)}});
    j["clicks"] = clicks;
    j["receiver_bits"] = r.receiver_bits;
    j["decoded"] = r.mode == protocol::RoundMode::Encode ? json(protocol::to_string(r.decoded)) : json(nullptr);
    if (r.pnr_label) j["label"] = protocol::to_string(*r.pnr_label);
    if (r.mode == protocol::RoundMode::Encode) j["transfer_lost"] = r.transfer_lost;
    if (r.check) {
        std::string bases;
        for (auto b : r.check->bases) bases += b == protocol::CheckBasis::X ? 'x' : 'y';
        j["check"] = {{"bases", bases},
                      {"outcomes", r.check->outcomes},
                      {"conclusive", r.check->conclusive},
                      {"passed", !r.check->violation}};
    }
    return j;
}

inline json to_json(const protocol::BatchStats& s) {
    json j;
    j["n_rounds"] = s.n_rounds;
    j["encode_rounds"] = s.encode_rounds;
    j["check_rounds"] = s.check_rounds;
    j["success_rate"] = s.success_rate();
    j["abort_rate"] = s.abort_rate();
    j["confusion"] = s.confusion;
    j["check_pass_rate"] = s.check_pass_rate();
    j["convention"] = protocol::to_string(s.convention);
    j["formula"] = s.formula;
    j["psi_rounds"] = s.psi_rounds;
    j["mc_estimate"] = s.mc_estimate();
    j["mc_stderr"] = s.mc_stderr();
    return j;
}

inline json to_json(const protocol::DecodeTable& table, const protocol::OutcomeModel& model) {
    json rows = json::array();
    for (const auto& [obs, d] : table.entries()) {
        json row = to_json(obs);
        row["decoded"] = protocol::to_string(d);
        json lk;
        for (Message m : kAllMessages) lk[std::string(to_string(m))] = model.likelihood(m, obs);
        row["likelihood"] = lk;
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const std::vector<feasibility::RegimeCheck>& regime) {
    json a = json::array();
    for (const auto& c : regime)
        a.push_back({{"name", c.name},
                     {"value", c.value},
                     {"threshold", c.threshold},
                     {"relation", c.at_most ? "<=" : ">="},
                     {"pass", c.pass}});
    return a;
}

inline json to_json(const feasibility::TimescaleReport& ts) {
    json rows = json::array();
    for (const auto& r : ts.rows) rows.push_back({{"name", r.name}, {"duration", r.duration}, {"limit", r.limit}, {"pass", r.pass}});
    return {{"quoted_transfer", ts.quoted_transfer}, {"computed_transfer", ts.computed_transfer},
            {"window", ts.window},                   {"quoted_total", ts.quoted_total},
            {"computed_total", ts.computed_total},   {"transfer_discrepancy", ts.transfer_discrepancy},
            {"comparisons", rows}};
}

inline json to_json(const feasibility::DarkCountSweep& sweep) {
    json rows = json::array();
    for (const auto& r : sweep.rows) {
        rows.push_back({{"dark_prob", r.dark_prob},
                        {"exact_fidelity", r.exact_fidelity},
                        {"exact_drop", r.exact_drop},
                        {"mc_fidelity", r.mc_fidelity ? json(*r.mc_fidelity) : json(nullptr)},
                        {"mc_stderr", r.mc_stderr ? json(*r.mc_stderr) : json(nullptr)}});
    }
    return {{"rows", rows},
            {"band", {0.05, 0.10}},
            {"band_low", sweep.band_low ? json(*sweep.band_low) : json(nullptr)},
            {"band_high", sweep.band_high ? json(*sweep.band_high) : json(nullptr)}};
}

}  // namespace cavqdc::io
