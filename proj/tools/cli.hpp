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
 * Command-line front end. Subcommands: run, batch, sweep, security,
 * feasibility, decode-table. Exit codes: 0 success, 2 configuration error,
 * 3 internal invariant violation.
 */

#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cavqdc/feasibility.hpp"
#include "cavqdc/io.hpp"
#include "cavqdc/protocol.hpp"
#include "cavqdc/security.hpp"

namespace cavqdc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInternal = 3;

using io::json;

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> rounds;
    unsigned threads = 1;
    std::string out_dir;
    std::string message = "random";
    std::optional<std::string> convention;
    std::optional<std::string> eve;
    std::optional<double> p_check;
    std::string t_windows;
    bool paper_constants = false;
    bool log_rounds = false;
};

/// Files written under --out, recorded in manifest.json.
class Outputs {
public:
    Outputs(std::string dir, std::string subcommand, std::string config_path, std::uint64_t seed)
        : dir_(std::move(dir)), subcommand_(std::move(subcommand)), config_path_(std::move(config_path)), seed_(seed) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    bool enabled() const { return !dir_.empty(); }

    void write(const std::string& name, const std::string& content) {
        if (!enabled()) return;
        std::ofstream f(std::filesystem::path(dir_) / name, std::ios::binary);
        f << content;
        files_.push_back(name);
    }

    void finish() {
        if (!enabled()) return;
        json m = {{"subcommand", subcommand_}, {"config", config_path_}, {"out", dir_}, {"seed", seed_}};
        auto files = files_;
        files.push_back("manifest.json");
        m["files"] = files;
        std::ofstream f(std::filesystem::path(dir_) / "manifest.json", std::ios::binary);
        f << m.dump() << '\n';
    }

private:
    std::string dir_, subcommand_, config_path_;
    std::uint64_t seed_;
    std::vector<std::string> files_;
};

namespace detail {

inline io::RunConfig load(const Options& o) {
    io::RunConfig rc;
    if (!o.config_path.empty()) {
        std::ifstream f(o.config_path);
        if (!f) throw Error(Errc::InvalidConfig, "--config: cannot open " + o.config_path);
        std::stringstream ss;
        ss << f.rdbuf();
        rc = io::parse_config_text(ss.str());
    }
    if (o.seed) rc.round.seed = *o.seed;
    if (o.rounds) {
        if (*o.rounds < 1) throw Error(Errc::InvalidConfig, "--rounds: must be >= 1");
        rc.n_rounds = *o.rounds;
        rc.security.rounds = *o.rounds;
        rc.security.check_rounds = *o.rounds;
    }
    if (o.convention) {
        const auto c = protocol::parse_convention(*o.convention);
        if (!c) throw Error(Errc::InvalidConfig, "--convention: expected survival or integrated");
        rc.round.success_convention = *c;
    }
    if (o.eve) {
        if (!security::parse_eve(*o.eve)) throw Error(Errc::InvalidConfig, "--eve: unknown strategy " + *o.eve);
        rc.security.eve = *o.eve;
    }
    if (o.p_check) rc.round.p_check = *o.p_check;
    if (!o.t_windows.empty()) {
        rc.sweep_t_window.clear();
        std::stringstream ss(o.t_windows);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                rc.sweep_t_window.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw Error(Errc::InvalidConfig, "--t-window: not a number: " + item);
            }
        }
    }
    rc.round.validate();
    return rc;
}

inline protocol::MessageChoice message_choice(const std::string& s) {
    if (s == "random") return protocol::MessageChoice::uniform();
    protocol::MessageChoice c{{}};
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto m = parse_message(item);
        if (!m) throw Error(Errc::InvalidConfig, "--message: expected I, X, iY, Z or random, got " + item);
        c.candidates.push_back(*m);
    }
    if (c.candidates.empty()) throw Error(Errc::InvalidConfig, "--message: empty");
    return c;
}

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline int cmd_round(const Options& o, std::ostream& out) {
    const auto rc = detail::load(o);
    const auto choice = detail::message_choice(o.message);
    auto rng = derive_stream(rc.round.seed, 0);
    const auto r = protocol::run_round(rc.round, choice, rng);
    const auto line = io::round_record(0, r).dump() + "\n";
    out << line;
    Outputs files(o.out_dir, "run", o.config_path, rc.round.seed);
    files.write("round.jsonl", line);
    files.finish();
    return kExitOk;
}

inline int cmd_batch(const Options& o, std::ostream& out) {
    const auto rc = detail::load(o);
    protocol::BatchOptions opts;
    opts.messages = detail::message_choice(o.message);
    opts.threads = o.threads;
    opts.keep_rounds = o.log_rounds;
    const auto start = std::chrono::steady_clock::now();
    const auto res = protocol::run_batch(rc.round, rc.n_rounds, rc.round.seed, opts);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json summary = io::to_json(res.stats);
    summary["config"] = io::to_json(rc);
    summary["wall_time_s"] = nullptr;
    Outputs files(o.out_dir, "batch", o.config_path, rc.round.seed);
    files.write("summary.json", summary.dump() + "\n");
    if (o.log_rounds) {
        std::string log;
        for (std::size_t i = 0; i < res.rounds.size(); ++i) log += io::round_record(i, res.rounds[i]).dump() + "\n";
        files.write("rounds.jsonl", log);
        if (!files.enabled()) out << log;
    }
    files.finish();
    summary["wall_time_s"] = wall;
    out << summary.dump() << '\n';
    return kExitOk;
}

inline std::string sweep_csv(const io::RunConfig& rc, unsigned threads) {
    std::string csv = "t_window,formula_survival,formula_integrated,mc_estimate,mc_stderr\n";
    for (std::size_t i = 0; i < rc.sweep_t_window.size(); ++i) {
        auto cfg = rc.round;
        cfg.t_window = rc.sweep_t_window[i];
        cfg.p_check = 0.0;
        cfg.validate();
        auto survival = cfg;
        survival.success_convention = protocol::SuccessConvention::Survival;
        auto integrated = cfg;
        integrated.success_convention = protocol::SuccessConvention::Integrated;
        protocol::BatchOptions opts;
        opts.messages = protocol::MessageChoice::psi_branch();
        opts.threads = threads;
        const auto st = protocol::run_batch(cfg, rc.n_rounds, rc.round.seed + i, opts).stats;
        csv += detail::fmt17(cfg.t_window) + "," + detail::fmt17(protocol::success_probability_formula(survival)) + "," +
               detail::fmt17(protocol::success_probability_formula(integrated)) + "," +
               detail::fmt17(st.mc_estimate()) + "," + detail::fmt17(st.mc_stderr()) + "\n";
    }
    return csv;
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
    const auto rc = detail::load(o);
    if (rc.sweep_t_window.empty()) throw Error(Errc::InvalidConfig, "sweep.t_window: grid is empty");
    for (double t : rc.sweep_t_window) {
        if (!(std::isfinite(t) && t > 0.0)) throw Error(Errc::InvalidConfig, "sweep.t_window: entries must be > 0");
    }
    const auto csv = sweep_csv(rc, o.threads);
    out << csv;
    Outputs files(o.out_dir, "sweep", o.config_path, rc.round.seed);
    files.write("sweep.csv", csv);
    files.finish();
    return kExitOk;
}

inline json security_report(const io::RunConfig& rc, unsigned threads) {
    using namespace security;
    const auto& cfg = rc.round;
    const protocol::OutcomeModel model(cfg);
    const std::vector<Message> all{Message::I, Message::X, Message::iY, Message::Z};
    const std::vector<Message> psi{Message::X, Message::iY};
    const auto seed = cfg.seed;
    const auto bob = cheat_experiment(ViewSpec::bob_alone(), cfg, psi, rc.security.rounds, seed, threads);
    const auto charlie = cheat_experiment(ViewSpec::charlie_alone(), cfg, all, rc.security.rounds, seed + 1, threads);
    const auto collab = cheat_experiment(ViewSpec::collaboration(cfg), cfg, psi, rc.security.rounds, seed + 2, threads);
    const auto eve = *parse_eve(rc.security.eve);
    const auto eav = eavesdrop_experiment(eve, cfg, rc.security.check_rounds, seed + 3, threads);

    json s;
    s["bob_alone"] = bob.clicked.rate();
    s["bob_alone_stderr"] = bob.clicked.standard_error();
    s["bob_alone_unconditioned"] = bob.all.rate();
    s["charlie_alone"] = charlie.all.rate();
    s["charlie_alone_stderr"] = charlie.all.standard_error();
    s["collaboration"] = collab.clicked.rate();
    s["collaboration_stderr"] = collab.clicked.standard_error();
    s["bob_composite"] = 1.0 - charlie.all.rate();
    s["exact"] = {{"charlie_alone", optimal_guess_rate(model, ViewSpec::charlie_alone(), prior_over(all))},
                  {"bob_composite", 1.0 - optimal_guess_rate(model, ViewSpec::charlie_alone(), prior_over(all))}};
    s["eve"] = rc.security.eve;
    s["eve_detection_rate"] = eav.detection_rate();
    s["eve_detection_stderr"] = eav.detection_stderr();
    s["eve_conclusive_rounds"] = eav.conclusive_rounds;
    if (eve.strategy != EveStrategy::InterceptResendPhoton) s["exact"]["eve_detection_rate"] = exact_detection_rate(eve, cfg);
    return {{"security", s}, {"config", io::to_json(rc)}};
}

inline int cmd_security(const Options& o, std::ostream& out) {
    const auto rc = detail::load(o);
    const auto line = security_report(rc, o.threads).dump() + "\n";
    out << line;
    Outputs files(o.out_dir, "security", o.config_path, rc.round.seed);
    files.write("security.json", line);
    files.finish();
    return kExitOk;
}

inline int cmd_feasibility(const Options& o, std::ostream& out) {
    auto rc = detail::load(o);
    const auto& hw = rc.feasibility.constants;
    const PhysicalParams params = o.paper_constants ? feasibility::quoted_params(hw) : rc.round.params;
    const auto regime = feasibility::regime_report(params);
    const auto ts = feasibility::timescale_report(params, hw);

    auto base = o.paper_constants ? feasibility::quoted_round_config(hw) : rc.round;
    const auto dark = feasibility::dark_count_sweep(base, feasibility::default_dark_grid(), rc.feasibility.mc_rounds,
                                                    rc.round.seed, o.threads);
    std::ostringstream text;
    feasibility::print_report(text, regime, ts);
    text << "dark counts (fidelity drop in [5%, 10%]): ";
    if (dark.band_low) {
        text << "p_dc in [" << *dark.band_low << ", " << *dark.band_high << "]\n";
    } else {
        text << "no grid point in band\n";
    }
    json j = {{"units", "MHz values are angular (1 MHz = 1e6 rad/s)"},
              {"regime", io::to_json(regime)},
              {"timescales", io::to_json(ts)},
              {"dark_counts", io::to_json(dark)}};
    out << text.str() << j.dump() << '\n';
    Outputs files(o.out_dir, "feasibility", o.config_path, rc.round.seed);
    files.write("feasibility.txt", text.str());
    files.write("feasibility.json", j.dump() + "\n");
    files.finish();
    return kExitOk;
}

inline int cmd_decode_table(const Options& o, std::ostream& out) {
    const auto rc = detail::load(o);
    const protocol::OutcomeModel model(rc.round);
    const protocol::DecodeTable table(model);
    std::string lines;
    for (const auto& row : io::to_json(table, model)) lines += row.dump() + "\n";
    out << lines;
    Outputs files(o.out_dir, "decode-table", o.config_path, rc.round.seed);
    files.write("decode_table.jsonl", lines);
    files.finish();
    return kExitOk;
}

/// Parses argv-style arguments and dispatches. Never throws.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Secure quantum dense coding via cavity decay: simulator"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON configuration file");
        sub->add_option("--seed", o.seed, "Override round.seed");
        sub->add_option("--rounds", o.rounds, "Number of rounds");
        sub->add_option("--threads", o.threads, "Worker threads (never changes output)")->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out_dir, "Directory for output files and manifest.json");
        sub->add_option("--message", o.message, "I, X, iY, Z, random, or a comma list");
        sub->add_option("--convention", o.convention, "survival or integrated");
        sub->add_option("--eve", o.eve, "none, intercept-resend-atom-z, intercept-resend-atom-x, intercept-resend-photon");
        sub->add_option("--p-check", o.p_check, "Probability of a security-check round");
        sub->add_option("--t-window", o.t_windows, "Comma-separated sweep grid");
        sub->add_flag("--paper-constants", o.paper_constants, "Use the quoted hardware constants");
        sub->add_flag("--log", o.log_rounds, "Emit the per-round log");
    };
    auto* run_cmd = app.add_subcommand("run", "Simulate one round");
    auto* batch = app.add_subcommand("batch", "Simulate a batch of rounds");
    auto* sweep = app.add_subcommand("sweep", "Sweep the detection window");
    auto* sec = app.add_subcommand("security", "Cheating and eavesdropping experiments");
    auto* feas = app.add_subcommand("feasibility", "Feasibility report");
    auto* table = app.add_subcommand("decode-table", "Print the generated decode table");
    for (auto* s : {run_cmd, batch, sweep, sec, feas, table}) common(s);

    std::vector<const char*> argv{"cavqdc"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (*run_cmd) return cmd_round(o, out);
        if (*batch) return cmd_batch(o, out);
        if (*sweep) return cmd_sweep(o, out);
        if (*sec) return cmd_security(o, out);
        if (*feas) return cmd_feasibility(o, out);
        if (*table) return cmd_decode_table(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        const bool config = e.code() == Errc::InvalidConfig || e.code() == Errc::InvalidParams;
        return config ? kExitConfig : kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace cavqdc::cli
