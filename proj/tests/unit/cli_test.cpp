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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cli.hpp"
#include "generators.hpp"

namespace {

using namespace cavqdc;
using nlohmann::json;

const std::string kBase = std::string(CAVQDC_SOURCE_DIR) + "/configs/base.json";
const std::string kIdeal = std::string(CAVQDC_SOURCE_DIR) + "/configs/ideal.json";

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("cavqdc_cli_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string write_config(const std::string& name, const json& doc) {
    const auto p = std::filesystem::temp_directory_path() / ("cavqdc_cfg_" + name + ".json");
    std::ofstream(p) << doc.dump(2);
    return p.string();
}

json base_doc() { return json::parse(slurp(kBase)); }

TEST(Config, ParsesShippedFiles) {
    const auto base = io::parse_config_text(slurp(kBase));
    EXPECT_EQ(base.round.seed, 7u);
    EXPECT_DOUBLE_EQ(base.round.params.k(), 0.2);
    EXPECT_EQ(base.sweep_t_window.size(), 10u);
    const auto ideal = io::parse_config_text(slurp(kIdeal));
    EXPECT_EQ(ideal.round.params.k(), 0.0);
    EXPECT_EQ(ideal.round.k_window, 1.0);
}

TEST(Config, MissingFieldIsNamed) {
    auto doc = base_doc();
    doc["params"].erase("Delta");
    try {
        io::parse_config(doc);
        ADD_FAILURE() << "expected InvalidConfig";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidConfig);
        EXPECT_NE(std::string(e.what()).find("params.Delta"), std::string::npos);
    }
}

TEST(Config, RejectsBadValues) {
    const std::vector<std::pair<std::string, std::function<void(json&)>>> edits{
        {"round.t_window", [](json& d) { d["round"]["t_window"] = -1.0; }},
        {"round.n_receivers", [](json& d) { d["round"]["n_receivers"] = 1; }},
        {"round.p_check", [](json& d) { d["round"]["p_check"] = 1.5; }},
        {"round.success_convention", [](json& d) { d["round"]["success_convention"] = "both"; }},
        {"detector.efficiency", [](json& d) { d["detector"]["efficiency"] = "high"; }},
        {"security.eve", [](json& d) { d["security"]["eve"] = "mallory"; }},
        {"params", [](json& d) { d["params"]["k"] = 5.0; }},
        {"sweep.t_window", [](json& d) { d["sweep"]["t_window"] = 0.5; }},
        {"round.seed", [](json& d) { d["round"]["seed"] = -3; }},
    };
    for (const auto& [field, edit] : edits) {
        auto doc = base_doc();
        edit(doc);
        try {
            io::parse_config(doc);
            ADD_FAILURE() << field;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::InvalidConfig) << field;
            EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
        }
    }
    EXPECT_THROW(io::parse_config_text("{not json"), Error);
}

TEST(ConfigProperty, EchoRoundTrips) {
    for (int trial = 0; trial < 100; ++trial) {
        io::RunConfig rc;
        const double g = gen::real(0.1, 3.0), omega = gen::real(0.1, 3.0), big_delta = gen::real(0.1, 3.0);
        rc.round.params = PhysicalParams(g, omega, big_delta, gen::real(0.0, 1.9 * g * omega / big_delta),
                                         gen::real(0.0, 1.0));
        rc.round.n_receivers = gen::integer(2, 8);
        rc.round.p_check = gen::real(0.0, 1.0);
        if (gen::integer(0, 1)) rc.round.t_map = gen::real(0.1, 5.0);
        if (gen::integer(0, 1)) rc.round.k_window = gen::real(0.0, 2.0);
        rc.round.t_window = gen::real(0.01, 10.0);
        rc.round.detector = {gen::real(0.0, 1.0), gen::real(0.0, 0.5)};
        rc.round.success_convention = gen::integer(0, 1) ? protocol::SuccessConvention::Integrated
                                                         : protocol::SuccessConvention::Survival;
        rc.round.ideal_pnr = gen::integer(0, 1);
        rc.round.seed = gen::engine()();
        rc.round.cutoff = gen::integer(1, 4);
        rc.n_rounds = static_cast<std::size_t>(gen::integer(1, 1000000));
        rc.security.eve = gen::integer(0, 1) ? "none" : "intercept-resend-photon";
        rc.feasibility.constants.T_d = gen::real(0.001, 1.0);
        rc.feasibility.mc_rounds = static_cast<std::size_t>(gen::integer(0, 100));
        rc.sweep_t_window = {gen::real(0.1, 1.0), gen::real(1.0, 2.0)};
        const auto text = io::to_json(rc).dump();
        ASSERT_EQ(io::parse_config_text(text), rc) << text;
    }
}

TEST(Cli, RunPrintsOneRoundRecord) {
    const auto r = run({"run", "--config", kBase, "--message", "X", "--seed", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["mode"], "encode");
    EXPECT_EQ(j["sent"], "X");
    for (const auto* key : {"round", "clicks", "receiver_bits", "decoded"}) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(run({"run", "--config", kBase, "--message", "X", "--seed", "7"}).out, r.out);
}

TEST(Cli, ForcedCheckRound) {
    const auto r = run({"run", "--config", kBase, "--p-check", "1.0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["mode"], "check");
}

TEST(Cli, ConfigErrorsExitTwo) {
    auto doc = base_doc();
    doc["params"].erase("Delta");
    const auto missing = run({"run", "--config", write_config("missing_delta", doc)});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("params.Delta"), std::string::npos);
    EXPECT_EQ(run({"run", "--config", "/nonexistent/config.json"}).code, 2);
    EXPECT_EQ(run({"run", "--message", "Q"}).code, 2);
    EXPECT_EQ(run({"batch", "--convention", "sometimes"}).code, 2);
    EXPECT_EQ(run({"security", "--eve", "mallory"}).code, 2);
    EXPECT_EQ(run({"batch", "--rounds", "0"}).code, 2);
    EXPECT_EQ(run({"sweep", "--t-window", "0.1,-1"}).code, 2);
    EXPECT_EQ(run({"sweep", "--t-window", "0.1,abc"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"batch", "--no-such-flag"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, BatchSummaryAndFiles) {
    const auto dir = temp_dir("batch");
    const auto r = run({"batch", "--config", kIdeal, "--rounds", "20000", "--threads", "3", "--log", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    for (const auto* key : {"config", "n_rounds", "success_rate", "abort_rate", "confusion", "check_pass_rate", "wall_time_s"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j["wall_time_s"].is_number());
    const double s = j["success_rate"];
    EXPECT_NEAR(s, 0.5, 3 * std::sqrt(0.25 / 20000));
    EXPECT_EQ(io::parse_config(j["config"]).round, io::parse_config_text(slurp(kIdeal)).round);

    const auto file = json::parse(slurp(dir / "summary.json"));
    EXPECT_TRUE(file["wall_time_s"].is_null());
    EXPECT_EQ(file["confusion"], j["confusion"]);
    const auto log = slurp(dir / "rounds.jsonl");
    EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 20000);
    const auto manifest = json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest["subcommand"], "batch");
    EXPECT_EQ(manifest["files"], json({"summary.json", "rounds.jsonl", "manifest.json"}));
    std::filesystem::remove_all(dir);
}

TEST(Cli, SweepCsvIsDeterministic) {
    const std::vector<std::string> args{"sweep", "--config", kBase, "--rounds", "4000"};
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    std::stringstream ss(a.out);
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line, "t_window,formula_survival,formula_integrated,mc_estimate,mc_stderr");
    int rows = 0;
    while (std::getline(ss, line)) {
        ++rows;
        std::vector<double> v;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
        ASSERT_EQ(v.size(), 5u);
        EXPECT_NEAR(v[3], v[1], 3 * v[4] + 1e-12) << line;
    }
    EXPECT_EQ(rows, 10);
}

TEST(Cli, SecurityReport) {
    const auto r = run({"security", "--config", kBase, "--rounds", "20000", "--seed", "1", "--threads", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto s = json::parse(r.out)["security"];
    EXPECT_NEAR(s["bob_alone"].get<double>(), 0.5, 3 * s["bob_alone_stderr"].get<double>());
    EXPECT_NEAR(s["charlie_alone"].get<double>(), 0.25, 3 * s["charlie_alone_stderr"].get<double>());
    EXPECT_NEAR(s["eve_detection_rate"].get<double>(), 0.5, 3 * s["eve_detection_stderr"].get<double>());
    for (const auto* key : {"collaboration", "collaboration_stderr", "bob_composite"}) EXPECT_TRUE(s.contains(key)) << key;
}

TEST(Cli, FeasibilityWithPaperConstants) {
    auto doc = base_doc();
    doc["feasibility"]["mc_rounds"] = 200;
    const auto r = run({"feasibility", "--config", write_config("feas", doc), "--paper-constants"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto brace = r.out.rfind("\n{");
    ASSERT_NE(brace, std::string::npos);
    const auto j = json::parse(r.out.substr(brace + 1));
    for (const auto& c : j["regime"]) EXPECT_TRUE(c["pass"].get<bool>()) << c["name"];
    EXPECT_TRUE(j["timescales"]["transfer_discrepancy"].get<bool>());
    EXPECT_NE(r.out.find("differs from t1"), std::string::npos);
}

TEST(Cli, DecodeTableLines) {
    const auto r = run({"decode-table", "--config", kBase});
    ASSERT_EQ(r.code, 0) << r.err;
    std::stringstream ss(r.out);
    std::string line;
    int x_entries = 0;
    while (std::getline(ss, line)) {
        const auto j = json::parse(line);
        if (j["clicks"] == json({1, 0}) && j["bits"] == "e") {
            EXPECT_EQ(j["decoded"], "X");
        }
        x_entries += j["decoded"] == "X";
    }
    EXPECT_EQ(x_entries, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

}  // namespace
