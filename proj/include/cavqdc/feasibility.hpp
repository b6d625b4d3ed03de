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
 * Experimental-feasibility arithmetic: regime-validity ratios for the
 * effective Hamiltonian, timescale comparisons against the quoted hardware
 * constants, and the dark-count fidelity sweep.
 *
 * Frequencies quoted in MHz are read as angular frequencies (1 MHz = 1e6 rad/s).
 */

#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cavqdc/dynamics.hpp"
#include "cavqdc/protocol.hpp"

namespace cavqdc::feasibility {

inline constexpr double kMHz = 1e6;

/// Ratios required to be "much less than 1" must not exceed this.
inline constexpr double kMuchLess = 0.05;
/// Ratios required to be "much greater than 1" must reach this.
inline constexpr double kMuchGreater = 20.0;

struct HardwareConstants {
    double t_r = 3.0e-2;  ///< atomic radiative time (s)
    double Q = 3.0e8;     ///< cavity quality factor
    double t_d = 3.0e-3;  ///< effective cavity decay time (s)
    double T_d = 1.6e-2;  ///< disentanglement time of an atomic entangled state (s)
    double t1 = 1.0e-4;   ///< quoted entanglement-transfer time (s)
    double t2 = 5.0e-5;   ///< quoted detection window (s)

    void validate() const {
        for (double v : {t_r, Q, t_d, T_d, t1, t2}) {
            if (!(std::isfinite(v) && v > 0.0)) throw Error(Errc::InvalidConfig, "hardware constants must be positive");
        }
    }

    bool operator==(const HardwareConstants&) const = default;
};

/// Omega = g = 10 MHz, Delta = 100 MHz, k = 1/t_d, gamma = 1/t_r.
inline PhysicalParams quoted_params(const HardwareConstants& hw = {}) {
    return PhysicalParams(10 * kMHz, 10 * kMHz, 100 * kMHz, 1.0 / hw.t_d, 1.0 / hw.t_r);
}

struct RegimeCheck {
    std::string name;
    double value;
    double threshold;
    bool at_most;  ///< pass iff value <= threshold (else value >= threshold)
    bool pass;
};

inline std::vector<RegimeCheck> regime_report(const PhysicalParams& p) {
    const double inf = std::numeric_limits<double>::infinity();
    const double coupling = p.Omega() * p.g() / (p.Delta() * p.Delta());
    const double detuning = p.gamma() > 0.0 ? p.Delta() / p.gamma() : inf;
    const double damping = p.k() > 0.0 ? p.Omega_k() / p.k() : inf;
    return {
        {"Omega*g/Delta^2", coupling, kMuchLess, true, coupling <= kMuchLess},
        {"Delta/gamma", detuning, kMuchGreater, false, detuning >= kMuchGreater},
        {"Omega_k/k", damping, kMuchGreater, false, damping >= kMuchGreater},
    };
}

struct Comparison {
    std::string name;
    double duration;
    double limit;
    bool pass;  ///< duration < limit
};

struct TimescaleReport {
    double quoted_transfer = 0.0;    ///< t1
    double computed_transfer = 0.0;  ///< transfer_time(params)
    double window = 0.0;             ///< t2
    double quoted_total = 0.0;       ///< t1 + t2
    double computed_total = 0.0;     ///< t_map + t2
    bool transfer_discrepancy = false;
    std::vector<Comparison> rows;
};

/// Quoted and recomputed protocol durations against t_r, t_d and T_d. The
/// transfer times are flagged when they differ by more than a decade.
inline TimescaleReport timescale_report(const PhysicalParams& params, const HardwareConstants& hw) {
    hw.validate();
    TimescaleReport r;
    r.quoted_transfer = hw.t1;
    r.computed_transfer = transfer_time(params);
    r.window = hw.t2;
    r.quoted_total = hw.t1 + hw.t2;
    r.computed_total = r.computed_transfer + hw.t2;
    r.transfer_discrepancy = std::abs(std::log10(r.quoted_transfer / r.computed_transfer)) > 1.0;
    auto add = [&](std::string name, double d, double lim) { r.rows.push_back({std::move(name), d, lim, d < lim}); };
    add("t1+t2 < t_r", r.quoted_total, hw.t_r);
    add("t1+t2 < t_d", r.quoted_total, hw.t_d);
    add("t1+t2 < T_d", r.quoted_total, hw.T_d);
    add("t_map+t2 < t_r", r.computed_total, hw.t_r);
    add("t_map+t2 < t_d", r.computed_total, hw.t_d);
    add("t_map+t2 < T_d", r.computed_total, hw.T_d);
    return r;
}

/// Base round configuration at the quoted constants: mapping at the computed
/// transfer time, detection window t2, perfect efficiency.
inline protocol::RoundConfig quoted_round_config(const HardwareConstants& hw = {}) {
    protocol::RoundConfig c;
    c.params = quoted_params(hw);
    c.t_window = hw.t2;
    return c;
}

struct DarkCountRow {
    double dark_prob;
    double exact_fidelity;
    double exact_drop;  ///< 1 - F(p_dc) / F(0)
    std::optional<double> mc_fidelity;
    std::optional<double> mc_stderr;
};

struct DarkCountSweep {
    std::vector<DarkCountRow> rows;
    std::optional<double> band_low;   ///< smallest p_dc with drop in [5%, 10%]
    std::optional<double> band_high;  ///< largest such p_dc
};

/// Default grid: 8 points per decade from 1e-5 to 1e-1.
inline std::vector<double> default_dark_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 32; ++i) g.push_back(std::pow(10.0, -5.0 + i / 8.0));
    return g;
}

/// Decoding fidelity (correct / decoded, psi-branch messages) against dark
/// count probability, exactly and optionally by Monte-Carlo batches.
inline DarkCountSweep dark_count_sweep(protocol::RoundConfig base, const std::vector<double>& grid,
                                       std::size_t mc_rounds, std::uint64_t seed, unsigned threads = 1) {
    const std::vector<Message> psi{Message::X, Message::iY};
    base.p_check = 0.0;
    base.detector.dark_prob = 0.0;
    const protocol::Protocol clean(base);
    const double f0 = protocol::exact_decode_fidelity(clean.model(), clean.table(), psi);

    DarkCountSweep sweep;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto cfg = base;
        cfg.detector.dark_prob = grid[i];
        const protocol::Protocol proto(cfg);
        DarkCountRow row{grid[i], protocol::exact_decode_fidelity(proto.model(), proto.table(), psi), 0.0, {}, {}};
        row.exact_drop = f0 > 0.0 ? 1.0 - row.exact_fidelity / f0 : std::nan("");
        if (mc_rounds > 0) {
            protocol::BatchOptions opts;
            opts.messages = protocol::MessageChoice::psi_branch();
            opts.threads = threads;
            const auto st = protocol::run_batch(proto, mc_rounds, seed + i, opts).stats;
            const std::size_t decoded = st.encode_rounds - st.aborts;
            if (decoded > 0) {
                const double f = static_cast<double>(st.correct) / static_cast<double>(decoded);
                row.mc_fidelity = f;
                row.mc_stderr = std::sqrt(f * (1.0 - f) / static_cast<double>(decoded));
            }
        }
        if (row.exact_drop >= 0.05 && row.exact_drop <= 0.10) {
            if (!sweep.band_low) sweep.band_low = row.dark_prob;
            sweep.band_high = row.dark_prob;
        }
        sweep.rows.push_back(row);
    }
    return sweep;
}

/// Aligned plain-text rendering of the regime and timescale reports.
inline void print_report(std::ostream& os, const std::vector<RegimeCheck>& regime, const TimescaleReport& ts) {
    char buf[160];
    os << "# frequencies in MHz are angular (1 MHz = 1e6 rad/s); << means <= " << kMuchLess << ", >> means >= "
       << kMuchGreater << "\n";
    os << "regime\n";
    for (const auto& c : regime) {
        std::snprintf(buf, sizeof buf, "  %-18s %14.6g  %s %-8g %s\n", c.name.c_str(), c.value, c.at_most ? "<=" : ">=",
                      c.threshold, c.pass ? "pass" : "FAIL");
        os << buf;
    }
    os << "timescales\n";
    std::snprintf(buf, sizeof buf, "  %-18s %14.6g s\n  %-18s %14.6g s%s\n", "quoted t1", ts.quoted_transfer,
                  "computed t_map", ts.computed_transfer, ts.transfer_discrepancy ? "  [differs from t1 by > 10x]" : "");
    os << buf;
    for (const auto& r : ts.rows) {
        std::snprintf(buf, sizeof buf, "  %-18s %14.6g  < %-10g %s\n", r.name.c_str(), r.duration, r.limit,
                      r.pass ? "pass" : "FAIL");
        os << buf;
    }
}

}  // namespace cavqdc::feasibility
