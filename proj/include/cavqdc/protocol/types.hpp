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

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavqdc/dynamics.hpp"
#include "cavqdc/error.hpp"
#include "cavqdc/hilbert.hpp"

namespace cavqdc::protocol {

enum class SuccessConvention { Survival, Integrated };

constexpr std::string_view to_string(SuccessConvention c) {
    return c == SuccessConvention::Survival ? "survival" : "integrated";
}

inline std::optional<SuccessConvention> parse_convention(std::string_view s) {
    if (s == "survival") return SuccessConvention::Survival;
    if (s == "integrated") return SuccessConvention::Integrated;
    return std::nullopt;
}

struct DetectorModel {
    double efficiency = 1.0;  ///< eta, probability a real photon registers
    double dark_prob = 0.0;   ///< per detector per window

    void validate() const {
        if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
            throw Error(Errc::InvalidConfig, "detector.efficiency must lie in [0, 1]");
        }
        if (!(dark_prob >= 0.0 && dark_prob < 1.0)) {
            throw Error(Errc::InvalidConfig, "detector.dark_prob must lie in [0, 1)");
        }
    }

    bool operator==(const DetectorModel&) const = default;
};

/// Protocol knobs for one round (and for batches of identical rounds).
struct RoundConfig {
    int n_receivers = 2;  ///< Bob (flying-qubit holder) plus n_receivers - 1 atom holders
    double p_check = 0.0;
    PhysicalParams params = PhysicalParams::from_effective(1.0, 0.2);
    std::optional<double> t_map;     ///< defaults to transfer_time(params)
    double t_window = 0.5;
    std::optional<double> k_window;  ///< cavity output rate in the window; defaults to params.k
    DetectorModel detector;
    SuccessConvention success_convention = SuccessConvention::Survival;
    bool ideal_pnr = false;
    std::uint64_t seed = 0;
    int cutoff = 1;  ///< photon cutoff per cavity

    void validate() const {
        if (n_receivers < 2) throw Error(Errc::InvalidConfig, "round.n_receivers must be >= 2");
        if (n_receivers > 8) throw Error(Errc::InvalidConfig, "round.n_receivers must be <= 8");
        if (!(p_check >= 0.0 && p_check <= 1.0)) throw Error(Errc::InvalidConfig, "round.p_check must lie in [0, 1]");
        if (t_map && !(std::isfinite(*t_map) && *t_map > 0.0)) {
            throw Error(Errc::InvalidConfig, "round.t_map must be finite and > 0");
        }
        if (!(std::isfinite(t_window) && t_window > 0.0)) {
            throw Error(Errc::InvalidConfig, "round.t_window must be finite and > 0");
        }
        if (k_window && !(std::isfinite(*k_window) && *k_window >= 0.0)) {
            throw Error(Errc::InvalidConfig, "round.k_window must be finite and >= 0");
        }
        if (cutoff < 1 || cutoff > 4) throw Error(Errc::InvalidConfig, "round.cutoff must lie in [1, 4]");
        detector.validate();
    }

    int n_parties() const { return n_receivers + 1; }
    double mapping_time() const { return t_map ? *t_map : transfer_time(params); }
    double window_rate() const { return k_window ? *k_window : params.k(); }

    bool operator==(const RoundConfig&) const = default;
};

/// Site roles in the protocol layout: atoms of Alice (0), Bob (1) and the
/// remaining receivers, then cavity A, then cavity B.
struct Roles {
    std::size_t n_parties;

    std::size_t alice() const { return 0; }
    std::size_t bob() const { return 1; }
    std::size_t cavity_a() const { return n_parties; }
    std::size_t cavity_b() const { return n_parties + 1; }
    /// Atoms rotated by their holders and read out as receiver bits.
    std::vector<std::size_t> rotated() const {
        std::vector<std::size_t> out;
        for (std::size_t s = 2; s < n_parties; ++s) out.push_back(s);
        return out;
    }

    static Roles of(const SystemLayout& layout) {
        std::size_t atoms = 0;
        while (atoms < layout.num_sites() && layout.site(atoms).kind == SiteKind::Atom) ++atoms;
        if (atoms < 2 || layout.num_sites() != atoms + 2 ||
            layout.site(atoms).kind != SiteKind::CavityMode || layout.site(atoms + 1).kind != SiteKind::CavityMode) {
            throw Error(Errc::LayoutMismatch, "expected >= 2 atoms followed by cavities A and B");
        }
        return Roles{atoms};
    }
};

inline SystemLayout protocol_layout(int n_parties, int cutoff = 1) {
    std::vector<SiteSpec> sites(static_cast<std::size_t>(n_parties), SiteSpec::atom());
    sites.push_back(SiteSpec::mode(cutoff));
    sites.push_back(SiteSpec::mode(cutoff));
    return SystemLayout(std::move(sites));
}

enum class Channel { DPlus, DMinus, DarkDPlus, DarkDMinus };

constexpr std::string_view to_string(Channel c) {
    switch (c) {
    case Channel::DPlus: return "D+";
    case Channel::DMinus: return "D-";
    case Channel::DarkDPlus: return "DarkD+";
    case Channel::DarkDMinus: return "DarkD-";
    }
    return "?";
}

constexpr bool is_plus(Channel c) { return c == Channel::DPlus || c == Channel::DarkDPlus; }
constexpr bool is_dark(Channel c) { return c == Channel::DarkDPlus || c == Channel::DarkDMinus; }

struct ClickEvent {
    double time;
    Channel channel;

    bool operator==(const ClickEvent&) const = default;
};

struct DetectionRecord {
    std::vector<ClickEvent> events;  ///< ascending in time
    double window = 0.0;
    int photons_emitted = 0;  ///< quantum jumps in the window, detected or not

    int count_plus() const {
        return static_cast<int>(std::count_if(events.begin(), events.end(), [](auto& e) { return is_plus(e.channel); }));
    }
    int count_minus() const { return static_cast<int>(events.size()) - count_plus(); }
    int real_clicks() const {
        return static_cast<int>(std::count_if(events.begin(), events.end(), [](auto& e) { return !is_dark(e.channel); }));
    }
};

/// Photonic labels: psi+- = (|01> +- |10>)/sqrt2 and the symmetric pair
/// phi+- = (|11> +- |00>)/sqrt2.
enum class BellLabel { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

inline constexpr BellLabel kAllLabels[] = {BellLabel::PsiPlus, BellLabel::PsiMinus, BellLabel::PhiPlus,
                                           BellLabel::PhiMinus};

constexpr std::string_view to_string(BellLabel l) {
    switch (l) {
    case BellLabel::PsiPlus: return "psi+";
    case BellLabel::PsiMinus: return "psi-";
    case BellLabel::PhiPlus: return "phi+";
    case BellLabel::PhiMinus: return "phi-";
    }
    return "?";
}

/// What the decoders can see: click counts per detector (real and dark are
/// indistinguishable), or the idealized photonic label, plus receiver bits
/// ('e'/'g' per rotated atom, in site order).
struct Observation {
    int clicks_plus = 0;
    int clicks_minus = 0;
    std::optional<BellLabel> label;
    std::string bits;

    auto operator<=>(const Observation&) const = default;
};

inline std::string to_string(const Observation& o) {
    std::string s;
    if (o.label) {
        s = std::string(to_string(*o.label));
    } else {
        s = "D+:" + std::to_string(o.clicks_plus) + ",D-:" + std::to_string(o.clicks_minus);
    }
    return s + "|" + (o.bits.empty() ? "-" : o.bits);
}

/// nullopt means Abort.
using Decoded = std::optional<Message>;

inline std::string_view to_string(const Decoded& d) { return d ? to_string(*d) : std::string_view("Abort"); }

enum class RoundMode { Check, Encode };

constexpr std::string_view to_string(RoundMode m) { return m == RoundMode::Check ? "check" : "encode"; }

}  // namespace cavqdc::protocol
