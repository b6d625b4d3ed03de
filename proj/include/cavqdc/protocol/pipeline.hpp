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
 * Deterministic stages of a round: GHZ preparation, atom -> cavity mapping,
 * receiver rotations, photonic label weights and the beam-splitter jumps.
 */

#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "cavqdc/dynamics.hpp"
#include "cavqdc/hilbert.hpp"
#include "cavqdc/protocol/types.hpp"

namespace cavqdc::protocol {

/// (|e...e> + |g...g>)/sqrt2 over `n_parties` atoms, cavities A and B in |0>.
inline StateVector prepare_ghz(int n_parties, int cutoff = 1) {
    if (n_parties < 2) throw Error(Errc::InvalidConfig, "GHZ state needs at least 2 parties");
    const auto layout = protocol_layout(n_parties, cutoff);
    std::vector<int> occ(layout.num_sites(), kGround);
    StateVector s(layout);
    s[layout.index(occ)] = std::numbers::sqrt2 / 2.0;
    std::fill(occ.begin(), occ.begin() + n_parties, kExcited);
    s[layout.index(occ)] = std::numbers::sqrt2 / 2.0;
    return s;
}

/// Receiver bits ('e'/'g') of the rotated atoms for basis index `idx`.
inline std::string receiver_bits(const SystemLayout& layout, const Roles& roles, std::size_t idx) {
    std::string bits;
    for (auto s : roles.rotated()) bits += layout.occupation(idx, s) == kExcited ? 'e' : 'g';
    return bits;
}

/// Simultaneous conditional evolution of (Alice, A) and (Bob, B) for the
/// configured mapping time. At the transfer time each pair maps
/// |e,0> -> beta |g,1> and leaves |g,0> alone.
inline StateVector map_to_cavities(const StateVector& state, const RoundConfig& config) {
    const auto roles = Roles::of(state.layout());
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state.layout().occupation(i, roles.cavity_a()) != 0 || state.layout().occupation(i, roles.cavity_b()) != 0) {
            if (std::abs(state[i]) > 1e-12) throw Error(Errc::InvalidState, "cavities must start in vacuum");
        }
    }
    if (std::abs(norm_sq(state) - 1.0) > 1e-10) throw Error(Errc::InvalidState, "input state must be normalized");
    const double t = config.mapping_time();
    const std::vector<CoupledPair> pairs{{roles.alice(), roles.cavity_a()}, {roles.bob(), roles.cavity_b()}};
    return evolve_conditional(state, pairs, config.params, t, default_step(config.params, t));
}

/// |e> -> (|e> + |g>)/sqrt2, |g> -> (|e> - |g>)/sqrt2. Squares to identity.
inline SiteMatrix receiver_rotation_matrix() {
    const double r = std::numbers::sqrt2 / 2.0;
    return SiteMatrix(2, {-r, r, r, r});
}

inline StateVector receiver_rotation(const StateVector& state, std::size_t atom_site) {
    detail::require_kind(state, atom_site, SiteKind::Atom);
    return apply_site_operator(state, atom_site, receiver_rotation_matrix());
}

/// Rotates every receiver atom except the flying-qubit holder (Bob).
inline StateVector rotate_receivers(StateVector state) {
    const auto roles = Roles::of(state.layout());
    for (auto s : roles.rotated()) state = receiver_rotation(state, s);
    return state;
}

struct BellKey {
    BellLabel label;
    std::string bits;

    auto operator<=>(const BellKey&) const = default;
};

/// Amplitude of each two-mode Fock state |nA, nB> for a fixed atomic configuration.
struct CavityComponent {
    std::string bits;                        ///< receiver bits of this configuration
    std::map<std::pair<int, int>, cplx> amp;  ///< (nA, nB) -> amplitude
};

/// Splits a protocol-layout state by the configuration of all atoms.
inline std::vector<CavityComponent> cavity_components(const StateVector& state) {
    const auto& layout = state.layout();
    const auto roles = Roles::of(layout);
    const std::size_t atom_block = layout.stride(roles.n_parties - 1);  // index stride of last atom
    const std::size_t cavity_dim = atom_block;                          // product of the two mode dims
    std::vector<CavityComponent> out;
    for (std::size_t base = 0; base < state.size(); base += cavity_dim) {
        CavityComponent c;
        c.bits = receiver_bits(layout, roles, base);
        for (std::size_t off = 0; off < cavity_dim; ++off) {
            const cplx a = state[base + off];
            if (a == 0.0) continue;
            c.amp[{layout.occupation(base + off, roles.cavity_a()), layout.occupation(base + off, roles.cavity_b())}] = a;
        }
        if (!c.amp.empty()) out.push_back(std::move(c));
    }
    return out;
}

/// Weights of the photonic labels jointly with the receiver bits: squared
/// projections onto psi+-, phi+- summed over the unobserved atoms (Alice, Bob).
/// Totals equal norm_sq(state).
inline std::map<BellKey, double> bell_weights(const StateVector& state) {
    std::map<BellKey, double> w;
    const double r = std::numbers::sqrt2 / 2.0;
    for (const auto& comp : cavity_components(state)) {
        cplx v00 = 0.0, v01 = 0.0, v10 = 0.0, v11 = 0.0;
        for (const auto& [n, a] : comp.amp) {
            if (n == std::pair{0, 0}) v00 = a;
            else if (n == std::pair{0, 1}) v01 = a;
            else if (n == std::pair{1, 0}) v10 = a;
            else if (n == std::pair{1, 1}) v11 = a;
            else if (std::abs(a) > 1e-10) {
                throw Error(Errc::UnexpectedPhotonSupport, "amplitude " + std::to_string(std::abs(a)) + " on |" +
                                                               std::to_string(n.first) + std::to_string(n.second) + ">");
            }
        }
        w[{BellLabel::PsiPlus, comp.bits}] += std::norm(r * (v01 + v10));
        w[{BellLabel::PsiMinus, comp.bits}] += std::norm(r * (v01 - v10));
        w[{BellLabel::PhiPlus, comp.bits}] += std::norm(r * (v11 + v00));
        w[{BellLabel::PhiMinus, comp.bits}] += std::norm(r * (v11 - v00));
    }
    return w;
}

enum class JumpSign { Plus, Minus };

/// C+- = sqrt(2k) (a_A +- a_B) / sqrt2 applied to the state (unnormalized).
inline StateVector jump_apply(const StateVector& state, JumpSign sign, double k) {
    const auto roles = Roles::of(state.layout());
    auto out = apply_annihilation(state, roles.cavity_a());
    auto b = apply_annihilation(state, roles.cavity_b());
    b *= (sign == JumpSign::Plus ? 1.0 : -1.0);
    out += b;
    out *= std::sqrt(k);
    return out;
}

/// GHZ -> encoded -> mapped -> rotated state for one message.
inline StateVector prepared_state(const RoundConfig& config, Message m) {
    auto s = prepare_ghz(config.n_parties(), config.cutoff);
    s = pauli_encode(s, 0, m);
    s = map_to_cavities(s, config);
    return rotate_receivers(std::move(s));
}

}  // namespace cavqdc::protocol
