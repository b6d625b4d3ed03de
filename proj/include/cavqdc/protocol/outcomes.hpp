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
 * Exact outcome likelihoods P(observation | message) by branch enumeration,
 * and the maximum-likelihood decode table built from them.
 */

#pragma once

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cavqdc/protocol/detection.hpp"
#include "cavqdc/protocol/pipeline.hpp"
#include "cavqdc/protocol/types.hpp"

namespace cavqdc::protocol {

using Likelihoods = std::map<Observation, double>;

/// Everything about a round that does not depend on randomness: the prepared
/// state per message, its transfer-loss branch, and exact outcome likelihoods.
class OutcomeModel {
public:
    explicit OutcomeModel(RoundConfig config) : config_(std::move(config)) {
        config_.validate();
        for (Message m : kAllMessages) build(m);
    }

    const RoundConfig& config() const { return config_; }

    /// Mapped and rotated (subnormalized) state.
    const StateVector& prepared(Message m) const { return per_[idx(m)].prepared; }

    /// Probability that no decay occurred during the mapping stage.
    double no_loss_probability(Message m) const { return per_[idx(m)].no_loss; }

    /// P(receiver bits, transfer loss | m).
    const std::map<std::string, double>& lost_bits(Message m) const { return per_[idx(m)].lost_bits; }

    /// P(observation | m); sums to 1 over observations.
    const Likelihoods& likelihoods(Message m) const { return per_[idx(m)].likelihoods; }

    double likelihood(Message m, const Observation& o) const {
        const auto& l = likelihoods(m);
        const auto it = l.find(o);
        return it == l.end() ? 0.0 : it->second;
    }

    /// Every observation with nonzero likelihood under some message.
    std::set<Observation> support() const {
        std::set<Observation> s;
        for (const auto& p : per_)
            for (const auto& [o, w] : p.likelihoods)
                if (w > 0.0) s.insert(o);
        return s;
    }

private:
    struct PerMessage {
        StateVector prepared;
        double no_loss = 1.0;
        std::map<std::string, double> lost_bits;
        Likelihoods likelihoods;
    };

    static std::size_t idx(Message m) { return static_cast<std::size_t>(m); }

    void build(Message m) {
        auto& pm = per_[idx(m)];
        pm.prepared = prepared_state(config_, m);
        pm.no_loss = norm_sq(pm.prepared);

        // Receiver-bit marginal of the full (trace-preserving) evolution equals
        // that of the encoded state without mapping.
        auto unmapped = rotate_receivers(pauli_encode(prepare_ghz(config_.n_parties(), config_.cutoff), 0, m));
        std::map<std::string, double> total_bits;
        const auto roles = Roles::of(unmapped.layout());
        for (std::size_t i = 0; i < unmapped.size(); ++i)
            total_bits[receiver_bits(unmapped.layout(), roles, i)] += std::norm(unmapped[i]);

        const auto comps = cavity_components(pm.prepared);
        std::map<std::string, double> kept_bits;
        for (const auto& c : comps)
            for (const auto& [n, a] : c.amp) kept_bits[c.bits] += std::norm(a);
        for (const auto& [bits, p] : total_bits) {
            const double lost = p - (kept_bits.contains(bits) ? kept_bits.at(bits) : 0.0);
            pm.lost_bits[bits] = std::max(0.0, lost);
        }

        auto& lk = pm.likelihoods;
        if (config_.ideal_pnr) {
            for (const auto& [key, w] : bell_weights(pm.prepared)) lk[Observation{0, 0, key.label, key.bits}] += w;
            // the loss branch leaves the cavities empty: |00> splits evenly over phi+-
            for (const auto& [bits, p] : pm.lost_bits) {
                lk[Observation{0, 0, BellLabel::PhiPlus, bits}] += 0.5 * p;
                lk[Observation{0, 0, BellLabel::PhiMinus, bits}] += 0.5 * p;
            }
        } else {
            const double q = detection_probability(config_);
            const double pd = config_.detector.dark_prob;
            for (const auto& c : comps)
                for (const auto& [n, p] : click_count_distribution(c.amp, q, pd))
                    lk[Observation{n.first, n.second, std::nullopt, c.bits}] += p;
            const std::map<std::pair<int, int>, cplx> vacuum{{{0, 0}, 1.0}};
            const auto dark = click_count_distribution(vacuum, q, pd);
            for (const auto& [bits, p] : pm.lost_bits)
                for (const auto& [n, pn] : dark) lk[Observation{n.first, n.second, std::nullopt, bits}] += p * pn;
        }
        std::erase_if(lk, [](const auto& kv) { return kv.second <= 0.0; });
    }

    RoundConfig config_;
    std::array<PerMessage, 4> per_;
};

/// Relative tolerance under which two likelihoods count as tied.
inline constexpr double kTieTolerance = 1e-9;

/// Maximum-likelihood decoding over the four messages (uniform prior).
/// Observations outside the table, and irreducible ties, decode to Abort.
class DecodeTable {
public:
    DecodeTable() = default;

    explicit DecodeTable(const OutcomeModel& model) {
        for (const auto& obs : model.support()) {
            double best_l = 0.0;
            for (Message m : kAllMessages) best_l = std::max(best_l, model.likelihood(m, obs));
            Decoded best;
            int at_max = 0;
            for (Message m : kAllMessages) {
                if (best_l > 0.0 && model.likelihood(m, obs) >= best_l * (1.0 - kTieTolerance)) {
                    if (!best) best = m;
                    ++at_max;
                }
            }
            const bool tie = at_max > 1;
            entries_[obs] = tie ? Decoded{} : best;
        }
    }

    Decoded decode(const Observation& obs) const {
        const auto it = entries_.find(obs);
        return it == entries_.end() ? Decoded{} : it->second;
    }

    const std::map<Observation, Decoded>& entries() const { return entries_; }

private:
    std::map<Observation, Decoded> entries_;
};

inline DecodeTable build_decode_table(const RoundConfig& config) { return DecodeTable(OutcomeModel(config)); }

/// Exact fidelity = P(correct | decoded) for messages uniform over `messages`.
inline double exact_decode_fidelity(const OutcomeModel& model, const DecodeTable& table,
                                    const std::vector<Message>& messages) {
    double correct = 0.0, decoded = 0.0;
    for (Message m : messages) {
        for (const auto& [obs, l] : model.likelihoods(m)) {
            const auto d = table.decode(obs);
            if (!d) continue;
            decoded += l;
            if (*d == m) correct += l;
        }
    }
    return decoded > 0.0 ? correct / decoded : 0.0;
}

}  // namespace cavqdc::protocol
