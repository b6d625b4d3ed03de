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
 * Rounds and batches of the secure dense-coding protocol.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cavqdc/parallel.hpp"
#include "cavqdc/protocol/detection.hpp"
#include "cavqdc/protocol/outcomes.hpp"
#include "cavqdc/protocol/parity_check.hpp"
#include "cavqdc/protocol/pipeline.hpp"
#include "cavqdc/protocol/types.hpp"
#include "cavqdc/random.hpp"

namespace cavqdc::protocol {

struct RoundOutcome {
    RoundMode mode = RoundMode::Encode;
    std::optional<Message> sent;
    std::string receiver_bits;
    DetectionRecord detection;
    std::optional<BellLabel> pnr_label;  ///< only in ideal_pnr mode
    Decoded decoded;
    bool transfer_lost = false;
    std::optional<ParityCheckResult> check;

    std::optional<bool> check_passed() const {
        if (!check) return std::nullopt;
        return !check->violation;
    }

    Observation observation() const {
        Observation o;
        if (pnr_label) {
            o.label = pnr_label;
        } else {
            o.clicks_plus = detection.count_plus();
            o.clicks_minus = detection.count_minus();
        }
        o.bits = receiver_bits;
        return o;
    }
};

/// Which message Alice encodes: a fixed one or uniform over a set.
struct MessageChoice {
    std::vector<Message> candidates{Message::I, Message::X, Message::iY, Message::Z};

    static MessageChoice fixed(Message m) { return {{m}}; }
    static MessageChoice uniform() { return {}; }
    static MessageChoice psi_branch() { return {{Message::X, Message::iY}}; }

    Message draw(Rng& rng) const {
        if (candidates.empty()) throw Error(Errc::InvalidConfig, "empty message set");
        if (candidates.size() == 1) return candidates.front();
        return candidates[uniform_index(rng, candidates.size())];
    }
};

/// Optional tampering with the photonic state right before the window
/// (used by eavesdropping experiments).
using PhotonTamper = std::function<StateVector(const StateVector&, Rng&)>;

/// Precomputed round machinery for one configuration: the prepared states,
/// the exact outcome model and the decode table. Rounds are then cheap and
/// depend only on the supplied random stream.
class Protocol {
public:
    explicit Protocol(RoundConfig config) : model_(std::move(config)), table_(model_) {}

    const RoundConfig& config() const { return model_.config(); }
    const OutcomeModel& model() const { return model_; }
    const DecodeTable& table() const { return table_; }

    /// Step 1 branch, then either the parity check or the encode pipeline.
    RoundOutcome run_round(const MessageChoice& choice, Rng& rng, const PhotonTamper& tamper = {}) const {
        const bool check = bernoulli(rng, config().p_check);
        if (check) return run_check(rng);
        return run_encode(choice.draw(rng), rng, tamper);
    }

    RoundOutcome run_check(Rng& rng) const {
        RoundOutcome out;
        out.mode = RoundMode::Check;
        const auto ghz = prepare_ghz(config().n_parties(), config().cutoff);
        out.check = run_parity_check(ghz, static_cast<std::size_t>(config().n_parties()), rng);
        return out;
    }

    RoundOutcome run_encode(Message m, Rng& rng, const PhotonTamper& tamper = {}) const {
        RoundOutcome out;
        out.mode = RoundMode::Encode;
        out.sent = m;
        const auto& prepared = model_.prepared(m);
        const double keep = model_.no_loss_probability(m);

        if (uniform01(rng) >= keep) {
            out.transfer_lost = true;
            out.receiver_bits = sample_key(model_.lost_bits(m), rng);
            if (config().ideal_pnr) {
                out.pnr_label = bernoulli(rng, 0.5) ? BellLabel::PhiPlus : BellLabel::PhiMinus;
                out.detection.window = config().t_window;
            } else {
                out.detection = dark_only_window(config(), rng);
            }
        } else {
            StateVector psi = normalized(prepared);
            if (tamper) psi = normalized(tamper(psi, rng));
            if (config().ideal_pnr) {
                std::map<std::string, double> flat;
                std::map<std::string, BellKey> keys;
                for (const auto& [key, w] : bell_weights(psi)) {
                    const auto name = std::string(to_string(key.label)) + "|" + key.bits;
                    flat[name] = w;
                    keys.emplace(name, key);
                }
                const auto& key = keys.at(sample_key(flat, rng));
                out.pnr_label = key.label;
                out.receiver_bits = key.bits;
                out.detection.window = config().t_window;
            } else {
                auto window = simulate_window(psi, config(), rng);
                out.detection = std::move(window.record);
                out.receiver_bits = sample_receiver_bits(window.state, rng);
            }
        }
        out.decoded = table_.decode(out.observation());
        return out;
    }

private:
    static std::string sample_key(const std::map<std::string, double>& weights, Rng& rng) {
        double total = 0.0;
        for (const auto& [k, w] : weights) total += w;
        double u = uniform01(rng) * total;
        std::string last;
        for (const auto& [k, w] : weights) {
            if (w <= 0.0) continue;
            last = k;
            if (u < w) return k;
            u -= w;
        }
        return last;
    }

    static std::string sample_receiver_bits(const StateVector& psi, Rng& rng) {
        const auto roles = Roles::of(psi.layout());
        std::map<std::string, double> w;
        for (std::size_t i = 0; i < psi.size(); ++i) w[receiver_bits(psi.layout(), roles, i)] += std::norm(psi[i]);
        return sample_key(w, rng);
    }

    OutcomeModel model_;
    DecodeTable table_;
};

/// Convenience wrapper building a Protocol for a single round.
inline RoundOutcome run_round(const RoundConfig& config, const MessageChoice& choice, Rng& rng) {
    return Protocol(config).run_round(choice, rng);
}

/// beta(t_map)^2 e^{-2 k_w t_w} (survival) or beta(t_map)^2 (1 - e^{-2 k_w t_w}) (integrated).
inline double success_probability_formula(const RoundConfig& config) {
    const auto beta = alpha_beta(config.params, config.mapping_time()).beta;
    const double b2 = std::norm(beta);
    const double x = 2.0 * config.window_rate() * config.t_window;
    return config.success_convention == SuccessConvention::Survival ? b2 * std::exp(-x) : b2 * -std::expm1(-x);
}

inline constexpr std::size_t kAbortColumn = 4;

struct BatchStats {
    std::size_t n_rounds = 0;
    std::size_t encode_rounds = 0;
    std::size_t check_rounds = 0;
    std::size_t correct = 0;
    std::size_t aborts = 0;
    std::size_t checks_passed = 0;
    std::size_t check_conclusive = 0;
    std::array<std::array<std::size_t, 5>, 4> confusion{};  ///< rows I,X,iY,Z; cols I,X,iY,Z,Abort
    std::size_t psi_rounds = 0;    ///< encode rounds with sent in {X, iY}
    std::size_t psi_correct = 0;
    std::size_t psi_alive = 0;     ///< photon neither lost in transfer nor emitted in the window
    SuccessConvention convention = SuccessConvention::Survival;
    double formula = 0.0;

    static double rate(std::size_t num, std::size_t den) {
        return den ? static_cast<double>(num) / static_cast<double>(den) : std::nan("");
    }
    double success_rate() const { return rate(correct, encode_rounds); }
    double abort_rate() const { return rate(aborts, encode_rounds); }
    double check_pass_rate() const { return rate(checks_passed, check_rounds); }
    double psi_detected_rate() const { return rate(psi_correct, psi_rounds); }
    double psi_survival_rate() const { return rate(psi_alive, psi_rounds); }

    /// Empirical counterpart of the selected success formula.
    double mc_estimate() const {
        return convention == SuccessConvention::Survival ? psi_survival_rate() : psi_detected_rate();
    }
    double mc_stderr() const {
        const double p = mc_estimate();
        return psi_rounds ? std::sqrt(p * (1.0 - p) / static_cast<double>(psi_rounds)) : std::nan("");
    }

    void add(const RoundOutcome& r) {
        ++n_rounds;
        if (r.mode == RoundMode::Check) {
            ++check_rounds;
            if (r.check && !r.check->violation) ++checks_passed;
            if (r.check && r.check->conclusive) ++check_conclusive;
            return;
        }
        ++encode_rounds;
        const auto row = static_cast<std::size_t>(*r.sent);
        const auto col = r.decoded ? static_cast<std::size_t>(*r.decoded) : kAbortColumn;
        ++confusion[row][col];
        if (!r.decoded) ++aborts;
        const bool ok = r.decoded && *r.decoded == *r.sent;
        if (ok) ++correct;
        if (*r.sent == Message::X || *r.sent == Message::iY) {
            ++psi_rounds;
            if (ok) ++psi_correct;
            if (!r.transfer_lost && r.detection.photons_emitted == 0 && !r.pnr_label) ++psi_alive;
        }
    }
};

struct BatchOptions {
    MessageChoice messages = MessageChoice::uniform();
    unsigned threads = 1;
    bool keep_rounds = false;
    PhotonTamper tamper;
};

struct BatchResult {
    BatchStats stats;
    std::vector<RoundOutcome> rounds;  ///< filled when keep_rounds
};

/// n_rounds independent rounds. Round i draws from derive_stream(seed, i), and
/// statistics are reduced in round order, so the result is identical for any
/// thread count.
inline BatchResult run_batch(const Protocol& protocol, std::size_t n_rounds, std::uint64_t seed,
                             const BatchOptions& opts = {}) {
    if (n_rounds < 1) throw Error(Errc::InvalidConfig, "n_rounds must be >= 1");
    std::vector<RoundOutcome> rounds(n_rounds);
    parallel_for(n_rounds, opts.threads, [&](std::size_t i) {
        auto rng = derive_stream(seed, i);
        rounds[i] = protocol.run_round(opts.messages, rng, opts.tamper);
    });
    BatchResult res;
    res.stats.convention = protocol.config().success_convention;
    res.stats.formula = success_probability_formula(protocol.config());
    for (const auto& r : rounds) res.stats.add(r);
    if (opts.keep_rounds) res.rounds = std::move(rounds);
    return res;
}

inline BatchResult run_batch(const RoundConfig& config, std::size_t n_rounds, std::uint64_t seed,
                             const BatchOptions& opts = {}) {
    if (n_rounds < 1) throw Error(Errc::InvalidConfig, "n_rounds must be >= 1");
    return run_batch(Protocol(config), n_rounds, seed, opts);
}

}  // namespace cavqdc::protocol
