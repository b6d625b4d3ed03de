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
 * Security analysis: exact Bayesian posteriors for partial views of a round,
 * Monte-Carlo guessing games for would-be cheaters, and the GHZ parity check
 * against intercept-resend eavesdroppers.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavqdc/parallel.hpp"
#include "cavqdc/protocol.hpp"
#include "cavqdc/random.hpp"

namespace cavqdc::security {

using protocol::Observation;
using protocol::OutcomeModel;
using protocol::RoundConfig;

/// Who sees what. `sees_bits` holds party indices (Charlie = 2, ...) of the
/// rotated receivers whose atom outcomes are visible.
struct ViewSpec {
    bool sees_clicks = false;
    std::vector<std::size_t> sees_bits;

    static ViewSpec bob_alone() { return {true, {}}; }
    static ViewSpec charlie_alone() { return {false, {2}}; }
    static ViewSpec collaboration(const RoundConfig& config) {
        ViewSpec v{true, {}};
        for (int p = 2; p < config.n_parties(); ++p) v.sees_bits.push_back(static_cast<std::size_t>(p));
        return v;
    }

    void validate(const RoundConfig& config) const {
        for (auto p : sees_bits) {
            if (p < 2 || p >= static_cast<std::size_t>(config.n_parties())) {
                throw Error(Errc::InvalidConfig, "view refers to party " + std::to_string(p) +
                                                     ", which holds no rotated atom");
            }
        }
    }
};

/// Restricts a full observation to what `view` can see.
inline Observation project(const Observation& full, const ViewSpec& view) {
    Observation o;
    if (view.sees_clicks) {
        o.clicks_plus = full.clicks_plus;
        o.clicks_minus = full.clicks_minus;
        o.label = full.label;
    }
    for (auto p : view.sees_bits) o.bits += full.bits.at(p - 2);
    return o;
}

/// P(projected observation | m).
inline protocol::Likelihoods view_likelihoods(const OutcomeModel& model, const ViewSpec& view, Message m) {
    view.validate(model.config());
    protocol::Likelihoods out;
    for (const auto& [obs, l] : model.likelihoods(m)) out[project(obs, view)] += l;
    return out;
}

using Distribution = std::array<double, 4>;  ///< indexed by Message

inline constexpr Distribution kUniformPrior{0.25, 0.25, 0.25, 0.25};

/// Posterior over the four messages given what `view` observed.
inline Distribution exact_posterior(const OutcomeModel& model, const ViewSpec& view, const Observation& observed,
                                    const Distribution& prior = kUniformPrior) {
    Distribution post{};
    double total = 0.0;
    for (Message m : kAllMessages) {
        const auto lk = view_likelihoods(model, view, m);
        const auto it = lk.find(observed);
        const double l = it == lk.end() ? 0.0 : it->second;
        post[static_cast<std::size_t>(m)] = prior[static_cast<std::size_t>(m)] * l;
        total += post[static_cast<std::size_t>(m)];
    }
    if (!(total > 0.0)) {
        throw Error(Errc::InconsistentObservation, "observation " + protocol::to_string(observed) +
                                                       " has zero likelihood under every message");
    }
    for (auto& p : post) p /= total;
    return post;
}

inline Distribution exact_posterior(const ViewSpec& view, const Observation& observed, const RoundConfig& config) {
    return exact_posterior(OutcomeModel(config), view, observed);
}

/// Every observation the view can produce, with its marginal probability.
inline std::map<Observation, double> observation_marginal(const OutcomeModel& model, const ViewSpec& view,
                                                          const Distribution& prior = kUniformPrior) {
    std::map<Observation, double> out;
    for (Message m : kAllMessages)
        for (const auto& [o, l] : view_likelihoods(model, view, m)) out[o] += prior[static_cast<std::size_t>(m)] * l;
    return out;
}

/// Success probability of maximum-posterior guessing: sum_o max_m P(m) P(o|m).
inline double optimal_guess_rate(const OutcomeModel& model, const ViewSpec& view,
                                 const Distribution& prior = kUniformPrior) {
    std::map<Observation, Distribution> joint;
    for (Message m : kAllMessages)
        for (const auto& [o, l] : view_likelihoods(model, view, m))
            joint[o][static_cast<std::size_t>(m)] = prior[static_cast<std::size_t>(m)] * l;
    double rate = 0.0;
    for (const auto& [o, j] : joint) rate += *std::max_element(j.begin(), j.end());
    return rate;
}

inline Distribution prior_over(const std::vector<Message>& messages) {
    Distribution p{};
    for (Message m : messages) p[static_cast<std::size_t>(m)] = 1.0 / static_cast<double>(messages.size());
    return p;
}

/// Maximum-posterior guess; ties are broken uniformly at random.
inline Message guess(const Distribution& posterior, Rng& rng) {
    const double best = *std::max_element(posterior.begin(), posterior.end());
    std::vector<Message> tied;
    for (Message m : kAllMessages)
        if (posterior[static_cast<std::size_t>(m)] >= best * (1.0 - protocol::kTieTolerance)) tied.push_back(m);
    return tied.size() == 1 ? tied.front() : tied[uniform_index(rng, tied.size())];
}

struct RateEstimate {
    std::size_t trials = 0;
    std::size_t successes = 0;

    double rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : std::nan(""); }
    double standard_error() const {
        const double p = rate();
        return trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : std::nan("");
    }
};

struct CheatResult {
    RateEstimate all;      ///< every encode round
    RateEstimate clicked;  ///< rounds with at least one click (or a photonic label in ideal_pnr mode)
};

/// A cheater with `view` guesses Alice's message by maximum posterior, the
/// prior being uniform over `messages`.
inline CheatResult cheat_experiment(const ViewSpec& view, const RoundConfig& config,
                                    const std::vector<Message>& messages, std::size_t n_rounds, std::uint64_t seed,
                                    unsigned threads = 1) {
    if (n_rounds < 1) throw Error(Errc::InvalidConfig, "n_rounds must be >= 1");
    view.validate(config);
    const protocol::Protocol proto(config);
    const auto prior = prior_over(messages);
    std::map<Observation, Distribution> posterior_cache;
    for (const auto& [o, p] : observation_marginal(proto.model(), view, prior))
        if (p > 0.0) posterior_cache[o] = exact_posterior(proto.model(), view, o, prior);

    const protocol::MessageChoice choice{messages};
    std::vector<std::pair<bool, bool>> results(n_rounds);  // (clicked, success)
    parallel_for(n_rounds, threads, [&](std::size_t i) {
        auto rng = derive_stream(seed, i, 1);
        const auto round = proto.run_encode(choice.draw(rng), rng);
        const auto full = round.observation();
        const bool clicked = full.label ? true : (full.clicks_plus + full.clicks_minus) > 0;
        const auto g = guess(posterior_cache.at(project(full, view)), rng);
        results[i] = {clicked, g == *round.sent};
    });
    CheatResult res;
    for (const auto& [clicked, ok] : results) {
        ++res.all.trials;
        res.all.successes += ok;
        if (clicked) {
            ++res.clicked.trials;
            res.clicked.successes += ok;
        }
    }
    return res;
}

// --- eavesdropping -------------------------------------------------------------

enum class EveStrategy { None, InterceptResendAtom, InterceptResendPhoton };
enum class AttackBasis { Z, X };

struct EveModel {
    EveStrategy strategy = EveStrategy::None;
    AttackBasis basis = AttackBasis::Z;  ///< atom attacks only
    std::size_t target = 0;              ///< attacked atom (party index); photon attacks hit cavity A

    static EveModel none() { return {}; }
    static EveModel atom(AttackBasis b, std::size_t target = 0) { return {EveStrategy::InterceptResendAtom, b, target}; }
    static EveModel photon() { return {EveStrategy::InterceptResendPhoton, AttackBasis::Z, 0}; }
};

inline std::string to_string(const EveModel& e) {
    switch (e.strategy) {
    case EveStrategy::None: return "none";
    case EveStrategy::InterceptResendAtom:
        return e.basis == AttackBasis::Z ? "intercept-resend-atom-z" : "intercept-resend-atom-x";
    case EveStrategy::InterceptResendPhoton: return "intercept-resend-photon";
    }
    return "?";
}

inline std::optional<EveModel> parse_eve(std::string_view s) {
    if (s == "none") return EveModel::none();
    if (s == "intercept-resend-atom-z") return EveModel::atom(AttackBasis::Z);
    if (s == "intercept-resend-atom-x") return EveModel::atom(AttackBasis::X);
    if (s == "intercept-resend-photon") return EveModel::photon();
    return std::nullopt;
}

namespace detail {

/// Projectors of Eve's measurement on one atom, in the [g, e] basis.
inline std::array<SiteMatrix, 2> attack_projectors(AttackBasis b) {
    if (b == AttackBasis::Z) return {SiteMatrix(2, {1.0, 0.0, 0.0, 0.0}), SiteMatrix(2, {0.0, 0.0, 0.0, 1.0})};
    return {SiteMatrix(2, {0.5, 0.5, 0.5, 0.5}), SiteMatrix(2, {0.5, -0.5, -0.5, 0.5})};
}

/// Eve measures the target atom and resends the eigenstate she found.
inline StateVector intercept_resend_atom(const StateVector& s, const EveModel& eve, Rng& rng) {
    const auto proj = attack_projectors(eve.basis);
    auto first = apply_site_operator(s, eve.target, proj[0]);
    const double p0 = norm_sq(first) / norm_sq(s);
    if (uniform01(rng) < p0) return normalized(std::move(first));
    return normalized(apply_site_operator(s, eve.target, proj[1]));
}

/// Eve counts the photons leaving cavity A and re-emits the same Fock state.
inline StateVector intercept_resend_photon(const StateVector& s, Rng& rng) {
    const auto roles = protocol::Roles::of(s.layout());
    std::map<int, double> w;
    for (std::size_t i = 0; i < s.size(); ++i) w[s.layout().occupation(i, roles.cavity_a())] += std::norm(s[i]);
    double total = 0.0;
    for (auto& [n, p] : w) total += p;
    double u = uniform01(rng) * total;
    int pick = w.rbegin()->first;
    for (auto& [n, p] : w) {
        if (p <= 0.0) continue;
        if (u < p) {
            pick = n;
            break;
        }
        u -= p;
    }
    StateVector out = s;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (s.layout().occupation(i, roles.cavity_a()) != pick) out[i] = 0.0;
    return normalized(std::move(out));
}

}  // namespace detail

struct EavesdropResult {
    std::size_t rounds = 0;
    std::size_t conclusive_rounds = 0;
    std::size_t violations = 0;

    double detection_rate() const {
        return conclusive_rounds ? static_cast<double>(violations) / static_cast<double>(conclusive_rounds) : std::nan("");
    }
    double detection_stderr() const {
        const double p = detection_rate();
        return conclusive_rounds ? std::sqrt(p * (1.0 - p) / static_cast<double>(conclusive_rounds)) : std::nan("");
    }
    double conclusive_fraction() const {
        return rounds ? static_cast<double>(conclusive_rounds) / static_cast<double>(rounds) : std::nan("");
    }
};

/// Check rounds under attack. Atom attacks (and no attack) use the GHZ x/y
/// parity test; photon attacks are caught on sacrificed encode rounds with
/// known psi-branch messages, a decoded message differing from the sent one
/// counting as a violation and any non-aborted round as conclusive.
inline EavesdropResult eavesdrop_experiment(const EveModel& eve, const RoundConfig& config, std::size_t n_check_rounds,
                                            std::uint64_t seed, unsigned threads = 1) {
    if (n_check_rounds < 1) throw Error(Errc::InvalidConfig, "n_check_rounds must be >= 1");
    config.validate();
    const auto n_atoms = static_cast<std::size_t>(config.n_parties());
    if (eve.strategy == EveStrategy::InterceptResendAtom && eve.target >= n_atoms) {
        throw Error(Errc::InvalidConfig, "eve target must be an atom of the GHZ state");
    }
    std::vector<std::pair<bool, bool>> results(n_check_rounds);  // (conclusive, violation)

    if (eve.strategy == EveStrategy::InterceptResendPhoton) {
        const protocol::Protocol proto(config);
        const protocol::PhotonTamper tamper = [](const StateVector& s, Rng& rng) {
            return detail::intercept_resend_photon(s, rng);
        };
        parallel_for(n_check_rounds, threads, [&](std::size_t i) {
            auto rng = derive_stream(seed, i, 2);
            const auto r = proto.run_encode(protocol::MessageChoice::psi_branch().draw(rng), rng, tamper);
            results[i] = {r.decoded.has_value(), r.decoded && *r.decoded != *r.sent};
        });
    } else {
        const auto ghz = protocol::prepare_ghz(config.n_parties(), config.cutoff);
        parallel_for(n_check_rounds, threads, [&](std::size_t i) {
            auto rng = derive_stream(seed, i, 2);
            StateVector s = ghz;
            if (eve.strategy == EveStrategy::InterceptResendAtom) s = detail::intercept_resend_atom(s, eve, rng);
            const auto r = protocol::run_parity_check(s, n_atoms, rng);
            results[i] = {r.conclusive, r.violation};
        });
    }
    EavesdropResult res;
    for (const auto& [c, v] : results) {
        ++res.rounds;
        res.conclusive_rounds += c;
        res.violations += v;
    }
    return res;
}

/// Exact violation rate on conclusive rounds for atom attacks (or none),
/// enumerating Eve's outcome branches and every conclusive basis choice.
inline double exact_detection_rate(const EveModel& eve, const RoundConfig& config) {
    if (eve.strategy == EveStrategy::InterceptResendPhoton) {
        throw Error(Errc::InvalidConfig, "exact enumeration covers atom attacks only");
    }
    const auto n_atoms = static_cast<std::size_t>(config.n_parties());
    const auto ghz = protocol::prepare_ghz(config.n_parties(), config.cutoff);
    std::vector<StateVector> branches;
    if (eve.strategy == EveStrategy::None) {
        branches.push_back(ghz);
    } else {
        for (const auto& p : detail::attack_projectors(eve.basis)) {
            auto b = apply_site_operator(ghz, eve.target, p);
            if (norm_sq(b) > 0.0) branches.push_back(std::move(b));
        }
    }
    double total = 0.0;
    std::size_t combos = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n_atoms); ++mask) {
        std::vector<protocol::CheckBasis> bases;
        for (std::size_t a = 0; a < n_atoms; ++a)
            bases.push_back((mask >> (n_atoms - 1 - a)) & 1 ? protocol::CheckBasis::Y : protocol::CheckBasis::X);
        if (!protocol::is_conclusive(bases)) continue;
        ++combos;
        const int expected = protocol::expected_parity(bases);
        for (const auto& b : branches) {
            StateVector r = b;
            for (std::size_t a = 0; a < n_atoms; ++a) r = apply_site_operator(r, a, protocol::check_basis_rotation(bases[a]));
            for (std::size_t i = 0; i < r.size(); ++i) {
                int prod = 1;
                for (std::size_t a = 0; a < n_atoms; ++a) prod *= r.layout().occupation(i, a) == kGround ? 1 : -1;
                if (prod != expected) total += std::norm(r[i]);
            }
        }
    }
    return total / static_cast<double>(combos);
}

}  // namespace cavqdc::security
