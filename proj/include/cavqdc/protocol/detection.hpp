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
 * Beam-splitter detection window.
 *
 * simulate_window() is a Monte-Carlo wavefunction unraveling with collapse
 * operators C+- = sqrt(2k)(a_A +- a_B)/sqrt2. The exact counterpart,
 * click_count_distribution(), rewrites the cavity state in the output modes
 * b+- = (a_A +- a_B)/sqrt2, which decay independently at norm rate 2k per
 * photon, so per-detector counts are binomial in the b+- photon numbers.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "cavqdc/dynamics.hpp"
#include "cavqdc/random.hpp"
#include "cavqdc/protocol/pipeline.hpp"
#include "cavqdc/protocol/types.hpp"

namespace cavqdc::protocol {

namespace detail {

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline double binomial_pmf(int n, int k, double p) {
    if (k < 0 || k > n) return 0.0;
    return binomial(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

}  // namespace detail

/// Two-mode amplitudes in the (b+, b-) Fock basis.
inline std::map<std::pair<int, int>, cplx> to_output_modes(const std::map<std::pair<int, int>, cplx>& cavity) {
    std::map<std::pair<int, int>, cplx> out;
    for (const auto& [n, a] : cavity) {
        const auto [na, nb] = n;
        const int total = na + nb;
        const double pre = std::pow(2.0, -0.5 * total) / std::sqrt(detail::factorial(na) * detail::factorial(nb));
        for (int i = 0; i <= na; ++i) {
            for (int j = 0; j <= nb; ++j) {
                const int mp = i + j;
                const int mm = total - mp;
                const double sign = ((nb - j) % 2) ? -1.0 : 1.0;
                const double c = pre * detail::binomial(na, i) * detail::binomial(nb, j) * sign *
                                 std::sqrt(detail::factorial(mp) * detail::factorial(mm));
                out[{mp, mm}] += c * a;
            }
        }
    }
    return out;
}

/// Probability that a photon present at the start of the window is
/// registered: eta (1 - e^{-2 k_w t_w}).
inline double detection_probability(const RoundConfig& config) {
    return config.detector.efficiency * -std::expm1(-2.0 * config.window_rate() * config.t_window);
}

/// Exact distribution of (n+, n-) click counts, jointly weighted by the
/// squared norm of the cavity component (unnormalized input allowed).
inline std::map<std::pair<int, int>, double> click_count_distribution(
    const std::map<std::pair<int, int>, cplx>& cavity, double q, double dark_prob) {
    std::map<std::pair<int, int>, double> real;
    for (const auto& [m, a] : to_output_modes(cavity)) {
        const double p = std::norm(a);
        if (p == 0.0) continue;
        for (int rp = 0; rp <= m.first; ++rp)
            for (int rm = 0; rm <= m.second; ++rm)
                real[{rp, rm}] += p * detail::binomial_pmf(m.first, rp, q) * detail::binomial_pmf(m.second, rm, q);
    }
    std::map<std::pair<int, int>, double> out;
    for (const auto& [r, p] : real) {
        for (int dp = 0; dp <= 1; ++dp)
            for (int dm = 0; dm <= 1; ++dm) {
                const double pd = (dp ? dark_prob : 1.0 - dark_prob) * (dm ? dark_prob : 1.0 - dark_prob);
                if (pd == 0.0) continue;
                out[{r.first + dp, r.second + dm}] += p * pd;
            }
    }
    return out;
}

namespace detail {

/// Squared norm after free decay for time tau, grouped by total photon number.
inline double no_jump_norm(const std::vector<std::pair<int, double>>& by_photons, double rate, double tau) {
    double acc = 0.0;
    for (const auto& [n, w] : by_photons) acc += w * std::exp(-2.0 * rate * n * tau);
    return acc;
}

inline void add_dark_counts(DetectionRecord& rec, const RoundConfig& config, Rng& rng) {
    for (Channel c : {Channel::DarkDPlus, Channel::DarkDMinus}) {
        const bool fires = bernoulli(rng, config.detector.dark_prob);
        const double t = uniform01(rng) * config.t_window;
        if (fires) rec.events.push_back({t, c});
    }
    std::stable_sort(rec.events.begin(), rec.events.end(),
                     [](const ClickEvent& a, const ClickEvent& b) { return a.time < b.time; });
}

}  // namespace detail

struct WindowResult {
    DetectionRecord record;
    StateVector state;  ///< normalized conditional state at the end of the window
};

/// One Monte-Carlo wavefunction trajectory through the detection window.
/// Draw u, decay freely until the no-jump norm^2 reaches u (or the window
/// ends), jump through C+ or C- with probability proportional to
/// <C+-^dag C+->, register it with probability eta, repeat. Dark counts are
/// superimposed independently per detector.
inline WindowResult simulate_window(const StateVector& state, const RoundConfig& config, Rng& rng) {
    const auto roles = Roles::of(state.layout());
    const double rate = config.window_rate();
    DetectionRecord rec;
    rec.window = config.t_window;
    StateVector psi = norm_sq(state) > 0.0 ? normalized(state) : state;
    const std::vector<std::size_t> modes{roles.cavity_a(), roles.cavity_b()};
    double t = 0.0;

    while (rate > 0.0) {
        std::map<int, double> grouped;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            const int n = psi.layout().occupation(i, roles.cavity_a()) + psi.layout().occupation(i, roles.cavity_b());
            if (psi[i] != 0.0) grouped[n] += std::norm(psi[i]);
        }
        std::vector<std::pair<int, double>> by_photons(grouped.begin(), grouped.end());
        const bool has_photons = std::any_of(by_photons.begin(), by_photons.end(),
                                             [](auto& p) { return p.first > 0 && p.second > 0.0; });
        const double u = uniform_open0(rng);
        const double remaining = config.t_window - t;
        if (!has_photons || detail::no_jump_norm(by_photons, rate, remaining) >= u) {
            psi = normalized(decay_modes(psi, modes, rate, remaining));
            break;
        }
        double lo = 0.0, hi = remaining;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (detail::no_jump_norm(by_photons, rate, mid) > u) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        t += hi;
        psi = normalized(decay_modes(psi, modes, rate, hi));

        auto plus = jump_apply(psi, JumpSign::Plus, rate);
        auto minus = jump_apply(psi, JumpSign::Minus, rate);
        const double wp = norm_sq(plus);
        const double wm = norm_sq(minus);
        const bool take_plus = uniform01(rng) * (wp + wm) < wp;
        psi = normalized(take_plus ? std::move(plus) : std::move(minus));
        ++rec.photons_emitted;
        if (bernoulli(rng, config.detector.efficiency)) {
            rec.events.push_back({t, take_plus ? Channel::DPlus : Channel::DMinus});
        }
    }
    detail::add_dark_counts(rec, config, rng);
    return {std::move(rec), std::move(psi)};
}

/// Record of a window in which no photon was present (dark counts only).
inline DetectionRecord dark_only_window(const RoundConfig& config, Rng& rng) {
    DetectionRecord rec;
    rec.window = config.t_window;
    detail::add_dark_counts(rec, config, rng);
    return rec;
}

}  // namespace cavqdc::protocol
