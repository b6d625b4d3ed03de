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
 * Conditional (no-jump) atom-cavity evolution under the effective Hamiltonian
 *
 *     H_e = i delta (a |e><g| - a^dag |g><e|) - i k a^dag a,   delta = g Omega / Delta,
 *
 * with closed-form excitation-transfer coefficients, a fixed-step RK4
 * propagator over the full tensor-product space, and the transfer-time solver.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "cavqdc/error.hpp"
#include "cavqdc/hilbert.hpp"

namespace cavqdc {

/// Couplings are angular frequencies, rates are inverse times. Validated on
/// construction and immutable afterwards.
class PhysicalParams {
public:
    PhysicalParams(double g, double Omega, double Delta, double k, double gamma = 0.0)
        : g_(g), Omega_(Omega), Delta_(Delta), k_(k), gamma_(gamma) {
        auto bad = [](const std::string& what) { throw Error(Errc::InvalidParams, what); };
        if (!(std::isfinite(g) && g > 0)) bad("g must be finite and > 0");
        if (!(std::isfinite(Omega) && Omega > 0)) bad("Omega must be finite and > 0");
        if (!(std::isfinite(Delta) && Delta > 0)) bad("Delta must be finite and > 0");
        if (!(std::isfinite(k) && k >= 0)) bad("k must be finite and >= 0");
        if (!(std::isfinite(gamma) && gamma >= 0)) bad("gamma must be finite and >= 0");
        if (!(2.0 * delta_eff() > k)) {
            bad("overdamped regime: need 2 delta > k (delta = " + std::to_string(delta_eff()) +
                ", k = " + std::to_string(k) + ")");
        }
    }

    /// g = Omega = Delta = delta, so that g Omega / Delta = delta.
    static PhysicalParams from_effective(double delta, double k, double gamma = 0.0) {
        return PhysicalParams(delta, delta, delta, k, gamma);
    }

    double g() const { return g_; }
    double Omega() const { return Omega_; }
    double Delta() const { return Delta_; }
    double k() const { return k_; }
    double gamma() const { return gamma_; }

    double delta_eff() const { return g_ * Omega_ / Delta_; }
    double Omega_k() const {
        const double d = delta_eff();
        return std::sqrt(4.0 * d * d - k_ * k_);
    }

    bool operator==(const PhysicalParams&) const = default;

private:
    double g_, Omega_, Delta_, k_, gamma_;
};

/// An (atom, cavity mode) pair coupled by one copy of H_e.
struct CoupledPair {
    std::size_t atom_site;
    std::size_t mode_site;
};

namespace detail {

inline void check_pairs(const SystemLayout& layout, const std::vector<CoupledPair>& pairs) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        if (p.atom_site >= layout.num_sites() || layout.site(p.atom_site).kind != SiteKind::Atom) {
            throw Error(Errc::NotAnAtomSite, "pair atom site " + std::to_string(p.atom_site));
        }
        if (p.mode_site >= layout.num_sites() || layout.site(p.mode_site).kind != SiteKind::CavityMode) {
            throw Error(Errc::NotAModeSite, "pair mode site " + std::to_string(p.mode_site));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (pairs[j].atom_site == p.atom_site || pairs[j].mode_site == p.mode_site) {
                throw Error(Errc::DimensionMismatch, "coupled pairs must use distinct sites");
            }
        }
    }
}

/// out += H_e(pair) * in, on raw amplitude arrays.
inline void accumulate_pair_hamiltonian(const SystemLayout& layout, const CoupledPair& pair, double delta,
                                        double k, std::span<const cplx> in, std::span<cplx> out) {
    const std::size_t sa = layout.stride(pair.atom_site);
    const std::size_t sm = layout.stride(pair.mode_site);
    const int cutoff = layout.site(pair.mode_site).cutoff;
    const cplx i_delta(0.0, delta);
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
        const cplx amp = in[idx];
        if (amp == 0.0) continue;
        const int atom = layout.occupation(idx, pair.atom_site);
        const int n = layout.occupation(idx, pair.mode_site);
        if (atom == kGround) {
            // i delta a |e><g|
            if (n >= 1) out[idx + sa - sm] += i_delta * std::sqrt(static_cast<double>(n)) * amp;
        } else {
            // -i delta a^dag |g><e|
            if (n == cutoff) {
                if (std::abs(amp) > kDumpThreshold) {
                    throw Error(Errc::TruncationOverflow, "H_e would raise mode site " +
                                                              std::to_string(pair.mode_site) +
                                                              " past its cutoff");
                }
            } else {
                out[idx - sa + sm] -= i_delta * std::sqrt(static_cast<double>(n + 1)) * amp;
            }
        }
        if (n > 0) out[idx] += cplx(0.0, -k * n) * amp;
    }
}

}  // namespace detail

/// H_total |state> with H_total the sum of H_e over `pairs`.
inline StateVector hamiltonian_apply(const StateVector& state, const std::vector<CoupledPair>& pairs,
                                     const PhysicalParams& params) {
    detail::check_pairs(state.layout(), pairs);
    StateVector out(state.layout());
    for (const auto& p : pairs) {
        detail::accumulate_pair_hamiltonian(state.layout(), p, params.delta_eff(), params.k(),
                                            state.amplitudes(), out.amplitudes());
    }
    return out;
}

/// H_e |state> for a single pair (not the propagated state).
inline StateVector effective_hamiltonian_apply(const StateVector& state, std::size_t atom_site,
                                               std::size_t mode_site, const PhysicalParams& params) {
    return hamiltonian_apply(state, {{atom_site, mode_site}}, params);
}

struct TransferCoefficients {
    cplx alpha;
    cplx beta;
};

/// |e,0> -> alpha |e,0> + beta |g,1> after time t:
///   alpha = e^{-kt/2} [cos(W t/2) + (k/W) sin(W t/2)]
///   beta  = -(2 delta / W) e^{-kt/2} sin(W t/2),     W = sqrt(4 delta^2 - k^2).
inline TransferCoefficients alpha_beta(const PhysicalParams& params, double t) {
    if (!(t >= 0.0)) throw Error(Errc::InvalidParams, "time must be >= 0");
    const double w = params.Omega_k();
    const double k = params.k();
    const double decay = std::exp(-0.5 * k * t);
    const double c = std::cos(0.5 * w * t);
    const double s = std::sin(0.5 * w * t);
    return {decay * (c + (k / w) * s), -(2.0 * params.delta_eff() / w) * decay * s};
}

/// Smallest t > 0 with alpha(t) = 0, i.e. tan(W t/2) = -W/k. Bracketed
/// bisection on (0, 2 pi / W], run until the bracket stops shrinking.
inline double transfer_time(const PhysicalParams& params) {
    double lo = 0.0;
    double hi = 2.0 * std::numbers::pi / params.Omega_k();
    auto alpha = [&](double t) { return alpha_beta(params, t).alpha.real(); };
    // alpha(0) = 1 > 0, alpha(2 pi / W) = -e^{-pi k / W} < 0
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (alpha(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::abs(alpha(lo)) <= std::abs(alpha(hi)) ? lo : hi;
}

/// Step size guidance: dt <= min(t / 100, 1e-3 / max(delta, k)).
inline double default_step(const PhysicalParams& params, double t) {
    const double rate = std::max(params.delta_eff(), params.k());
    double dt = 1e-3 / rate;
    if (t > 0.0) dt = std::min(dt, t / 100.0);
    return dt;
}

/// Fixed-step RK4 for d|psi>/dt = -i H_total |psi>. The step is shrunk so
/// that an integer number of steps lands exactly on t.
inline StateVector evolve_conditional(const StateVector& state, const std::vector<CoupledPair>& pairs,
                                      const PhysicalParams& params, double t, double dt) {
    if (!(t >= 0.0)) throw Error(Errc::InvalidParams, "evolution time must be >= 0");
    if (!(dt > 0.0)) throw Error(Errc::InvalidParams, "time step must be > 0");
    detail::check_pairs(state.layout(), pairs);
    if (t == 0.0 || pairs.empty()) return state;

    const auto& layout = state.layout();
    const std::size_t n = state.size();
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t / dt - 1e-9)));
    const double h = t / static_cast<double>(steps);
    const double delta = params.delta_eff();
    const double k = params.k();

    std::vector<cplx> psi(state.amplitudes().begin(), state.amplitudes().end());
    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
    const cplx minus_i(0.0, -1.0);

    auto deriv = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        std::fill(out.begin(), out.end(), cplx(0.0));
        for (const auto& p : pairs) detail::accumulate_pair_hamiltonian(layout, p, delta, k, in, out);
        for (auto& v : out) v *= minus_i;
    };

    for (std::size_t step = 0; step < steps; ++step) {
        deriv(psi, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = psi[i] + 0.5 * h * k1[i];
        deriv(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = psi[i] + 0.5 * h * k2[i];
        deriv(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = psi[i] + h * k3[i];
        deriv(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) psi[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return StateVector(layout, std::move(psi));
}

/// Max elementwise change when the step is halved.
inline double step_halving_discrepancy(const StateVector& state, const std::vector<CoupledPair>& pairs,
                                       const PhysicalParams& params, double t, double dt) {
    const auto coarse = evolve_conditional(state, pairs, params, t, dt);
    const auto fine = evolve_conditional(state, pairs, params, t, 0.5 * dt);
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) worst = std::max(worst, std::abs(coarse[i] - fine[i]));
    return worst;
}

/// evolve_conditional plus the step-halving diagnostic; StepTooCoarse above `tolerance`.
inline StateVector evolve_conditional_checked(const StateVector& state, const std::vector<CoupledPair>& pairs,
                                              const PhysicalParams& params, double t, double dt,
                                              double tolerance = 1e-6) {
    const auto coarse = evolve_conditional(state, pairs, params, t, dt);
    const auto fine = evolve_conditional(state, pairs, params, t, 0.5 * dt);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        if (std::abs(coarse[i] - fine[i]) > tolerance) {
            throw Error(Errc::StepTooCoarse, "halving dt changed amplitude " + std::to_string(i) + " by " +
                                                 std::to_string(std::abs(coarse[i] - fine[i])));
        }
    }
    return fine;
}

/// Free decay of cavity modes (no atom coupling): each amplitude picks up
/// e^{-k n t} with n the total photon number over `mode_sites`.
inline StateVector decay_modes(const StateVector& state, const std::vector<std::size_t>& mode_sites, double k,
                               double t) {
    for (auto m : mode_sites) detail::require_kind(state, m, SiteKind::CavityMode);
    StateVector out = state;
    for (std::size_t i = 0; i < out.size(); ++i) {
        int photons = 0;
        for (auto m : mode_sites) photons += state.layout().occupation(i, m);
        if (photons) out[i] *= std::exp(-k * photons * t);
    }
    return out;
}

}  // namespace cavqdc
