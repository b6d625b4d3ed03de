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
 * GHZ x/y parity check used by security-check rounds. Each party measures its
 * atom in x or y. Rounds with an even number of y's are conclusive; for
 * (|e..e> + |g..g>)/sqrt2 the product of outcomes is then (-1)^{#y/2}
 * (+1 for xxx, -1 for one x and two y's when three parties take part).
 */

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "cavqdc/hilbert.hpp"
#include "cavqdc/random.hpp"

namespace cavqdc::protocol {

enum class CheckBasis { X, Y };

/// Rotation taking the +1 eigenvector of the chosen Pauli to |g>.
/// Outcome g reads +1, e reads -1 (g plays the role of |0>).
inline SiteMatrix check_basis_rotation(CheckBasis b) {
    const double r = std::numbers::sqrt2 / 2.0;
    if (b == CheckBasis::X) return SiteMatrix(2, {r, r, r, -r});
    // H S^dag
    return SiteMatrix(2, {r, cplx(0.0, -r), r, cplx(0.0, r)});
}

struct ParityCheckResult {
    std::vector<CheckBasis> bases;
    std::vector<int> outcomes;  ///< +1 / -1 per atom
    bool conclusive = false;
    int product = 1;
    int expected = 1;
    bool violation = false;
};

inline bool is_conclusive(const std::vector<CheckBasis>& bases) {
    int ys = 0;
    for (auto b : bases) ys += b == CheckBasis::Y;
    return ys % 2 == 0;
}

inline int expected_parity(const std::vector<CheckBasis>& bases) {
    int ys = 0;
    for (auto b : bases) ys += b == CheckBasis::Y;
    return (ys / 2) % 2 ? -1 : 1;
}

/// Measures atoms [0, n_atoms) of `state` in the given bases and samples the
/// joint outcome by the Born rule (other sites traced out).
inline ParityCheckResult measure_parity(const StateVector& state, std::size_t n_atoms,
                                        const std::vector<CheckBasis>& bases, Rng& rng) {
    if (bases.size() != n_atoms) throw Error(Errc::DimensionMismatch, "one basis per atom");
    StateVector rotated = state;
    for (std::size_t a = 0; a < n_atoms; ++a) {
        cavqdc::detail::require_kind(state, a, SiteKind::Atom);
        rotated = apply_site_operator(rotated, a, check_basis_rotation(bases[a]));
    }
    const auto& layout = rotated.layout();
    const std::size_t tail = layout.stride(n_atoms - 1);
    std::vector<double> probs(rotated.size() / tail, 0.0);
    for (std::size_t i = 0; i < rotated.size(); ++i) probs[i / tail] += std::norm(rotated[i]);
    double total = 0.0;
    for (double p : probs) total += p;
    double u = uniform01(rng) * total;
    std::size_t pick = probs.size() - 1;
    for (std::size_t c = 0; c < probs.size(); ++c) {
        if (u < probs[c]) {
            pick = c;
            break;
        }
        u -= probs[c];
    }

    ParityCheckResult r;
    r.bases = bases;
    for (std::size_t a = 0; a < n_atoms; ++a) {
        const int occ = layout.occupation(pick * tail, a);
        r.outcomes.push_back(occ == kGround ? 1 : -1);
        r.product *= r.outcomes.back();
    }
    r.conclusive = is_conclusive(bases);
    r.expected = expected_parity(bases);
    r.violation = r.conclusive && r.product != r.expected;
    return r;
}

/// Random uniform x/y basis per atom, then measure_parity.
inline ParityCheckResult run_parity_check(const StateVector& state, std::size_t n_atoms, Rng& rng) {
    std::vector<CheckBasis> bases;
    for (std::size_t a = 0; a < n_atoms; ++a) bases.push_back(bernoulli(rng, 0.5) ? CheckBasis::Y : CheckBasis::X);
    return measure_parity(state, n_atoms, bases, rng);
}

}  // namespace cavqdc::protocol
