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

#include <numbers>

#include "cavqdc/dynamics.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace {

using namespace cavqdc;

const SystemLayout kPair({SiteSpec::atom(), SiteSpec::mode(1)});

StateVector evolve(const StateVector& s, const std::vector<CoupledPair>& pairs, const PhysicalParams& p, double t) {
    return evolve_conditional(s, pairs, p, t, default_step(p, t));
}

TEST(PhysicalParams, DerivedQuantities) {
    const PhysicalParams p(2.0, 3.0, 4.0, 0.5, 0.1);
    EXPECT_DOUBLE_EQ(p.delta_eff(), 1.5);
    EXPECT_DOUBLE_EQ(p.Omega_k(), std::sqrt(9.0 - 0.25));
    EXPECT_EQ(PhysicalParams::from_effective(1.0, 0.2).delta_eff(), 1.0);
}

TEST(PhysicalParams, RejectsInvalidInputs) {
    for (auto make : std::vector<std::function<void()>>{
             [] { PhysicalParams(0.0, 1.0, 1.0, 0.1); },
             [] { PhysicalParams(1.0, -1.0, 1.0, 0.1); },
             [] { PhysicalParams(1.0, 1.0, 0.0, 0.1); },
             [] { PhysicalParams(1.0, 1.0, 1.0, -0.1); },
             [] { PhysicalParams(1.0, 1.0, 1.0, 0.1, -1.0); },
             [] { PhysicalParams::from_effective(1.0, 2.0); },
             [] { PhysicalParams::from_effective(1.0, 3.0); },
         }) {
        EXPECT_THROW(make(), Error);
    }
}

TEST(EffectiveHamiltonian, ActionOnBasisStates) {
    const auto p = PhysicalParams::from_effective(0.7, 0.3);
    const auto dark = effective_hamiltonian_apply(basis_state(kPair, {0, 0}), 0, 1, p);
    EXPECT_EQ(norm_sq(dark), 0.0);
    const auto e0 = effective_hamiltonian_apply(basis_state(kPair, {1, 0}), 0, 1, p);
    EXPECT_NEAR(std::abs(e0.at({0, 1}) - cplx(0.0, -0.7)), 0.0, 1e-15);
    EXPECT_NEAR(norm_sq(e0), 0.49, 1e-15);
    const auto g1 = effective_hamiltonian_apply(basis_state(kPair, {0, 1}), 0, 1, p);
    EXPECT_NEAR(std::abs(g1.at({1, 0}) - cplx(0.0, 0.7)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g1.at({0, 1}) - cplx(0.0, -0.3)), 0.0, 1e-15);
}

TEST(EffectiveHamiltonian, WrongSiteKinds) {
    const auto p = PhysicalParams::from_effective(1.0, 0.1);
    const auto s = basis_state(kPair, {1, 0});
    EXPECT_THROW(effective_hamiltonian_apply(s, 1, 0, p), Error);
    EXPECT_THROW(effective_hamiltonian_apply(s, 0, 0, p), Error);
}

TEST(EffectiveHamiltonian, CreationBeyondCutoffOverflows) {
    const SystemLayout l({SiteSpec::atom(), SiteSpec::atom(), SiteSpec::mode(1)});
    const auto p = PhysicalParams::from_effective(1.0, 0.1);
    try {
        hamiltonian_apply(basis_state(l, {1, 1, 1}), {{0, 2}}, p);
        ADD_FAILURE() << "expected TruncationOverflow";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TruncationOverflow);
    }
}

TEST(AlphaBeta, Examples) {
    const auto t0 = alpha_beta(PhysicalParams::from_effective(1.0, 0.2), 0.0);
    EXPECT_EQ(t0.alpha, cplx(1.0));
    EXPECT_EQ(t0.beta, cplx(0.0));
    const auto rabi = alpha_beta(PhysicalParams::from_effective(1.0, 0.0), std::numbers::pi / 2.0);
    EXPECT_NEAR(rabi.alpha.real(), 0.0, 1e-15);
    EXPECT_NEAR(rabi.beta.real(), -1.0, 1e-15);
    const auto damped = alpha_beta(PhysicalParams::from_effective(1.0, 0.2), 1.0);
    EXPECT_NEAR(damped.alpha.real(), 0.56897189, 1e-8);
    EXPECT_NEAR(damped.beta.real(), -0.76275768, 1e-8);
    EXPECT_THROW(alpha_beta(PhysicalParams::from_effective(1.0, 0.2), -1.0), Error);
}

TEST(TransferTime, Examples) {
    EXPECT_NEAR(transfer_time(PhysicalParams::from_effective(1.0, 0.0)), std::numbers::pi / 2.0, 1e-12);
    EXPECT_NEAR(transfer_time(PhysicalParams::from_effective(1.0, 0.2)), 1.6793817546235015, 1e-12);
    const auto wk = PhysicalParams::from_effective(1.0, 0.2).Omega_k();
    EXPECT_NEAR(transfer_time(PhysicalParams::from_effective(1.0, 0.2)), (std::numbers::pi - std::atan(wk / 0.2)) * 2 / wk,
                1e-12);
    const auto near = PhysicalParams::from_effective(1.0, 1.9);
    EXPECT_NEAR(near.Omega_k(), 0.6245, 1e-4);
    EXPECT_LT(std::abs(alpha_beta(near, transfer_time(near)).alpha), 1e-10);
}

TEST(EvolveConditional, DarkStateIsStationary) {
    const auto p = PhysicalParams::from_effective(1.0, 0.3);
    const auto out = evolve(basis_state(kPair, {0, 0}), {{0, 1}}, p, 3.7);
    EXPECT_EQ(out.at({0, 0}), cplx(1.0));
    EXPECT_EQ(norm_sq(out), 1.0);
}

TEST(EvolveConditional, MatchesClosedForm) {
    const auto p = PhysicalParams::from_effective(1.0, 0.2);
    const auto out = evolve(basis_state(kPair, {1, 0}), {{0, 1}}, p, 1.0);
    const auto ab = alpha_beta(p, 1.0);
    EXPECT_LT(std::abs(out.at({1, 0}) - ab.alpha), 1e-8);
    EXPECT_LT(std::abs(out.at({0, 1}) - ab.beta), 1e-8);
}

TEST(EvolveConditional, GhzAtTransferTime) {
    const SystemLayout l({SiteSpec::atom(), SiteSpec::atom(), SiteSpec::atom(), SiteSpec::mode(1), SiteSpec::mode(1)});
    StateVector ghz(l);
    const double r = 1.0 / std::sqrt(2.0);
    ghz[l.index({1, 1, 1, 0, 0})] = r;
    ghz[l.index({0, 0, 0, 0, 0})] = r;
    const auto p = PhysicalParams::from_effective(1.0, 0.2);
    const double ts = transfer_time(p);
    const auto out = evolve(ghz, {{0, 3}, {1, 4}}, p, ts);
    const double b = alpha_beta(p, ts).beta.real();
    EXPECT_NEAR(out.at({0, 0, 1, 1, 1}).real(), r * b * b, 1e-8);
    EXPECT_NEAR(out.at({0, 0, 0, 0, 0}).real(), r, 1e-15);
    EXPECT_NEAR(norm_sq(out), (std::pow(b, 4) + 1.0) / 2.0, 1e-8);
}

TEST(EvolveConditional, RejectsBadArguments) {
    const auto p = PhysicalParams::from_effective(1.0, 0.2);
    const auto s = basis_state(kPair, {1, 0});
    EXPECT_THROW(evolve_conditional(s, {{0, 1}}, p, -1.0, 0.01), Error);
    EXPECT_THROW(evolve_conditional(s, {{0, 1}}, p, 1.0, 0.0), Error);
}

TEST(EvolveConditional, StepTooCoarseIsReported) {
    const auto p = PhysicalParams::from_effective(1.0, 0.2);
    const auto s = basis_state(kPair, {1, 0});
    try {
        evolve_conditional_checked(s, {{0, 1}}, p, 5.0, 1.0);
        ADD_FAILURE() << "expected StepTooCoarse";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::StepTooCoarse);
    }
    EXPECT_NO_THROW(evolve_conditional_checked(s, {{0, 1}}, p, 5.0, 1e-3));
    EXPECT_LT(step_halving_discrepancy(s, {{0, 1}}, p, 5.0, 1e-3), 1e-10);
}

TEST(DecayModes, AmplitudeFallsPerPhoton) {
    const SystemLayout l({SiteSpec::mode(2)});
    StateVector s(l, {1.0, 1.0, 1.0});
    const auto out = decay_modes(s, {0}, 0.3, 2.0);
    EXPECT_DOUBLE_EQ(out[0].real(), 1.0);
    EXPECT_NEAR(out[1].real(), std::exp(-0.6), 1e-15);
    EXPECT_NEAR(out[2].real(), std::exp(-1.2), 1e-15);
}

// --- properties ---------------------------------------------------------------

TEST(DynamicsProperty, OracleEquivalenceGrid) {
    for (double delta : {0.5, 1.0, 2.0}) {
        for (double k : {0.0, 0.1, 0.5}) {
            const auto p = PhysicalParams::from_effective(delta, k);
            for (int i = 0; i <= 16; ++i) {
                const double t = i * 4.0 * std::numbers::pi / p.Omega_k() / 16.0;
                const auto ab = alpha_beta(p, t);
                const auto ref = oracle::two_level(delta, k, t);
                ASSERT_NEAR(ab.alpha.real(), ref[0], 1e-8) << delta << " " << k << " " << t;
                ASSERT_NEAR(ab.beta.real(), ref[1], 1e-8);
                const auto out = evolve(basis_state(kPair, {1, 0}), {{0, 1}}, p, t);
                ASSERT_NEAR(out.at({1, 0}).real(), ref[0], 1e-8);
                ASSERT_NEAR(out.at({0, 1}).real(), ref[1], 1e-8);
            }
        }
    }
}

TEST(DynamicsProperty, TransferTimeIdentity) {
    for (int trial = 0; trial < 100; ++trial) {
        const double delta = gen::real(0.05, 5.0);
        const double k = gen::real(0.0, 1.99 * delta);
        const auto p = PhysicalParams::from_effective(delta, k);
        const double ts = transfer_time(p);
        const auto ab = alpha_beta(p, ts);
        ASSERT_GT(ts, 0.0);
        ASSERT_LT(std::abs(ab.alpha), 1e-10);
        ASSERT_NEAR(ab.beta.real(), -std::exp(-k * ts / 2.0), 1e-10);
    }
}

TEST(DynamicsProperty, LosslessConservesProbability) {
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = PhysicalParams::from_effective(gen::real(0.1, 3.0), 0.0);
        const auto ab = alpha_beta(p, gen::real(0.0, 20.0));
        ASSERT_NEAR(std::norm(ab.alpha) + std::norm(ab.beta), 1.0, 1e-10);
    }
}

TEST(DynamicsProperty, NormDecayLaw) {
    for (int trial = 0; trial < 20; ++trial) {
        const double delta = gen::real(0.3, 2.0);
        const auto p = PhysicalParams::from_effective(delta, gen::real(0.0, 1.9 * delta));
        StateVector s(kPair, {0.0, gen::real(), gen::real(), 0.0});
        s = normalized(s);
        const double t = gen::real(0.2, 3.0), h = 1e-4;
        const auto before = evolve_conditional(s, {{0, 1}}, p, t - h, 1e-4);
        const auto at = evolve_conditional(s, {{0, 1}}, p, t, 1e-4);
        const auto after = evolve_conditional(s, {{0, 1}}, p, t + h, 1e-4);
        const double rate = (norm_sq(after) - norm_sq(before)) / (2 * h);
        const double photons = std::norm(at.at({0, 1}));
        ASSERT_NEAR(rate, -2.0 * p.k() * photons, 1e-6);
        ASSERT_LE(norm_sq(after), norm_sq(before) + 1e-15);
    }
}

TEST(DynamicsProperty, DisjointPairsFactorize) {
    const SystemLayout l({SiteSpec::atom(), SiteSpec::atom(), SiteSpec::mode(1), SiteSpec::mode(1)});
    for (int trial = 0; trial < 20; ++trial) {
        StateVector s(l);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) s[l.index({a, b, 0, 0})] = cplx(gen::real(), gen::real());
        s = normalized(s);
        const auto p = PhysicalParams::from_effective(gen::real(0.5, 2.0), gen::real(0.0, 0.9));
        const double t = gen::real(0.1, 3.0);
        const auto together = evolve(s, {{0, 2}, {1, 3}}, p, t);
        const auto sequential = evolve(evolve(s, {{0, 2}}, p, t), {{1, 3}}, p, t);
        for (std::size_t i = 0; i < s.size(); ++i) ASSERT_LT(std::abs(together[i] - sequential[i]), 1e-8);
    }
}

}  // namespace
