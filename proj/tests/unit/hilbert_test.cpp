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

#include <sstream>

#include "cavqdc/hilbert.hpp"
#include "generators.hpp"

namespace {

using namespace cavqdc;

const double kR = 1.0 / std::sqrt(2.0);

SystemLayout atoms(int n) { return SystemLayout(std::vector<SiteSpec>(n, SiteSpec::atom())); }

StateVector ghz3() {
    const auto l = atoms(3);
    StateVector s(l);
    s[l.index({1, 1, 1})] = kR;
    s[l.index({0, 0, 0})] = kR;
    return s;
}

double max_diff(const StateVector& a, const StateVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void expect_code(Errc code, const std::function<void()>& f) {
    try {
        f();
        ADD_FAILURE() << "expected " << to_string(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

TEST(Dimension, ProductOfSiteDimensions) {
    EXPECT_EQ(dimension(SystemLayout({SiteSpec::atom(), SiteSpec::atom(), SiteSpec::atom(), SiteSpec::mode(1),
                                      SiteSpec::mode(1)})),
              32u);
    EXPECT_EQ(dimension(atoms(1)), 2u);
    EXPECT_EQ(dimension(SystemLayout({SiteSpec::atom(), SiteSpec::atom(), SiteSpec::atom(), SiteSpec::atom(),
                                      SiteSpec::mode(2), SiteSpec::mode(2)})),
              144u);
}

TEST(Dimension, RejectsEmptyLayout) { expect_code(Errc::DimensionMismatch, [] { SystemLayout(std::vector<SiteSpec>{}); }); }

TEST(BasisState, RowMajorIndex) {
    EXPECT_EQ(basis_state(atoms(1), {0})[0], cplx(1.0));
    const SystemLayout am({SiteSpec::atom(), SiteSpec::mode(1)});
    const auto s = basis_state(am, {kExcited, 1});
    EXPECT_EQ(s[3], cplx(1.0));
    EXPECT_DOUBLE_EQ(norm_sq(s), 1.0);
    EXPECT_EQ(basis_state(atoms(3), {1, 1, 1})[7], cplx(1.0));
}

TEST(BasisState, OccupationOutOfRange) {
    expect_code(Errc::OutOfRangeOccupation, [] { basis_state(atoms(2), {0, 2}); });
    expect_code(Errc::OutOfRangeOccupation, [] { basis_state(SystemLayout({SiteSpec::mode(2)}), {3}); });
    expect_code(Errc::DimensionMismatch, [] { basis_state(atoms(2), {0}); });
}

TEST(StateVector, RejectsWrongLengthAndNonFinite) {
    expect_code(Errc::DimensionMismatch, [] { StateVector(atoms(2), std::vector<cplx>(3)); });
    expect_code(Errc::InvalidState, [] { StateVector(atoms(1), {1.0, std::nan("")}); });
}

TEST(ApplySiteOperator, IdentityLeavesStateUnchanged) {
    const auto s = gen::state(SystemLayout({SiteSpec::atom(), SiteSpec::mode(2)}));
    EXPECT_EQ(max_diff(apply_site_operator(s, 1, SiteMatrix::identity(3)), s), 0.0);
}

TEST(ApplySiteOperator, AnnihilationLowersOnePhoton) {
    const SystemLayout l({SiteSpec::mode(1)});
    const auto out = apply_annihilation(basis_state(l, {1}), 0);
    EXPECT_EQ(out[0], cplx(1.0));
    EXPECT_EQ(out[1], cplx(0.0));
}

TEST(ApplySiteOperator, CreationAtCutoffOverflows) {
    const SystemLayout l({SiteSpec::atom(), SiteSpec::mode(1)});
    expect_code(Errc::TruncationOverflow, [&] { apply_creation(basis_state(l, {0, 1}), 1); });
    EXPECT_EQ(apply_creation(basis_state(l, {0, 0}), 1)[l.index({0, 1})], cplx(1.0));
}

TEST(ApplySiteOperator, InputIsNotModified) {
    const auto s = ghz3();
    const auto copy = s;
    (void)apply_site_operator(s, 0, pauli_matrix(Message::X));
    EXPECT_EQ(max_diff(s, copy), 0.0);
}

TEST(ApplySiteOperator, Errors) {
    const auto s = ghz3();
    expect_code(Errc::DimensionMismatch, [&] { apply_site_operator(s, 0, SiteMatrix::identity(3)); });
    expect_code(Errc::NotAModeSite, [&] { apply_annihilation(s, 0); });
    expect_code(Errc::NotAnAtomSite, [] {
        pauli_encode(basis_state(SystemLayout({SiteSpec::mode(1)}), {0}), 0, Message::X);
    });
}

TEST(PauliEncode, GhzMessages) {
    const auto l = atoms(3);
    auto expect_two = [&](Message m, std::initializer_list<int> a, double sa, std::initializer_list<int> b, double sb) {
        const auto out = pauli_encode(ghz3(), 0, m);
        StateVector want(l);
        want[l.index(a)] = sa * kR;
        want[l.index(b)] = sb * kR;
        EXPECT_LT(max_diff(out, want), 1e-15) << to_string(m);
    };
    expect_two(Message::I, {1, 1, 1}, 1, {0, 0, 0}, 1);
    expect_two(Message::X, {0, 1, 1}, 1, {1, 0, 0}, 1);
    expect_two(Message::iY, {0, 1, 1}, 1, {1, 0, 0}, -1);
    expect_two(Message::Z, {1, 1, 1}, 1, {0, 0, 0}, -1);
}

TEST(Messages, BitsAndNamesRoundTrip) {
    for (Message m : kAllMessages) {
        EXPECT_EQ(message_from_bits(message_bits(m)), m);
        EXPECT_EQ(parse_message(to_string(m)), m);
    }
    EXPECT_FALSE(parse_message("Y"));
}

TEST(InnerProduct, Examples) {
    const auto b = basis_state(atoms(2), {0, 1});
    EXPECT_DOUBLE_EQ(norm_sq(b), 1.0);
    EXPECT_NEAR(norm_sq(ghz3()), 1.0, 1e-15);
    const auto l = atoms(2);
    StateVector plus(l), minus(l);
    plus[1] = kR;
    plus[2] = kR;
    minus[1] = kR;
    minus[2] = -kR;
    EXPECT_EQ(inner(plus, minus), cplx(0.0));
    expect_code(Errc::LayoutMismatch, [&] { inner(plus, ghz3()); });
}

TEST(Dump, TabSeparatedAndSkipsNegligibleAmplitudes) {
    auto s = ghz3();
    s[3] = 1e-15;
    std::ostringstream os;
    dump(s, os);
    const std::string want = "0\t(g,g,g)\t0.70710678118654746\t0\n7\t(e,e,e)\t0.70710678118654746\t0\n";
    EXPECT_EQ(os.str(), want);
    std::ostringstream timed;
    dump(basis_state(SystemLayout({SiteSpec::atom(), SiteSpec::mode(2)}), {1, 2}), timed, 0.5);
    EXPECT_EQ(timed.str(), "0.5\t5\t(e,2)\t1\t0\n");
}

// --- properties ---------------------------------------------------------------

TEST(HilbertProperty, IndexRoundTripsExhaustively) {
    for (int trial = 0; trial < 50; ++trial) {
        const auto l = gen::layout(6);
        for (std::size_t i = 0; i < l.dimension(); ++i) {
            const auto occ = l.occupations(i);
            ASSERT_EQ(l.index(std::span<const int>(occ)), i);
        }
    }
}

TEST(HilbertProperty, UnitariesPreserveNorm) {
    for (int trial = 0; trial < 200; ++trial) {
        const auto l = gen::layout();
        const auto s = gen::state(l);
        const auto site = static_cast<std::size_t>(gen::integer(0, static_cast<int>(l.num_sites()) - 1));
        const auto out = apply_site_operator(s, site, gen::unitary(l.site(site).dim()));
        ASSERT_NEAR(norm_sq(out), norm_sq(s), 1e-12);
    }
}

TEST(HilbertProperty, PauliInvolutions) {
    for (int trial = 0; trial < 100; ++trial) {
        const SystemLayout l({SiteSpec::atom(), SiteSpec::atom(), SiteSpec::mode(gen::integer(1, 2))});
        const auto s = gen::state(l);
        const auto site = static_cast<std::size_t>(gen::integer(0, 1));
        EXPECT_EQ(max_diff(pauli_encode(pauli_encode(s, site, Message::X), site, Message::X), s), 0.0);
        EXPECT_EQ(max_diff(pauli_encode(pauli_encode(s, site, Message::Z), site, Message::Z), s), 0.0);
        auto neg = s;
        neg *= -1.0;
        EXPECT_EQ(max_diff(pauli_encode(pauli_encode(s, site, Message::iY), site, Message::iY), neg), 0.0);
    }
}

TEST(HilbertProperty, DisjointSiteOperatorsCommute) {
    for (int trial = 0; trial < 200; ++trial) {
        const auto l = gen::layout();
        if (l.num_sites() < 2) continue;
        const auto s = gen::state(l);
        const int n = static_cast<int>(l.num_sites());
        const auto i = static_cast<std::size_t>(gen::integer(0, n - 1));
        auto j = static_cast<std::size_t>(gen::integer(0, n - 2));
        if (j >= i) ++j;
        const auto mi = gen::matrix(l.site(i).dim());
        const auto mj = gen::matrix(l.site(j).dim());
        const auto a = apply_site_operator(apply_site_operator(s, i, mi), j, mj);
        const auto b = apply_site_operator(apply_site_operator(s, j, mj), i, mi);
        ASSERT_LT(max_diff(a, b), 1e-12);
    }
}

}  // namespace
