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

// Random inputs for the property tests.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cavqdc/hilbert.hpp"

namespace gen {

using cavqdc::cplx;

inline std::mt19937_64& engine() {
    static std::mt19937_64 rng(0x5eed);
    return rng;
}

inline double real(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine()); }

inline int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine()); }

inline cavqdc::SystemLayout layout(int max_sites = 5) {
    std::vector<cavqdc::SiteSpec> sites;
    const int n = integer(1, max_sites);
    for (int i = 0; i < n; ++i) sites.push_back(integer(0, 1) ? cavqdc::SiteSpec::atom() : cavqdc::SiteSpec::mode(integer(1, 3)));
    return cavqdc::SystemLayout(std::move(sites));
}

inline cavqdc::StateVector state(const cavqdc::SystemLayout& l) {
    cavqdc::StateVector s(l);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = cplx(real(), real());
    return cavqdc::normalized(std::move(s));
}

/// Haar-ish random unitary by Gram-Schmidt on complex Gaussian columns.
inline cavqdc::SiteMatrix unitary(std::size_t d) {
    std::normal_distribution<double> n;
    std::vector<std::vector<cplx>> cols(d, std::vector<cplx>(d));
    for (std::size_t c = 0; c < d; ++c) {
        for (auto& x : cols[c]) x = cplx(n(engine()), n(engine()));
        for (std::size_t p = 0; p < c; ++p) {
            cplx dot = 0.0;
            for (std::size_t r = 0; r < d; ++r) dot += std::conj(cols[p][r]) * cols[c][r];
            for (std::size_t r = 0; r < d; ++r) cols[c][r] -= dot * cols[p][r];
        }
        double nn = 0.0;
        for (auto& x : cols[c]) nn += std::norm(x);
        for (auto& x : cols[c]) x /= std::sqrt(nn);
    }
    cavqdc::SiteMatrix m(d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = cols[c][r];
    return m;
}

inline cavqdc::SiteMatrix matrix(std::size_t d) {
    cavqdc::SiteMatrix m(d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = cplx(real(), real());
    return m;
}

}  // namespace gen
