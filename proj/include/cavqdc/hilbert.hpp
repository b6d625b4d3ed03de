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
 * Tensor-product state space over two-level atoms and truncated Fock modes.
 *
 * Atoms use the basis order [g, e] (g = 0, e = 1). A cavity mode with cutoff
 * n has basis [0, 1, ..., n] photons. Basis indices are row-major with site 0
 * most significant:
 *
 *     index = sum_j occ_j * prod_{l > j} dim_l
 *
 * and every file format in the project uses this convention.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cavqdc/error.hpp"

namespace cavqdc {

using cplx = std::complex<double>;

inline constexpr int kGround = 0;
inline constexpr int kExcited = 1;

/// Numerical slack on the squared norm of a (sub)normalized state.
inline constexpr double kNormSlack = 1e-12;

/// Amplitudes below this magnitude are omitted from state dumps.
inline constexpr double kDumpThreshold = 1e-14;

enum class SiteKind { Atom, CavityMode };

struct SiteSpec {
    SiteKind kind = SiteKind::Atom;
    int cutoff = 1;  ///< highest photon number kept; ignored for atoms

    static SiteSpec atom() { return {SiteKind::Atom, 1}; }
    static SiteSpec mode(int cutoff = 1) { return {SiteKind::CavityMode, cutoff}; }

    std::size_t dim() const {
        return kind == SiteKind::Atom ? 2 : static_cast<std::size_t>(cutoff) + 1;
    }

    bool operator==(const SiteSpec&) const = default;
};

class SystemLayout {
public:
    SystemLayout() = default;

    explicit SystemLayout(std::vector<SiteSpec> sites) : sites_(std::move(sites)) {
        if (sites_.empty()) {
            throw Error(Errc::DimensionMismatch, "layout must contain at least one site");
        }
        for (const auto& s : sites_) {
            if (s.kind == SiteKind::CavityMode && s.cutoff < 1) {
                throw Error(Errc::DimensionMismatch, "cavity mode cutoff must be >= 1");
            }
        }
        strides_.assign(sites_.size(), 1);
        dim_ = 1;
        for (std::size_t j = sites_.size(); j-- > 0;) {
            strides_[j] = dim_;
            dim_ *= sites_[j].dim();
        }
    }

    std::size_t num_sites() const { return sites_.size(); }
    const SiteSpec& site(std::size_t j) const { return sites_.at(j); }
    const std::vector<SiteSpec>& sites() const { return sites_; }
    std::size_t dimension() const { return dim_; }
    std::size_t stride(std::size_t j) const { return strides_.at(j); }

    std::size_t index(std::span<const int> occupations) const {
        if (occupations.size() != sites_.size()) {
            throw Error(Errc::DimensionMismatch, "occupation tuple length does not match layout");
        }
        std::size_t idx = 0;
        for (std::size_t j = 0; j < sites_.size(); ++j) {
            const int occ = occupations[j];
            if (occ < 0 || static_cast<std::size_t>(occ) >= sites_[j].dim()) {
                throw Error(Errc::OutOfRangeOccupation,
                            "occupation " + std::to_string(occ) + " at site " + std::to_string(j));
            }
            idx += static_cast<std::size_t>(occ) * strides_[j];
        }
        return idx;
    }

    std::size_t index(std::initializer_list<int> occupations) const {
        return index(std::span<const int>(occupations.begin(), occupations.size()));
    }

    int occupation(std::size_t index, std::size_t site) const {
        return static_cast<int>((index / strides_[site]) % sites_[site].dim());
    }

    std::vector<int> occupations(std::size_t index) const {
        std::vector<int> occ(sites_.size());
        for (std::size_t j = 0; j < sites_.size(); ++j) occ[j] = occupation(index, j);
        return occ;
    }

    bool operator==(const SystemLayout& other) const { return sites_ == other.sites_; }

private:
    std::vector<SiteSpec> sites_;
    std::vector<std::size_t> strides_;
    std::size_t dim_ = 0;
};

inline std::size_t dimension(const SystemLayout& layout) { return layout.dimension(); }

/// Dense d x d matrix acting on a single site, row-major.
class SiteMatrix {
public:
    SiteMatrix() = default;
    explicit SiteMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    SiteMatrix(std::size_t dim, std::vector<cplx> data) : dim_(dim), data_(std::move(data)) {
        if (data_.size() != dim_ * dim_) {
            throw Error(Errc::DimensionMismatch, "matrix data size is not dim^2");
        }
    }

    static SiteMatrix identity(std::size_t dim) {
        SiteMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return dim_; }
    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    friend SiteMatrix operator*(const SiteMatrix& a, const SiteMatrix& b) {
        if (a.dim_ != b.dim_) throw Error(Errc::DimensionMismatch, "matrix product");
        SiteMatrix out(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i)
            for (std::size_t k = 0; k < a.dim_; ++k)
                for (std::size_t j = 0; j < a.dim_; ++j) out(i, j) += a(i, k) * b(k, j);
        return out;
    }

private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

namespace ops {

inline SiteMatrix annihilation(int cutoff) {
    SiteMatrix a(static_cast<std::size_t>(cutoff) + 1);
    for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

/// Truncated creation operator; the |cutoff> column is dropped.
inline SiteMatrix creation(int cutoff) {
    SiteMatrix ad(static_cast<std::size_t>(cutoff) + 1);
    for (int n = 0; n < cutoff; ++n) ad(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
    return ad;
}

inline SiteMatrix number(int cutoff) {
    SiteMatrix nn(static_cast<std::size_t>(cutoff) + 1);
    for (int n = 0; n <= cutoff; ++n) nn(n, n) = n;
    return nn;
}

/// |e><g|
inline SiteMatrix raise() { return SiteMatrix(2, {0.0, 0.0, 1.0, 0.0}); }
/// |g><e|
inline SiteMatrix lower() { return SiteMatrix(2, {0.0, 1.0, 0.0, 0.0}); }

}  // namespace ops

/// State vector over a layout. May be subnormalized (conditional branches)
/// or an arbitrary vector (e.g. H applied to a state); see validate_physical().
class StateVector {
public:
    StateVector() = default;

    explicit StateVector(SystemLayout layout)
        : layout_(std::move(layout)), amps_(layout_.dimension()) {}

    StateVector(SystemLayout layout, std::vector<cplx> amplitudes)
        : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
        if (amps_.size() != layout_.dimension()) {
            throw Error(Errc::DimensionMismatch, "amplitude array length " + std::to_string(amps_.size()) +
                                                     " != layout dimension " +
                                                     std::to_string(layout_.dimension()));
        }
        for (const auto& a : amps_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw Error(Errc::InvalidState, "non-finite amplitude");
            }
        }
    }

    const SystemLayout& layout() const { return layout_; }
    std::size_t size() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }
    cplx& operator[](std::size_t i) { return amps_[i]; }

    const cplx& at(std::initializer_list<int> occ) const { return amps_[layout_.index(occ)]; }

    StateVector& operator+=(const StateVector& o) {
        require_same_layout(o);
        for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
        return *this;
    }

    StateVector& operator*=(cplx s) {
        for (auto& a : amps_) a *= s;
        return *this;
    }

    friend StateVector operator*(cplx s, StateVector v) { return v *= s; }
    friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }

    void require_same_layout(const StateVector& o) const {
        if (!(layout_ == o.layout_)) throw Error(Errc::LayoutMismatch, "states live on different layouts");
    }

private:
    SystemLayout layout_;
    std::vector<cplx> amps_;
};

inline cplx inner(const StateVector& a, const StateVector& b) {
    a.require_same_layout(b);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

inline double norm_sq(const StateVector& s) {
    double acc = 0.0;
    for (const auto& a : s.amplitudes()) acc += std::norm(a);
    return acc;
}

/// Throws InvalidState unless amplitudes are finite and 0 <= |s|^2 <= 1 + slack.
inline void validate_physical(const StateVector& s) {
    for (const auto& a : s.amplitudes()) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw Error(Errc::InvalidState, "non-finite amplitude");
        }
    }
    const double n = norm_sq(s);
    if (n > 1.0 + kNormSlack) throw Error(Errc::InvalidState, "squared norm exceeds 1: " + std::to_string(n));
}

inline StateVector normalized(StateVector s) {
    const double n = norm_sq(s);
    if (n <= 0.0) throw Error(Errc::InvalidState, "cannot normalize the zero vector");
    s *= 1.0 / std::sqrt(n);
    return s;
}

inline StateVector basis_state(const SystemLayout& layout, std::span<const int> occupations) {
    StateVector s(layout);
    s[layout.index(occupations)] = 1.0;
    return s;
}

inline StateVector basis_state(const SystemLayout& layout, std::initializer_list<int> occupations) {
    return basis_state(layout, std::span<const int>(occupations.begin(), occupations.size()));
}

/// Returns (I x ... x M x ... x I) |state>.
inline StateVector apply_site_operator(const StateVector& state, std::size_t site, const SiteMatrix& m) {
    const auto& layout = state.layout();
    if (site >= layout.num_sites()) throw Error(Errc::DimensionMismatch, "site index out of range");
    const std::size_t d = layout.site(site).dim();
    if (m.dim() != d) {
        throw Error(Errc::DimensionMismatch, "matrix is " + std::to_string(m.dim()) + "x" +
                                                 std::to_string(m.dim()) + ", site dimension is " +
                                                 std::to_string(d));
    }
    const std::size_t stride = layout.stride(site);
    const std::size_t block = d * stride;
    StateVector out(layout);
    for (std::size_t base0 = 0; base0 < state.size(); base0 += block) {
        for (std::size_t inner_off = 0; inner_off < stride; ++inner_off) {
            const std::size_t base = base0 + inner_off;
            for (std::size_t r = 0; r < d; ++r) {
                cplx acc = 0.0;
                for (std::size_t c = 0; c < d; ++c) {
                    const cplx mrc = m(r, c);
                    if (mrc != 0.0) acc += mrc * state[base + c * stride];
                }
                out[base + r * stride] = acc;
            }
        }
    }
    return out;
}

namespace detail {

inline void require_kind(const StateVector& s, std::size_t site, SiteKind kind) {
    if (site >= s.layout().num_sites()) throw Error(Errc::DimensionMismatch, "site index out of range");
    if (s.layout().site(site).kind != kind) {
        throw Error(kind == SiteKind::Atom ? Errc::NotAnAtomSite : Errc::NotAModeSite,
                    "site " + std::to_string(site));
    }
}

/// Largest amplitude magnitude with `site` at occupation `occ`.
inline double max_amplitude_at(const StateVector& s, std::size_t site, int occ) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.layout().occupation(i, site) == occ) m = std::max(m, std::abs(s[i]));
    }
    return m;
}

}  // namespace detail

inline StateVector apply_annihilation(const StateVector& state, std::size_t mode_site) {
    detail::require_kind(state, mode_site, SiteKind::CavityMode);
    return apply_site_operator(state, mode_site, ops::annihilation(state.layout().site(mode_site).cutoff));
}

/// a^dagger on a mode; TruncationOverflow if any amplitude sits at the cutoff.
inline StateVector apply_creation(const StateVector& state, std::size_t mode_site) {
    detail::require_kind(state, mode_site, SiteKind::CavityMode);
    const int cutoff = state.layout().site(mode_site).cutoff;
    if (detail::max_amplitude_at(state, mode_site, cutoff) > kDumpThreshold) {
        throw Error(Errc::TruncationOverflow,
                    "creation on mode site " + std::to_string(mode_site) + " populated at cutoff " +
                        std::to_string(cutoff));
    }
    return apply_site_operator(state, mode_site, ops::creation(cutoff));
}

// --- dense-coding messages -------------------------------------------------

enum class Message { I = 0, X = 1, iY = 2, Z = 3 };

inline constexpr Message kAllMessages[] = {Message::I, Message::X, Message::iY, Message::Z};

/// Two classical bits: I=00, X=01, iY=10, Z=11.
constexpr unsigned message_bits(Message m) { return static_cast<unsigned>(m); }

constexpr Message message_from_bits(unsigned bits) { return static_cast<Message>(bits & 3u); }

constexpr std::string_view to_string(Message m) {
    switch (m) {
    case Message::I: return "I";
    case Message::X: return "X";
    case Message::iY: return "iY";
    case Message::Z: return "Z";
    }
    return "?";
}

inline std::optional<Message> parse_message(std::string_view s) {
    for (Message m : kAllMessages)
        if (to_string(m) == s) return m;
    return std::nullopt;
}

/// Encoding operators on the [g, e] basis. Z: e -> e, g -> -g.
/// iY: e -> g, g -> -e, so that iY on (|eee> + |ggg>)/sqrt2 gives exactly (|gee> - |egg>)/sqrt2.
inline SiteMatrix pauli_matrix(Message m) {
    switch (m) {
    case Message::I: return SiteMatrix::identity(2);
    case Message::X: return SiteMatrix(2, {0.0, 1.0, 1.0, 0.0});
    case Message::iY: return SiteMatrix(2, {0.0, 1.0, -1.0, 0.0});
    case Message::Z: return SiteMatrix(2, {-1.0, 0.0, 0.0, 1.0});
    }
    return SiteMatrix::identity(2);
}

inline StateVector pauli_encode(const StateVector& state, std::size_t atom_site, Message m) {
    detail::require_kind(state, atom_site, SiteKind::Atom);
    return apply_site_operator(state, atom_site, pauli_matrix(m));
}

// --- debug dump --------------------------------------------------------------

inline std::string occupation_label(const SystemLayout& layout, std::size_t index) {
    std::string out = "(";
    for (std::size_t j = 0; j < layout.num_sites(); ++j) {
        if (j) out += ',';
        const int occ = layout.occupation(index, j);
        if (layout.site(j).kind == SiteKind::Atom) {
            out += occ == kExcited ? 'e' : 'g';
        } else {
            out += std::to_string(occ);
        }
    }
    out += ')';
    return out;
}

/// `index<TAB>occupations<TAB>re<TAB>im`, ascending, tiny amplitudes skipped.
/// A time column is prepended when `time` is given.
inline void dump(const StateVector& s, std::ostream& os, std::optional<double> time = std::nullopt) {
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::abs(s[i]) < kDumpThreshold) continue;
        if (time) {
            std::snprintf(buf, sizeof buf, "%.17g\t", *time);
            os << buf;
        }
        os << i << '\t' << occupation_label(s.layout(), i) << '\t';
        std::snprintf(buf, sizeof buf, "%.17g\t%.17g", s[i].real(), s[i].imag());
        os << buf << '\n';
    }
}

}  // namespace cavqdc
