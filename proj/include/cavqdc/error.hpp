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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cavqdc {

enum class Errc {
    OutOfRangeOccupation,
    DimensionMismatch,
    TruncationOverflow,
    NotAnAtomSite,
    NotAModeSite,
    LayoutMismatch,
    InvalidState,
    InvalidParams,
    InvalidConfig,
    StepTooCoarse,
    UnexpectedPhotonSupport,
    InconsistentObservation,
};

constexpr std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::OutOfRangeOccupation: return "OutOfRangeOccupation";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TruncationOverflow: return "TruncationOverflow";
    case Errc::NotAnAtomSite: return "NotAnAtomSite";
    case Errc::NotAModeSite: return "NotAModeSite";
    case Errc::LayoutMismatch: return "LayoutMismatch";
    case Errc::InvalidState: return "InvalidState";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::StepTooCoarse: return "StepTooCoarse";
    case Errc::UnexpectedPhotonSupport: return "UnexpectedPhotonSupport";
    case Errc::InconsistentObservation: return "InconsistentObservation";
    }
    return "Unknown";
}

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace cavqdc
