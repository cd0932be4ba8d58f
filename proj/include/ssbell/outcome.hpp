// Copyright 2026 The ssbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Outcome tuples (x, y, u, v) in {+1, -1}^4 and their flat index.
//
// The flat index is lexicographic over (x, y, u, v) with +1 ordered before -1:
// index 0 is (+1,+1,+1,+1), index 1 is (+1,+1,+1,-1), ..., index 15 is
// (-1,-1,-1,-1). The same ordering is used for measured outcomes xi' and for
// inferred values xi, and in every serialized 16-entry array.

#include <array>
#include <cstddef>
#include <string>

#include "ssbell/error.hpp"

namespace ssbell {

inline constexpr std::size_t kNumOutcomes = 16;

using Distribution16 = std::array<double, kNumOutcomes>;

/// Maps a sign to a bit: +1 -> 0, -1 -> 1.
constexpr std::size_t sign_bit(int s) {
    return s > 0 ? 0 : 1;
}
constexpr int bit_sign(std::size_t b) {
    return b == 0 ? 1 : -1;
}

struct OutcomeIndex {
    int x = 1;
    int y = 1;
    int u = 1;
    int v = 1;

    static OutcomeIndex make(int x, int y, int u, int v) {
        for (int s : {x, y, u, v}) {
            if (s != 1 && s != -1) {
                throw OutOfRange("outcome components must be +1 or -1, got " + std::to_string(s));
            }
        }
        return OutcomeIndex{x, y, u, v};
    }

    static constexpr OutcomeIndex from_flat(std::size_t k) {
        return OutcomeIndex{bit_sign((k >> 3) & 1), bit_sign((k >> 2) & 1), bit_sign((k >> 1) & 1),
                            bit_sign(k & 1)};
    }

    constexpr std::size_t flat() const {
        return (sign_bit(x) << 3) | (sign_bit(y) << 2) | (sign_bit(u) << 1) | sign_bit(v);
    }

    friend constexpr bool operator==(const OutcomeIndex &, const OutcomeIndex &) = default;

    std::string str() const {
        auto c = [](int s) { return s > 0 ? '+' : '-'; };
        return std::string{'(', c(x), ',', c(y), ',', c(u), ',', c(v), ')'};
    }
};

inline constexpr std::array<OutcomeIndex, kNumOutcomes> all_outcomes() {
    std::array<OutcomeIndex, kNumOutcomes> r{};
    for (std::size_t k = 0; k < kNumOutcomes; ++k) {
        r[k] = OutcomeIndex::from_flat(k);
    }
    return r;
}

/// Observable labels. X, Y act on subsystem A; U, V on subsystem B.
enum class Label { X, Y, U, V };

inline constexpr std::array<Label, 4> kAllLabels{Label::X, Label::Y, Label::U, Label::V};

constexpr bool on_subsystem_a(Label l) {
    return l == Label::X || l == Label::Y;
}

constexpr int component(const OutcomeIndex &o, Label l) {
    switch (l) {
        case Label::X:
            return o.x;
        case Label::Y:
            return o.y;
        case Label::U:
            return o.u;
        case Label::V:
            return o.v;
    }
    return 0;
}

inline const char *label_name(Label l) {
    switch (l) {
        case Label::X:
            return "X";
        case Label::Y:
            return "Y";
        case Label::U:
            return "U";
        case Label::V:
            return "V";
    }
    return "?";
}

}  // namespace ssbell
