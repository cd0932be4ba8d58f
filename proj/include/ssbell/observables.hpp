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

#include <array>
#include <cmath>
#include <sstream>

#include "ssbell/error.hpp"
#include "ssbell/linalg.hpp"
#include "ssbell/outcome.hpp"

namespace ssbell {

inline constexpr double kUnitNormTol = 1e-12;

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3 &a, const Vec3 &b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3 &a) {
    return std::sqrt(dot(a, a));
}

/// A dichotomic qubit observable n . sigma with outcome +1 along +n.
class ObservableSpec {
   public:
    /// Throws InvalidObservable unless |bloch| = 1 within 1e-12.
    static ObservableSpec make(Label label, const Vec3 &bloch) {
        double n = norm(bloch);
        if (!std::isfinite(n) || std::abs(n - 1) > kUnitNormTol) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "observable " << label_name(label) << " needs a unit Bloch vector, got norm " << n;
            throw InvalidObservable(msg.str());
        }
        return ObservableSpec(label, bloch);
    }

    Label label() const {
        return label_;
    }
    const Vec3 &bloch() const {
        return bloch_;
    }
    Matrix2 op() const {
        return bloch_operator(bloch_);
    }

   private:
    ObservableSpec(Label label, const Vec3 &bloch) : label_(label), bloch_(bloch) {
    }
    Label label_;
    Vec3 bloch_;
};

/// Projective POVM {Delta(+1), Delta(-1)} of a sharp observable.
struct SharpPovm {
    Matrix2 element_plus;
    Matrix2 element_minus;

    const Matrix2 &element(int w) const {
        return w > 0 ? element_plus : element_minus;
    }
};

/// Delta(w) = (I + w n.sigma) / 2.
inline SharpPovm sharp_povm(const ObservableSpec &obs) {
    Matrix2 nsig = obs.op();
    return SharpPovm{(pauli::I + nsig) * 0.5, (pauli::I - nsig) * 0.5};
}

struct ObservableSet {
    ObservableSpec x;
    ObservableSpec y;
    ObservableSpec u;
    ObservableSpec v;

    const ObservableSpec &get(Label l) const {
        switch (l) {
            case Label::X:
                return x;
            case Label::Y:
                return y;
            case Label::U:
                return u;
            case Label::V:
                return v;
        }
        return x;
    }
};

/// X = sigma_z, Y = sigma_x on A; U = (sigma_z + sigma_x)/sqrt2,
/// V = (sigma_x - sigma_z)/sqrt2 on B. With s = xu - xv + yu + yv the singlet
/// reaches |S| = 2 sqrt2 here.
inline ObservableSet chsh_optimal_angles() {
    const double h = 1 / std::sqrt(2.0);
    return ObservableSet{
        ObservableSpec::make(Label::X, {0, 0, 1}),
        ObservableSpec::make(Label::Y, {1, 0, 0}),
        ObservableSpec::make(Label::U, {h, 0, h}),
        ObservableSpec::make(Label::V, {h, 0, -h}),
    };
}

}  // namespace ssbell
