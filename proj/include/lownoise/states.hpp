// Copyright 2026 The lownoise Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "lownoise/errors.hpp"
#include "lownoise/matrix.hpp"
#include "lownoise/random.hpp"

#include <string>

namespace lownoise {

/// Unit-norm state vector.
class PureState {
  public:
    /// Normalizes `amplitudes`; throws ContractViolation on a zero or
    /// non-finite vector.
    static PureState from_amplitudes(const ComplexVector &amplitudes) {
        const double norm = amplitudes.norm();
        if (!std::isfinite(norm) || norm == 0.0) {
            throw ContractViolation("PureState: amplitudes must be finite and "
                                    "not all zero");
        }
        return PureState(amplitudes / norm);
    }

    static PureState basis(Index dim, Index k) {
        if (k < 0 || k >= dim) {
            throw DimensionError("PureState::basis: index " + std::to_string(k) +
                                 " out of range for dimension " +
                                 std::to_string(dim));
        }
        ComplexVector v = ComplexVector::Zero(dim);
        v(k) = 1.0;
        return PureState(std::move(v));
    }

    /// Σ_k |k⟩_S|k⟩_A / √d on S⊗A with dim(S) = dim(A) = d.
    static PureState maximally_entangled(Index d) {
        ComplexVector v = ComplexVector::Zero(d * d);
        for (Index k = 0; k < d; ++k) {
            v(k * d + k) = 1.0;
        }
        return PureState(v / std::sqrt(static_cast<double>(d)));
    }

    /// Normalized vector of i.i.d. complex Gaussians (Haar measure).
    static PureState haar_random(Index dim, Rng &rng) {
        return from_amplitudes(complex_gaussian(dim, 1, rng).col(0));
    }

    [[nodiscard]] Index dim() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] const ComplexVector &amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] ComplexMatrix projector() const {
        ComplexMatrix p = amplitudes_ * amplitudes_.adjoint();
        return p;
    }

    friend PureState tensor(const PureState &a, const PureState &b) {
        return PureState(kron(a.amplitudes_, b.amplitudes_));
    }

  private:
    explicit PureState(ComplexVector v) : amplitudes_(std::move(v)) {}

    ComplexVector amplitudes_;
};

/// Hermitian, positive-semidefinite, unit-trace operator.
class DensityMatrix {
  public:
    static constexpr double kTolerance = 1e-10;

    /// Validating constructor: Hermiticity (relative 1e-10), min eigenvalue
    /// ≥ −1e-10 and |Tr − 1| ≤ 1e-10. The stored matrix is hermitized.
    static DensityMatrix from_matrix(const ComplexMatrix &m) {
        if (m.rows() != m.cols() || m.rows() == 0) {
            throw DimensionError("DensityMatrix: matrix must be square and "
                                 "non-empty");
        }
        if (!all_finite(m)) {
            throw ContractViolation("DensityMatrix: non-finite entry");
        }
        if (!is_hermitian(m)) {
            throw ContractViolation("DensityMatrix: matrix is not Hermitian");
        }
        const double tr = m.trace().real();
        if (std::abs(tr - 1.0) > kTolerance) {
            throw ContractViolation("DensityMatrix: trace " + std::to_string(tr) +
                                    " is not 1");
        }
        const auto eig = hermitian_eig(m);
        if (eig.values(0) < -kTolerance) {
            throw ContractViolation("DensityMatrix: negative eigenvalue " +
                                    std::to_string(eig.values(0)));
        }
        return DensityMatrix(hermitize(m));
    }

    static DensityMatrix from_pure(const PureState &psi) {
        return DensityMatrix(psi.projector());
    }

    static DensityMatrix maximally_mixed(Index d) {
        return DensityMatrix(identity(d) / static_cast<double>(d));
    }

    /// Induced-measure random state G G† / Tr(G G†) with G Ginibre d×d.
    static DensityMatrix random(Index d, Rng &rng) {
        const ComplexMatrix g = complex_gaussian(d, d, rng);
        ComplexMatrix m = g * g.adjoint();
        m /= m.trace().real();
        return DensityMatrix(hermitize(m));
    }

    /// Wraps a matrix the caller has already brought into density form
    /// (hermitized, unit trace, PSD up to rounding). No checks.
    static DensityMatrix assume_valid(ComplexMatrix m) {
        return DensityMatrix(std::move(m));
    }

    [[nodiscard]] Index dim() const noexcept { return matrix_.rows(); }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept {
        return matrix_;
    }

    friend DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b) {
        return DensityMatrix(kron(a.matrix_, b.matrix_));
    }

  private:
    explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}

    ComplexMatrix matrix_;
};

} // namespace lownoise
