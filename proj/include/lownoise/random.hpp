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

#include "lownoise/matrix.hpp"

#include <cstdint>
#include <random>

namespace lownoise {

using Rng = std::mt19937_64;

/// Generator for task `task` of a run seeded with `seed`. Independent tasks
/// get independent streams, so results do not depend on execution order.
[[nodiscard]] inline Rng task_rng(std::uint64_t seed, std::uint64_t task) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32U),
                      static_cast<std::uint32_t>(task),
                      static_cast<std::uint32_t>(task >> 32U), 0x6c6f776eU};
    return Rng(seq);
}

/// Independent standard complex Gaussian entries, E|z|² = 1.
[[nodiscard]] inline ComplexMatrix complex_gaussian(Index rows, Index cols,
                                                    Rng &rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix out(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            out(i, j) = Complex(re, im);
        }
    }
    return out;
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
[[nodiscard]] inline ComplexMatrix haar_unitary(Index d, Rng &rng) {
    const Eigen::MatrixXcd g = complex_gaussian(d, d, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < d; ++k) {
        const Complex diag = r(k, k);
        const double mag = std::abs(diag);
        if (mag > 0.0) {
            q.col(k) *= diag / mag;
        }
    }
    return q;
}

} // namespace lownoise
