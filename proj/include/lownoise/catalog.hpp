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

#include "lownoise/channel.hpp"
#include "lownoise/random.hpp"

#include <array>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

namespace lownoise {

inline constexpr int kDefaultTruncationOrder = 6;

inline constexpr std::array<std::string_view, 5> kCatalogNames{
    "identity", "depolarizing", "amplitude_damping", "phase_flip",
    "random_lownoise"};

/**
 * Hermitian B-series (without κ) solving Σ B†B + ε Σ_β C_β†C_β = 1 order by
 * order through εᴷ: B_0 = 1 and, for n ≥ 1,
 *   B_n = −(p_n + Σ_{k=1}^{n−1} B_k† B_{n−k}) / 2,
 * where p_n is the εⁿ coefficient of ε Σ_β C_β†C_β.
 */
[[nodiscard]] inline OperatorSeries
solve_b_series(Index dim, const std::vector<OperatorSeries> &c_series, int order) {
    std::vector<ComplexMatrix> p(static_cast<std::size_t>(order) + 1, zeros(dim, dim));
    for (int n = 1; n <= order; ++n) {
        for (const auto &c : c_series) {
            for (int k = 0; k <= n - 1; ++k) {
                const int l = n - 1 - k;
                if (k > c.order() || l > c.order()) {
                    continue;
                }
                p[static_cast<std::size_t>(n)].noalias() +=
                    c.coefficients()[static_cast<std::size_t>(k)].adjoint() *
                    c.coefficients()[static_cast<std::size_t>(l)];
            }
        }
    }
    std::vector<ComplexMatrix> b;
    b.push_back(identity(dim));
    for (int n = 1; n <= order; ++n) {
        ComplexMatrix acc = p[static_cast<std::size_t>(n)];
        for (int k = 1; k <= n - 1; ++k) {
            acc.noalias() += b[static_cast<std::size_t>(k)].adjoint() *
                             b[static_cast<std::size_t>(n - k)];
        }
        b.push_back(hermitize(-0.5 * acc));
    }
    return OperatorSeries(std::move(b));
}

[[nodiscard]] inline LowNoiseChannel identity_channel(Index dim,
                                                      int order = kDefaultTruncationOrder) {
    return LowNoiseChannel(dim, {Complex{1.0, 0.0}},
                           {OperatorSeries::constant(identity(dim), order)}, {},
                           "identity");
}

namespace detail {

// Weyl operators X^a Z^b, (a, b) != (0, 0); the Paulis σ_x, σ_y, σ_z for d = 2.
inline std::vector<ComplexMatrix> traceless_unitary_basis(Index d) {
    if (d == 2) {
        return {pauli::x(), pauli::y(), pauli::z()};
    }
    ComplexMatrix shift = zeros(d, d);
    ComplexMatrix clock = zeros(d, d);
    for (Index k = 0; k < d; ++k) {
        shift((k + 1) % d, k) = 1.0;
        clock(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                          static_cast<double>(d));
    }
    std::vector<ComplexMatrix> out;
    ComplexMatrix xa = identity(d);
    for (Index a = 0; a < d; ++a) {
        ComplexMatrix zb = identity(d);
        for (Index b = 0; b < d; ++b) {
            if (a != 0 || b != 0) {
                out.emplace_back(xa * zb);
            }
            zb = zb * clock;
        }
        xa = xa * shift;
    }
    return out;
}

inline void require_qubit(Index dim, std::string_view name) {
    if (dim != 2) {
        throw UsageError(std::string(name) + " is defined for dim = 2 only");
    }
}

} // namespace detail

/// B = √(1−ε)·1, C_β = U_β/√(d²−1) over a traceless unitary basis
/// (σ_β/√3 for qubits).
[[nodiscard]] inline LowNoiseChannel depolarizing(Index dim = 2,
                                                  int order = kDefaultTruncationOrder) {
    if (dim < 2) {
        throw UsageError("depolarizing requires dim >= 2");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim * dim - 1));
    std::vector<OperatorSeries> c;
    for (const auto &u : detail::traceless_unitary_basis(dim)) {
        c.push_back(OperatorSeries::constant(scale * u));
    }
    return LowNoiseChannel(dim, {Complex{1.0, 0.0}},
                           {sqrt_one_minus_eps_times(identity(dim), order)},
                           std::move(c), "depolarizing");
}

/// B = diag(1, √(1−ε)), C = |0⟩⟨1|.
[[nodiscard]] inline LowNoiseChannel amplitude_damping(Index dim = 2,
                                                       int order = kDefaultTruncationOrder) {
    detail::require_qubit(dim, "amplitude_damping");
    ComplexMatrix p1 = zeros(2, 2);
    p1(1, 1) = 1.0;
    OperatorSeries b = sqrt_one_minus_eps_times(p1, order);
    std::vector<ComplexMatrix> coeffs = b.coefficients();
    coeffs.front()(0, 0) = 1.0;
    ComplexMatrix lower = zeros(2, 2);
    lower(0, 1) = 1.0;
    return LowNoiseChannel(2, {Complex{1.0, 0.0}}, {OperatorSeries(std::move(coeffs))},
                           {OperatorSeries::constant(lower)}, "amplitude_damping");
}

/// B = √(1−ε)·1, C = Z (σ_z for qubits, the clock operator otherwise).
[[nodiscard]] inline LowNoiseChannel phase_flip(Index dim = 2,
                                                int order = kDefaultTruncationOrder) {
    if (dim < 2) {
        throw UsageError("phase_flip requires dim >= 2");
    }
    ComplexMatrix z = zeros(dim, dim);
    for (Index k = 0; k < dim; ++k) {
        z(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                      static_cast<double>(dim));
    }
    return LowNoiseChannel(dim, {Complex{1.0, 0.0}},
                           {sqrt_one_minus_eps_times(identity(dim), order)},
                           {OperatorSeries::constant(z)}, "phase_flip");
}

struct RandomChannelOptions {
    int noise_operators = 3; ///< number of C-families
    int b_families = 2;      ///< number of B-families sharing one B-series
};

/**
 * Seeded random low-noise channel. The M_β are Ginibre matrices rescaled so
 * that ‖Σ M_β†M_β‖₂ is uniform in [0.25, 1]; each C-series also gets a random
 * first-order term. κ is a random unit vector and B_α = κ_α·S(ε), with S the
 * Hermitian order-by-order solution of the completeness relation.
 */
[[nodiscard]] inline LowNoiseChannel random_lownoise(Index dim, int order,
                                                     std::uint64_t seed,
                                                     RandomChannelOptions opts = {}) {
    if (dim < 1 || opts.noise_operators < 1 || opts.b_families < 1) {
        throw UsageError("random_lownoise: dim, noise_operators and b_families "
                         "must be >= 1");
    }
    Rng rng = task_rng(seed, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<ComplexMatrix> m;
    ComplexMatrix p = zeros(dim, dim);
    for (int k = 0; k < opts.noise_operators; ++k) {
        m.push_back(complex_gaussian(dim, dim, rng));
        p.noalias() += m.back().adjoint() * m.back();
    }
    const double spectral = hermitian_eig(hermitize(p)).values.maxCoeff();
    const double target = 0.25 + 0.75 * unit(rng);
    const double scale = std::sqrt(target / spectral);

    std::vector<OperatorSeries> c;
    for (auto &mk : m) {
        ComplexMatrix first = complex_gaussian(dim, dim, rng);
        first *= 0.25 * scale / std::sqrt(static_cast<double>(opts.noise_operators));
        c.push_back(OperatorSeries({scale * mk, std::move(first)}));
    }
    const OperatorSeries s = solve_b_series(dim, c, order);

    std::vector<Complex> kappas;
    double norm2 = 0.0;
    for (int a = 0; a < opts.b_families; ++a) {
        const double mag = 0.1 + unit(rng);
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        kappas.push_back(std::polar(mag, phase));
        norm2 += mag * mag;
    }
    std::vector<OperatorSeries> b;
    for (auto &k : kappas) {
        k /= std::sqrt(norm2);
        b.push_back(s.scaled(k));
    }
    return LowNoiseChannel(dim, std::move(kappas), std::move(b), std::move(c),
                           "random_lownoise[seed=" + std::to_string(seed) + "]");
}

/// Named catalog channel. `seed` is used by random_lownoise only.
[[nodiscard]] inline LowNoiseChannel catalog(std::string_view name, Index dim = 2,
                                             int order = kDefaultTruncationOrder,
                                             std::uint64_t seed = 0) {
    if (order < 0) {
        throw UsageError("truncation order must be >= 0");
    }
    if (name == "identity") {
        return identity_channel(dim, order);
    }
    if (name == "depolarizing") {
        return depolarizing(dim, order);
    }
    if (name == "amplitude_damping") {
        return amplitude_damping(dim, order);
    }
    if (name == "phase_flip") {
        return phase_flip(dim, order);
    }
    if (name == "random_lownoise") {
        return random_lownoise(dim, order, seed);
    }
    throw UsageError("unknown catalog channel '" + std::string(name) + "'");
}

} // namespace lownoise
