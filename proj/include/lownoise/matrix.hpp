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

/**
 * @file
 * Dense complex linear algebra shared by the rest of the library: tensor
 * products, partial traces over multipartite spaces, Hermitian
 * eigendecomposition and the Frobenius projection onto density matrices.
 *
 * Multipartite convention: site 0 is the leftmost tensor factor, i.e. the
 * slowest-varying digit of a composite index.
 */

#include "lownoise/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace lownoise {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Index kDefaultMaxDimension = 4096;

/// Relative Hermiticity tolerance used everywhere in the library.
inline constexpr double kHermitianTolerance = 1e-10;

[[nodiscard]] inline ComplexMatrix identity(Index d) {
    return ComplexMatrix::Identity(d, d);
}

[[nodiscard]] inline ComplexMatrix zeros(Index rows, Index cols) {
    return ComplexMatrix::Zero(rows, cols);
}

[[nodiscard]] inline ComplexMatrix dagger(const ComplexMatrix &m) {
    return m.adjoint();
}

/// (m + m†)/2
[[nodiscard]] inline ComplexMatrix hermitize(const ComplexMatrix &m) {
    ComplexMatrix out = 0.5 * (m + m.adjoint());
    return out;
}

/// ‖m − m†‖_F
[[nodiscard]] inline double hermiticity_residual(const ComplexMatrix &m) {
    return (m - m.adjoint()).norm();
}

[[nodiscard]] inline bool is_hermitian(const ComplexMatrix &m,
                                       double rel_tol = kHermitianTolerance) {
    return m.rows() == m.cols() &&
           hermiticity_residual(m) <= rel_tol * std::max(1.0, m.norm());
}

[[nodiscard]] inline bool all_finite(const ComplexMatrix &m) {
    return std::all_of(m.data(), m.data() + m.size(), [](const Complex &z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

[[nodiscard]] inline Complex trace(const ComplexMatrix &m) { return m.trace(); }

namespace pauli {
[[nodiscard]] inline ComplexMatrix x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
[[nodiscard]] inline ComplexMatrix y() {
    ComplexMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}
[[nodiscard]] inline ComplexMatrix z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
} // namespace pauli

/// Tensor product a ⊗ b. Entry (i·b.rows + k, j·b.cols + l) = a(i,j)·b(k,l).
[[nodiscard]] inline ComplexMatrix kron(const ComplexMatrix &a,
                                        const ComplexMatrix &b,
                                        Index max_dim = kDefaultMaxDimension) {
    const Index rows = a.rows() * b.rows();
    const Index cols = a.cols() * b.cols();
    if (rows > max_dim || cols > max_dim) {
        throw DimensionError("kron: result " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " exceeds dimension cap " +
                             std::to_string(max_dim));
    }
    ComplexMatrix out(rows, cols);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

/// Left-to-right tensor product of a non-empty list of factors.
[[nodiscard]] inline ComplexMatrix
kron_all(std::span<const ComplexMatrix> factors,
         Index max_dim = kDefaultMaxDimension) {
    if (factors.empty()) {
        throw DimensionError("kron_all: empty factor list");
    }
    ComplexMatrix out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        out = kron(out, factors[i], max_dim);
    }
    return out;
}

[[nodiscard]] inline ComplexVector kron(const ComplexVector &a,
                                        const ComplexVector &b) {
    ComplexVector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

namespace detail {

// Offsets (into the full composite index) of every multi-index over `sites`,
// enumerated with the lowest listed site varying slowest.
inline std::vector<Index> subset_offsets(std::span<const Index> dims,
                                         std::span<const Index> strides,
                                         std::span<const Index> sites) {
    std::vector<Index> offsets{0};
    for (Index site : sites) {
        std::vector<Index> next;
        next.reserve(offsets.size() * static_cast<std::size_t>(dims[site]));
        for (Index base : offsets) {
            for (Index k = 0; k < dims[site]; ++k) {
                next.push_back(base + k * strides[site]);
            }
        }
        offsets = std::move(next);
    }
    return offsets;
}

} // namespace detail

/**
 * Partial trace of `rho` on the composite space ⊗_i dims[i], keeping the
 * sites listed in `keep` (in ascending site order in the result).
 */
[[nodiscard]] inline ComplexMatrix partial_trace(const ComplexMatrix &rho,
                                                 std::span<const Index> dims,
                                                 std::span<const Index> keep) {
    if (rho.rows() != rho.cols()) {
        throw DimensionError("partial_trace: operator is not square");
    }
    if (dims.empty()) {
        throw DimensionError("partial_trace: empty site dimension list");
    }
    Index total = 1;
    for (Index d : dims) {
        if (d < 1) {
            throw DimensionError("partial_trace: site dimension < 1");
        }
        total *= d;
    }
    if (total != rho.rows()) {
        throw DimensionError("partial_trace: product of site dimensions " +
                             std::to_string(total) + " != operator dimension " +
                             std::to_string(rho.rows()));
    }
    const auto n_sites = static_cast<Index>(dims.size());
    std::vector<bool> kept(dims.size(), false);
    for (Index k : keep) {
        if (k < 0 || k >= n_sites) {
            throw DimensionError("partial_trace: keep index out of range");
        }
        if (kept[k]) {
            throw DimensionError("partial_trace: duplicate keep index");
        }
        kept[k] = true;
    }
    if (keep.empty()) {
        throw DimensionError("partial_trace: keep set is empty");
    }

    std::vector<Index> strides(dims.size());
    Index stride = 1;
    for (Index i = n_sites - 1; i >= 0; --i) {
        strides[i] = stride;
        stride *= dims[i];
    }
    std::vector<Index> kept_sites;
    std::vector<Index> traced_sites;
    for (Index i = 0; i < n_sites; ++i) {
        (kept[i] ? kept_sites : traced_sites).push_back(i);
    }
    const auto row_offsets = detail::subset_offsets(dims, strides, kept_sites);
    const auto env_offsets =
        detail::subset_offsets(dims, strides, traced_sites);

    const auto d_keep = static_cast<Index>(row_offsets.size());
    ComplexMatrix out = ComplexMatrix::Zero(d_keep, d_keep);
    for (Index r = 0; r < d_keep; ++r) {
        for (Index c = 0; c < d_keep; ++c) {
            Complex acc{0.0, 0.0};
            for (Index e : env_offsets) {
                acc += rho(row_offsets[r] + e, row_offsets[c] + e);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

[[nodiscard]] inline ComplexMatrix
partial_trace(const ComplexMatrix &rho, std::initializer_list<Index> dims,
              std::initializer_list<Index> keep) {
    return partial_trace(rho, std::span<const Index>(dims.begin(), dims.size()),
                         std::span<const Index>(keep.begin(), keep.size()));
}

struct EigenDecomposition {
    RealVector values;    ///< ascending
    ComplexMatrix vectors; ///< orthonormal columns, vectors.col(k) ↔ values(k)

    [[nodiscard]] ComplexMatrix reconstruct() const {
        ComplexMatrix out =
            vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
        return out;
    }
};

/// Eigendecomposition of a Hermitian matrix; throws ContractViolation when
/// ‖h − h†‖_F exceeds the relative Hermiticity tolerance.
[[nodiscard]] inline EigenDecomposition hermitian_eig(const ComplexMatrix &h) {
    if (h.rows() != h.cols()) {
        throw DimensionError("hermitian_eig: matrix is not square");
    }
    if (!is_hermitian(h)) {
        throw ContractViolation("hermitian_eig: input is not Hermitian "
                                "(residual " +
                                std::to_string(hermiticity_residual(h)) + ")");
    }
    const Eigen::MatrixXcd sym = hermitize(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw ContractViolation("hermitian_eig: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Euclidean projection of v onto the probability simplex.
[[nodiscard]] inline RealVector project_to_simplex(const RealVector &v) {
    const Index n = v.size();
    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (Index j = 0; j < n; ++j) {
        cumulative += sorted[j];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) {
            theta = candidate;
        }
    }
    return (v.array() - theta).max(0.0).matrix();
}

/// Nearest (Frobenius) Hermitian, PSD, unit-trace matrix to `m`.
[[nodiscard]] inline ComplexMatrix project_to_density(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("project_to_density: matrix is not square");
    }
    const Eigen::MatrixXcd sym = hermitize(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
    const RealVector p = project_to_simplex(solver.eigenvalues());
    const auto &v = solver.eigenvectors();
    ComplexMatrix out = v * p.cast<Complex>().asDiagonal() * v.adjoint();
    out = hermitize(out);
    // reconstruction rounding can leave the trace a few ulps off 1
    out /= out.trace().real();
    return out;
}

} // namespace lownoise
