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

#include <string>
#include <vector>

namespace lownoise {

/**
 * Matrix-valued polynomial X(ε) = Σ_{n=0}^{K} X_n εⁿ in the noise parameter.
 * All coefficients share one shape; K ≥ 0.
 */
class OperatorSeries {
  public:
    explicit OperatorSeries(std::vector<ComplexMatrix> coefficients)
        : coefficients_(std::move(coefficients)) {
        if (coefficients_.empty()) {
            throw DimensionError("OperatorSeries: needs at least one coefficient");
        }
        const Index r = coefficients_.front().rows();
        const Index c = coefficients_.front().cols();
        for (const auto &m : coefficients_) {
            if (m.rows() != r || m.cols() != c) {
                throw DimensionError("OperatorSeries: coefficient shapes differ");
            }
            if (!all_finite(m)) {
                throw ContractViolation("OperatorSeries: non-finite coefficient");
            }
        }
    }

    /// Constant series padded with zero coefficients up to `order`.
    static OperatorSeries constant(const ComplexMatrix &m, int order = 0) {
        std::vector<ComplexMatrix> coeffs(static_cast<std::size_t>(order) + 1,
                                          zeros(m.rows(), m.cols()));
        coeffs.front() = m;
        return OperatorSeries(std::move(coeffs));
    }

    [[nodiscard]] int order() const noexcept {
        return static_cast<int>(coefficients_.size()) - 1;
    }
    [[nodiscard]] Index rows() const noexcept {
        return coefficients_.front().rows();
    }
    [[nodiscard]] Index cols() const noexcept {
        return coefficients_.front().cols();
    }
    [[nodiscard]] const std::vector<ComplexMatrix> &coefficients() const noexcept {
        return coefficients_;
    }
    /// X_n, or the zero matrix for n > K.
    [[nodiscard]] ComplexMatrix coefficient(int n) const {
        if (n < 0) {
            throw DomainError("OperatorSeries: negative power");
        }
        if (n > order()) {
            return zeros(rows(), cols());
        }
        return coefficients_[static_cast<std::size_t>(n)];
    }

    /// Horner evaluation at eps ≥ 0.
    [[nodiscard]] ComplexMatrix evaluate(double eps) const {
        check_eps(eps);
        ComplexMatrix acc = coefficients_.back();
        for (int n = order() - 1; n >= 0; --n) {
            acc = acc * eps + coefficients_[static_cast<std::size_t>(n)];
        }
        return acc;
    }

    /// dX/dε at eps ≥ 0.
    [[nodiscard]] ComplexMatrix derivative(double eps) const {
        check_eps(eps);
        if (order() == 0) {
            return zeros(rows(), cols());
        }
        ComplexMatrix acc =
            static_cast<double>(order()) * coefficients_.back();
        for (int n = order() - 1; n >= 1; --n) {
            acc = acc * eps +
                  static_cast<double>(n) * coefficients_[static_cast<std::size_t>(n)];
        }
        return acc;
    }

    [[nodiscard]] OperatorSeries scaled(Complex factor) const {
        std::vector<ComplexMatrix> out;
        out.reserve(coefficients_.size());
        for (const auto &m : coefficients_) {
            out.emplace_back(factor * m);
        }
        return OperatorSeries(std::move(out));
    }

    /// Coefficient-wise X_n ↦ f(X_n).
    template <typename F>
    [[nodiscard]] OperatorSeries transformed(F &&f) const {
        std::vector<ComplexMatrix> out;
        out.reserve(coefficients_.size());
        for (const auto &m : coefficients_) {
            out.emplace_back(f(m));
        }
        return OperatorSeries(std::move(out));
    }

  private:
    static void check_eps(double eps) {
        if (!(eps >= 0.0) || !std::isfinite(eps)) {
            throw DomainError("noise parameter must be a finite value >= 0, got " +
                              std::to_string(eps));
        }
    }

    std::vector<ComplexMatrix> coefficients_;
};

[[nodiscard]] inline ComplexMatrix evaluate_kraus(const OperatorSeries &s,
                                                  double eps) {
    return s.evaluate(eps);
}

/// Cauchy product of a(ε) ⊗ b(ε), truncated at εᴷ with K = max_order.
[[nodiscard]] inline OperatorSeries kron(const OperatorSeries &a,
                                         const OperatorSeries &b, int max_order,
                                         Index max_dim = kDefaultMaxDimension) {
    if (a.rows() * b.rows() > max_dim || a.cols() * b.cols() > max_dim) {
        throw DimensionError("kron: series product exceeds dimension cap " +
                             std::to_string(max_dim));
    }
    const int order = std::min(max_order, a.order() + b.order());
    std::vector<ComplexMatrix> coeffs;
    coeffs.reserve(static_cast<std::size_t>(order) + 1);
    for (int m = 0; m <= order; ++m) {
        ComplexMatrix acc = zeros(a.rows() * b.rows(), a.cols() * b.cols());
        for (int k = std::max(0, m - b.order()); k <= std::min(m, a.order()); ++k) {
            if (a.coefficients()[static_cast<std::size_t>(k)].isZero(0.0) ||
                b.coefficients()[static_cast<std::size_t>(m - k)].isZero(0.0)) {
                continue;
            }
            acc += kron(a.coefficients()[static_cast<std::size_t>(k)],
                        b.coefficients()[static_cast<std::size_t>(m - k)], max_dim);
        }
        coeffs.push_back(std::move(acc));
    }
    return OperatorSeries(std::move(coeffs));
}

/// Taylor coefficients of √(1 − x) through xᴷ.
[[nodiscard]] inline std::vector<double> sqrt_one_minus_coefficients(int order) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1);
    c[0] = 1.0;
    for (int n = 1; n <= order; ++n) {
        c[static_cast<std::size_t>(n)] =
            c[static_cast<std::size_t>(n - 1)] * (static_cast<double>(n) - 1.5) /
            static_cast<double>(n);
    }
    return c;
}

/// √(1 − ε)·m as a truncated series.
[[nodiscard]] inline OperatorSeries sqrt_one_minus_eps_times(const ComplexMatrix &m,
                                                             int order) {
    const auto c = sqrt_one_minus_coefficients(order);
    std::vector<ComplexMatrix> coeffs;
    coeffs.reserve(c.size());
    for (double cn : c) {
        coeffs.emplace_back(cn * m);
    }
    return OperatorSeries(std::move(coeffs));
}

} // namespace lownoise
