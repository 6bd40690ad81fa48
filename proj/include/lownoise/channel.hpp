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
 * Low-noise channels in Kraus form
 *
 *     Γ_ε[ρ] = Σ_α B_α(ε) ρ B_α(ε)† + ε Σ_β C_β(ε) ρ C_β(ε)†,
 *
 * with B_α(ε) = κ_α·1 + O(ε), Σ_α |κ_α|² = 1 and C_β(0) = M_β. Every Kraus
 * factor is stored as a truncated polynomial in ε (OperatorSeries), so the
 * completeness relation only holds through the truncation order.
 */

#include "lownoise/errors.hpp"
#include "lownoise/matrix.hpp"
#include "lownoise/series.hpp"
#include "lownoise/states.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lownoise {

struct ChannelLimits {
    Index max_dimension = kDefaultMaxDimension;
    std::size_t max_families = 64; ///< per family kind (B or C)
    int max_sites = 3;             ///< cap on the N of N-body extensions
};

/// Bookkeeping for Kraus products dropped by extend_nbody (those carrying
/// two or more C factors, i.e. of order ε² and higher).
struct TruncationDiagnostic {
    std::size_t dropped_products = 0;
    /// ‖Σ_{two-C products} X(0)†X(0)‖_F: the ε² coefficient of the
    /// completeness weight that was discarded.
    double order2_weight = 0.0;
};

class LowNoiseChannel {
  public:
    LowNoiseChannel(Index dim, std::vector<Complex> kappas,
                    std::vector<OperatorSeries> b_series,
                    std::vector<OperatorSeries> c_series, std::string label,
                    ChannelLimits limits = {})
        : dim_(dim), kappas_(std::move(kappas)), b_series_(std::move(b_series)),
          c_series_(std::move(c_series)), label_(std::move(label)),
          limits_(limits) {
        if (dim_ < 1 || dim_ > limits_.max_dimension) {
            throw DimensionError("LowNoiseChannel: dimension " +
                                 std::to_string(dim_) + " outside [1, " +
                                 std::to_string(limits_.max_dimension) + "]");
        }
        if (kappas_.size() != b_series_.size()) {
            throw DimensionError("LowNoiseChannel: one kappa per B-series required");
        }
        if (b_series_.size() > limits_.max_families ||
            c_series_.size() > limits_.max_families) {
            throw DimensionError("LowNoiseChannel: more than " +
                                 std::to_string(limits_.max_families) +
                                 " Kraus families");
        }
        for (const auto &s : b_series_) {
            check_shape(s, "B");
            truncation_order_ = std::max(truncation_order_, s.order());
        }
        for (const auto &s : c_series_) {
            check_shape(s, "C");
            truncation_order_ = std::max(truncation_order_, s.order());
        }
        validity_order_ = truncation_order_;
    }

    [[nodiscard]] Index dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<Complex> &kappas() const noexcept {
        return kappas_;
    }
    [[nodiscard]] const std::vector<OperatorSeries> &b_series() const noexcept {
        return b_series_;
    }
    [[nodiscard]] const std::vector<OperatorSeries> &c_series() const noexcept {
        return c_series_;
    }
    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    [[nodiscard]] const ChannelLimits &limits() const noexcept { return limits_; }

    /// Highest power of ε stored in any Kraus series.
    [[nodiscard]] int truncation_order() const noexcept {
        return truncation_order_;
    }
    /// Order through which completeness is expected to hold. Equals the
    /// truncation order except for N-body extensions, which are exact only
    /// through ε¹.
    [[nodiscard]] int validity_order() const noexcept { return validity_order_; }

    [[nodiscard]] const std::optional<TruncationDiagnostic> &
    truncation_diagnostic() const noexcept {
        return truncation_;
    }

    /// The M_β = C_β(0).
    [[nodiscard]] std::vector<ComplexMatrix> noise_operators() const {
        std::vector<ComplexMatrix> out;
        out.reserve(c_series_.size());
        for (const auto &s : c_series_) {
            out.push_back(s.coefficients().front());
        }
        return out;
    }

    [[nodiscard]] LowNoiseChannel with_label(std::string label) const {
        LowNoiseChannel copy = *this;
        copy.label_ = std::move(label);
        return copy;
    }

    [[nodiscard]] LowNoiseChannel
    with_truncation(int validity_order, TruncationDiagnostic diag) const {
        LowNoiseChannel copy = *this;
        copy.validity_order_ = validity_order;
        copy.truncation_ = diag;
        return copy;
    }

  private:
    void check_shape(const OperatorSeries &s, const char *kind) const {
        if (s.rows() != dim_ || s.cols() != dim_) {
            throw DimensionError(std::string("LowNoiseChannel: ") + kind +
                                 "-series is " + std::to_string(s.rows()) + "x" +
                                 std::to_string(s.cols()) + ", expected " +
                                 std::to_string(dim_) + "x" + std::to_string(dim_));
        }
    }

    Index dim_;
    std::vector<Complex> kappas_;
    std::vector<OperatorSeries> b_series_;
    std::vector<OperatorSeries> c_series_;
    std::string label_;
    ChannelLimits limits_;
    int truncation_order_ = 0;
    int validity_order_ = 0;
    std::optional<TruncationDiagnostic> truncation_;
};

struct ValidationReport {
    double kappa_norm_defect = 0.0;
    std::vector<double> identity_defects; ///< ‖B_α(0) − κ_α·1‖_F per α
    std::vector<std::pair<double, double>> completeness_residuals; ///< (ε, R(ε))
    bool passed = false;

    static constexpr double kKappaTolerance = 1e-10;
    static constexpr double kIdentityTolerance = 1e-10;
    static constexpr double kValidationEpsMax = 0.1;

    /// Allowed completeness residual at ε for a channel valid through εᴷ.
    [[nodiscard]] static double residual_bound(double eps, int order) {
        return 10.0 * std::pow(eps, order + 1) + 1e-12;
    }
};

/// ‖Σ_α B_α†B_α + ε Σ_β C_β†C_β − 1‖_F
[[nodiscard]] inline double completeness_residual(const LowNoiseChannel &ch,
                                                  double eps) {
    ComplexMatrix acc = -identity(ch.dim());
    for (const auto &s : ch.b_series()) {
        const ComplexMatrix b = s.evaluate(eps);
        acc.noalias() += b.adjoint() * b;
    }
    for (const auto &s : ch.c_series()) {
        const ComplexMatrix c = s.evaluate(eps);
        acc.noalias() += eps * (c.adjoint() * c);
    }
    return acc.norm();
}

[[nodiscard]] inline ValidationReport validate(const LowNoiseChannel &ch,
                                               const std::vector<double> &eps_grid) {
    if (eps_grid.empty()) {
        throw DomainError("validate: empty eps grid");
    }
    for (double eps : eps_grid) {
        if (!(eps >= 0.0 && eps <= ValidationReport::kValidationEpsMax)) {
            throw DomainError("validate: grid entry " + std::to_string(eps) +
                              " outside [0, 0.1]");
        }
    }
    ValidationReport report;
    double kappa_norm = 0.0;
    for (const Complex &k : ch.kappas()) {
        kappa_norm += std::norm(k);
    }
    report.kappa_norm_defect = std::abs(kappa_norm - 1.0);
    bool ok = report.kappa_norm_defect <= ValidationReport::kKappaTolerance;

    for (std::size_t a = 0; a < ch.b_series().size(); ++a) {
        const double defect = (ch.b_series()[a].coefficients().front() -
                               ch.kappas()[a] * identity(ch.dim()))
                                  .norm();
        report.identity_defects.push_back(defect);
        ok = ok && defect <= ValidationReport::kIdentityTolerance;
    }
    for (double eps : eps_grid) {
        const double r = completeness_residual(ch, eps);
        report.completeness_residuals.emplace_back(eps, r);
        ok = ok && r <= ValidationReport::residual_bound(eps, ch.validity_order());
    }
    report.passed = ok;
    return report;
}

struct ChannelOutput {
    DensityMatrix state;
    double trace_defect; ///< |Tr − 1| before renormalization
};

/// Σ_α B ρ B† + ε Σ_β C ρ C†, without hermitizing or renormalizing.
[[nodiscard]] inline ComplexMatrix output_operator(const LowNoiseChannel &ch,
                                                   const ComplexMatrix &rho,
                                                   double eps) {
    if (rho.rows() != ch.dim() || rho.cols() != ch.dim()) {
        throw DimensionError("apply: state dimension " + std::to_string(rho.rows()) +
                             " != channel dimension " + std::to_string(ch.dim()));
    }
    ComplexMatrix out = zeros(ch.dim(), ch.dim());
    for (const auto &s : ch.b_series()) {
        const ComplexMatrix b = s.evaluate(eps);
        out.noalias() += b * rho * b.adjoint();
    }
    for (const auto &s : ch.c_series()) {
        const ComplexMatrix c = s.evaluate(eps);
        out.noalias() += eps * (c * rho * c.adjoint());
    }
    return out;
}

/// ρ_out = Γ_ε[ρ], hermitized and renormalized to unit trace; the trace
/// defect left by series truncation is reported alongside.
[[nodiscard]] inline ChannelOutput apply(const LowNoiseChannel &ch,
                                         const DensityMatrix &rho, double eps) {
    ComplexMatrix out = hermitize(output_operator(ch, rho.matrix(), eps));
    const double tr = out.trace().real();
    out /= tr;
    return {DensityMatrix::assume_valid(std::move(out)), std::abs(tr - 1.0)};
}

/// ∂_ε of the (unnormalized) truncated-series output, hermitized.
[[nodiscard]] inline ComplexMatrix derivative_output(const LowNoiseChannel &ch,
                                                     const DensityMatrix &rho,
                                                     double eps) {
    const ComplexMatrix &r = rho.matrix();
    if (r.rows() != ch.dim()) {
        throw DimensionError("derivative_output: state dimension " +
                             std::to_string(r.rows()) + " != channel dimension " +
                             std::to_string(ch.dim()));
    }
    ComplexMatrix out = zeros(ch.dim(), ch.dim());
    for (const auto &s : ch.b_series()) {
        const ComplexMatrix b = s.evaluate(eps);
        const ComplexMatrix db = s.derivative(eps);
        const ComplexMatrix term = db * r * b.adjoint();
        out += term + term.adjoint();
    }
    for (const auto &s : ch.c_series()) {
        const ComplexMatrix c = s.evaluate(eps);
        const ComplexMatrix dc = s.derivative(eps);
        const ComplexMatrix crc = c * r * c.adjoint();
        const ComplexMatrix term = dc * r * c.adjoint();
        out += crc + eps * (term + term.adjoint());
    }
    return hermitize(out);
}

/// Γ_ε ⊗ id_A with dim(A) = dim(S): every coefficient X becomes X ⊗ 1_A.
[[nodiscard]] inline LowNoiseChannel extend_ancilla(const LowNoiseChannel &ch) {
    const Index d = ch.dim();
    const Index max_dim = ch.limits().max_dimension;
    if (d * d > max_dim) {
        throw DimensionError("extend_ancilla: dimension " + std::to_string(d * d) +
                             " exceeds cap " + std::to_string(max_dim));
    }
    const ComplexMatrix id_a = identity(d);
    auto lift = [&](const ComplexMatrix &x) { return kron(x, id_a, max_dim); };
    std::vector<OperatorSeries> b;
    std::vector<OperatorSeries> c;
    for (const auto &s : ch.b_series()) {
        b.push_back(s.transformed(lift));
    }
    for (const auto &s : ch.c_series()) {
        c.push_back(s.transformed(lift));
    }
    LowNoiseChannel out(d * d, ch.kappas(), std::move(b), std::move(c),
                        ch.label() + "+ancilla", ch.limits());
    if (ch.truncation_diagnostic()) {
        out = out.with_truncation(ch.validity_order(), *ch.truncation_diagnostic());
    }
    return out;
}

namespace detail {

// Calls f(tuple) for every tuple in [0,counts[0]) × ... (site 0 slowest).
template <typename F>
void for_each_tuple(const std::vector<std::size_t> &counts, F &&f) {
    if (std::any_of(counts.begin(), counts.end(),
                    [](std::size_t c) { return c == 0; })) {
        return;
    }
    std::vector<std::size_t> idx(counts.size(), 0);
    while (true) {
        f(idx);
        std::size_t pos = counts.size();
        while (pos > 0) {
            --pos;
            if (++idx[pos] < counts[pos]) {
                break;
            }
            idx[pos] = 0;
            if (pos == 0) {
                return;
            }
        }
        if (counts.empty()) {
            return;
        }
    }
}

} // namespace detail

/**
 * Γ_ε^{⊗n} rewritten in low-noise form.
 *
 * B-families: every n-tuple (α_1..α_n) of B-series, with κ = ∏ κ_{α_i}.
 * C-families: the single-defect products, enumerated site-major: for site
 * i, for each β, for each tuple of B-indices on the other sites, the
 * product carrying C_β at site i and B-series elsewhere. Products with two
 * or more C factors are O(ε²) and are dropped; their count and ε²-weight
 * are kept in truncation_diagnostic().
 */
[[nodiscard]] inline LowNoiseChannel extend_nbody(const LowNoiseChannel &ch, int n) {
    const auto &limits = ch.limits();
    if (n < 1 || n > limits.max_sites) {
        throw DimensionError("extend_nbody: n = " + std::to_string(n) +
                             " outside [1, " + std::to_string(limits.max_sites) +
                             "]");
    }
    Index total = 1;
    for (int i = 0; i < n; ++i) {
        total *= ch.dim();
        if (total > limits.max_dimension) {
            throw DimensionError("extend_nbody: dimension " +
                                 std::to_string(ch.dim()) + "^" + std::to_string(n) +
                                 " exceeds cap " +
                                 std::to_string(limits.max_dimension));
        }
    }
    if (n == 1) {
        return ch;
    }

    const int order = ch.truncation_order();
    const std::size_t n_b = ch.b_series().size();
    const std::size_t n_c = ch.c_series().size();
    const auto sites = static_cast<std::size_t>(n);

    auto series_product = [&](const std::vector<const OperatorSeries *> &factors) {
        OperatorSeries acc = *factors.front();
        for (std::size_t k = 1; k < factors.size(); ++k) {
            acc = kron(acc, *factors[k], order, limits.max_dimension);
        }
        return acc;
    };

    std::vector<Complex> kappas;
    std::vector<OperatorSeries> b;
    detail::for_each_tuple(std::vector<std::size_t>(sites, n_b),
                           [&](const std::vector<std::size_t> &alpha) {
                               std::vector<const OperatorSeries *> f;
                               Complex kappa{1.0, 0.0};
                               for (std::size_t a : alpha) {
                                   f.push_back(&ch.b_series()[a]);
                                   kappa *= ch.kappas()[a];
                               }
                               kappas.push_back(kappa);
                               b.push_back(series_product(f));
                           });

    std::vector<OperatorSeries> c;
    for (std::size_t site = 0; site < sites; ++site) {
        for (std::size_t beta = 0; beta < n_c; ++beta) {
            detail::for_each_tuple(
                std::vector<std::size_t>(sites - 1, n_b),
                [&](const std::vector<std::size_t> &alpha) {
                    std::vector<const OperatorSeries *> f;
                    std::size_t k = 0;
                    for (std::size_t s = 0; s < sites; ++s) {
                        f.push_back(s == site ? &ch.c_series()[beta]
                                              : &ch.b_series()[alpha[k++]]);
                    }
                    c.push_back(series_product(f));
                });
            if (c.size() > limits.max_families) {
                throw DimensionError("extend_nbody: more than " +
                                     std::to_string(limits.max_families) +
                                     " C-families");
            }
        }
    }

    // Dropped products: every site pattern with >= 2 C factors. Only the
    // two-C patterns contribute at ε².
    TruncationDiagnostic diag;
    ComplexMatrix weight2 = zeros(total, total);
    std::vector<ComplexMatrix> b0;
    std::vector<ComplexMatrix> c0;
    for (const auto &s : ch.b_series()) {
        b0.push_back(s.coefficients().front());
    }
    for (const auto &s : ch.c_series()) {
        c0.push_back(s.coefficients().front());
    }
    const std::size_t per_site = n_b + n_c;
    detail::for_each_tuple(
        std::vector<std::size_t>(sites, per_site),
        [&](const std::vector<std::size_t> &pick) {
            const auto c_count = static_cast<std::size_t>(
                std::count_if(pick.begin(), pick.end(),
                              [&](std::size_t p) { return p >= n_b; }));
            if (c_count < 2) {
                return;
            }
            ++diag.dropped_products;
            if (c_count != 2) {
                return;
            }
            std::vector<ComplexMatrix> factors;
            for (std::size_t p : pick) {
                factors.push_back(p < n_b ? b0[p] : c0[p - n_b]);
            }
            const ComplexMatrix x = kron_all(factors, limits.max_dimension);
            weight2.noalias() += x.adjoint() * x;
        });
    diag.order2_weight = weight2.norm();

    std::string label = ch.label() + "^" + std::to_string(n);
    LowNoiseChannel out(total, std::move(kappas), std::move(b), std::move(c),
                        std::move(label), limits);
    const int validity = n_c == 0 ? order : std::min(order, 1);
    return out.with_truncation(validity, diag);
}

} // namespace lownoise
