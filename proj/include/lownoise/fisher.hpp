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
 * Quantum Fisher information of channel outputs.
 *
 * Exact route: the symmetric logarithmic derivative L solving
 * ∂_ε ρ = ½(Lρ + ρL), with J = Tr[ρL²], evaluated on ρ_out(ε).
 *
 * Leading-order route: J = c₁/ε + O(ε⁰) with
 *   c₁ = Σ_β [Tr(ρ̃ M_β†M_β) − |Tr(ρ̃ M_β)|²],
 * where ρ̃ is the system's reduced input state and M_β = C_β(0). For N-body
 * inputs c₁ is the sum of the single-site values over the per-site reduced
 * states.
 */

#include "lownoise/channel.hpp"
#include "lownoise/errors.hpp"
#include "lownoise/matrix.hpp"
#include "lownoise/states.hpp"

#include <array>
#include <limits>
#include <vector>

namespace lownoise {

struct SldResult {
    ComplexMatrix sld;
    double fisher = 0.0;            ///< Σ_{λi+λj>τ} 2|⟨i|∂ρ|j⟩|²/(λi+λj)
    double fisher_trace_form = 0.0; ///< Tr[ρL²], computed in the input basis
    Index support_dimension = 0;
    double residual = 0.0; ///< ‖P(∂ρ − ½(Lρ+ρL))P‖_F, P the support projector
};

inline constexpr double kSupportThreshold = 1e-12;
inline constexpr double kDerivativeTraceTolerance = 1e-8;

[[nodiscard]] inline SldResult sld(const DensityMatrix &rho, const ComplexMatrix &drho) {
    const ComplexMatrix &r = rho.matrix();
    if (drho.rows() != r.rows() || drho.cols() != r.cols()) {
        throw DimensionError("sld: derivative shape does not match the state");
    }
    if (!is_hermitian(drho)) {
        throw ContractViolation("sld: derivative is not Hermitian");
    }
    if (std::abs(drho.trace()) > kDerivativeTraceTolerance) {
        throw ContractViolation("sld: derivative trace " +
                                std::to_string(std::abs(drho.trace())) +
                                " exceeds tolerance; the family is not trace preserving");
    }

    const auto eig = hermitian_eig(r);
    const RealVector &lambda = eig.values;
    const ComplexMatrix &v = eig.vectors;
    const ComplexMatrix d = v.adjoint() * hermitize(drho) * v;
    const double tau = kSupportThreshold * r.trace().real();
    const Index n = r.rows();

    SldResult out;
    ComplexMatrix l_eig = zeros(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const double denom = lambda(i) + lambda(j);
            if (denom > tau) {
                l_eig(i, j) = 2.0 * d(i, j) / denom;
                out.fisher += 2.0 * std::norm(d(i, j)) / denom;
            }
        }
    }
    out.sld = hermitize(v * l_eig * v.adjoint());
    out.fisher_trace_form = (r * out.sld * out.sld).trace().real();

    std::vector<Index> support;
    for (Index i = 0; i < n; ++i) {
        if (lambda(i) > tau) {
            support.push_back(i);
        }
    }
    out.support_dimension = static_cast<Index>(support.size());
    if (!support.empty()) {
        ComplexMatrix vs(n, out.support_dimension);
        for (Index k = 0; k < out.support_dimension; ++k) {
            vs.col(k) = v.col(support[static_cast<std::size_t>(k)]);
        }
        const ComplexMatrix resid = drho - 0.5 * (out.sld * r + r * out.sld);
        out.residual = (vs.adjoint() * resid * vs).norm();
    }
    return out;
}

struct FisherReport {
    double eps = 0.0;
    double exact_j = 0.0;
    double leading_coefficient = 0.0; ///< eps·exact_j
    double cramer_rao_bound = std::numeric_limits<double>::infinity();
    double trace_defect = 0.0;
};

/// Exact SLD Fisher information of Γ_ε[input] for eps > 0.
[[nodiscard]] inline FisherReport exact_fisher(const LowNoiseChannel &ch,
                                               const DensityMatrix &input, double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw DomainError("exact_fisher: eps must be > 0, got " + std::to_string(eps));
    }
    const ChannelOutput out = apply(ch, input, eps);
    const ComplexMatrix drho = derivative_output(ch, input, eps);
    const SldResult s = sld(out.state, drho);

    FisherReport report;
    report.eps = eps;
    report.exact_j = s.fisher;
    report.leading_coefficient = eps * s.fisher;
    if (s.fisher > 0.0) {
        report.cramer_rao_bound = 1.0 / s.fisher;
    }
    report.trace_defect = out.trace_defect;
    return report;
}

/**
 * F(ρ̃) = Σ_β [Tr(ρ̃ M_β†M_β) − |Tr(ρ̃ M_β)|²] for a fixed family {M_β}.
 * Concave in ρ̃; invariant under unitary mixing of the family.
 */
class LeadingFisherFunctional {
  public:
    explicit LeadingFisherFunctional(const LowNoiseChannel &ch)
        : dim_(ch.dim()), m_(ch.noise_operators()), p_(zeros(dim_, dim_)) {
        for (const auto &m : m_) {
            p_.noalias() += m.adjoint() * m;
        }
    }

    [[nodiscard]] Index dim() const noexcept { return dim_; }

    [[nodiscard]] double operator()(const ComplexMatrix &rho) const {
        check_dim(rho.rows());
        double value = (rho * p_).trace().real();
        for (const auto &m : m_) {
            value -= std::norm((rho * m).trace());
        }
        return value;
    }

    [[nodiscard]] double operator()(const ComplexVector &phi) const {
        check_dim(phi.size());
        double value = phi.dot(p_ * phi).real();
        for (const auto &m : m_) {
            value -= std::norm(phi.dot(m * phi));
        }
        return value;
    }

    /// Hermitian G with dF = Tr(G dρ): G = Σ_β [M†M − (t̄_β M_β + t_β M_β†)],
    /// t_β = Tr(ρ M_β).
    [[nodiscard]] ComplexMatrix gradient(const ComplexMatrix &rho) const {
        check_dim(rho.rows());
        ComplexMatrix g = p_;
        for (const auto &m : m_) {
            const Complex t = (rho * m).trace();
            g -= std::conj(t) * m + t * m.adjoint();
        }
        return hermitize(g);
    }

  private:
    void check_dim(Index n) const {
        if (n != dim_) {
            throw DimensionError("leading Fisher: state dimension " + std::to_string(n) +
                                 " != channel dimension " + std::to_string(dim_));
        }
    }

    Index dim_;
    std::vector<ComplexMatrix> m_;
    ComplexMatrix p_;
};

[[nodiscard]] inline double leading_fisher_pure(const LowNoiseChannel &ch,
                                                const PureState &phi) {
    return LeadingFisherFunctional(ch)(phi.amplitudes());
}

[[nodiscard]] inline double leading_fisher_reduced(const LowNoiseChannel &ch,
                                                   const DensityMatrix &rho_tilde) {
    return LeadingFisherFunctional(ch)(rho_tilde.matrix());
}

struct NbodyLeading {
    double total = 0.0;
    std::vector<double> per_site;
};

/// c₁ for a pure input on ((S⊗A))^{⊗n}, site order S₁A₁S₂A₂…
[[nodiscard]] inline NbodyLeading leading_fisher_nbody(const LowNoiseChannel &ch,
                                                       const PureState &psi, int n) {
    const Index d = ch.dim();
    Index expected = 1;
    for (int i = 0; i < n; ++i) {
        expected *= d * d;
    }
    if (n < 1 || psi.dim() != expected) {
        throw DimensionError("leading_fisher_nbody: state dimension " +
                             std::to_string(psi.dim()) + " does not match (" +
                             std::to_string(d) + "x" + std::to_string(d) + ")^" +
                             std::to_string(n));
    }
    const LeadingFisherFunctional functional(ch);
    const ComplexMatrix full = psi.projector();
    const std::vector<Index> site_dims(static_cast<std::size_t>(n), d * d);
    const std::array<Index, 2> pair_dims{d, d};
    const std::array<Index, 1> keep_system{0};

    NbodyLeading out;
    for (Index i = 0; i < n; ++i) {
        const std::array<Index, 1> keep{i};
        const ComplexMatrix site = partial_trace(full, site_dims, keep);
        const ComplexMatrix reduced = partial_trace(site, pair_dims, keep_system);
        out.per_site.push_back(functional(reduced));
        out.total += out.per_site.back();
    }
    return out;
}

/**
 * Extrapolates eps·J(eps) to eps → 0 by a least-squares line through the
 * points (eps, eps·exact_j); returns the intercept.
 */
[[nodiscard]] inline double leading_from_exact(const LowNoiseChannel &ch,
                                               const DensityMatrix &input,
                                               const std::vector<double> &eps_list) {
    if (eps_list.size() < 2) {
        throw DomainError("leading_from_exact: needs at least two eps values");
    }
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!(eps_list[k] > 0.0)) {
            throw DomainError("leading_from_exact: eps values must be > 0");
        }
        if (k > 0 && !(eps_list[k] < eps_list[k - 1])) {
            throw DomainError("leading_from_exact: eps values must be strictly descending");
        }
    }
    const auto count = static_cast<double>(eps_list.size());
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (double eps : eps_list) {
        const double y = exact_fisher(ch, input, eps).leading_coefficient;
        sx += eps;
        sy += y;
        sxx += eps * eps;
        sxy += eps * y;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return (sy - slope * sx) / count;
}

} // namespace lownoise
