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
 * Input-state optimization of the leading Fisher coefficient.
 *
 * maximize_reduced: projected gradient ascent of the concave functional
 * F(ρ̃) over all density matrices (ancilla-assisted inputs).
 * maximize_pure: Riemannian gradient ascent of F(|φ⟩⟨φ|) on the unit sphere
 * (unassisted pure inputs). Non-concave in φ, hence multi-start.
 */

#include "lownoise/channel.hpp"
#include "lownoise/fisher.hpp"
#include "lownoise/random.hpp"
#include "lownoise/states.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace lownoise {

struct OptimizerOptions {
    double tolerance = 1e-8; ///< on the projected / Riemannian gradient norm
    int max_iterations = 10000;
    double armijo = 1e-4;
    double shrink = 0.5;
    double initial_step = 1.0;
    int max_backtracks = 60;
};

inline constexpr int kDefaultStarts = 32;

struct StartSummary {
    double value = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
};

template <typename State>
struct OptimizationResult {
    double optimum_value = 0.0;
    State optimizer_state;
    int starts = 0;
    int converged_starts = 0;
    std::vector<int> iterations_per_start;
    double gradient_norm_final = 0.0;
    std::vector<StartSummary> per_start;
    /// max − min of the values reached by converged starts
    double value_spread = 0.0;
};

using ReducedOptimization = OptimizationResult<DensityMatrix>;
using PureOptimization = OptimizationResult<PureState>;

namespace detail {

// Task-index offsets keeping the reduced, pure and sampling streams apart.
inline constexpr std::uint64_t kPureStream = 1ULL << 32U;
inline constexpr std::uint64_t kTrialStream = 2ULL << 32U;

template <typename State>
OptimizationResult<State> collect(std::vector<StartSummary> runs,
                                  std::vector<State> states) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < runs.size(); ++k) {
        // ties resolve to the earliest start
        if (runs[k].value > runs[best].value + 1e-12) {
            best = k;
        }
    }
    OptimizationResult<State> out{runs[best].value, states[best]};
    out.starts = static_cast<int>(runs.size());
    out.gradient_norm_final = runs[best].gradient_norm;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto &r : runs) {
        out.iterations_per_start.push_back(r.iterations);
        if (r.converged) {
            ++out.converged_starts;
            lo = std::min(lo, r.value);
            hi = std::max(hi, r.value);
        }
    }
    out.value_spread = out.converged_starts > 0 ? hi - lo : 0.0;
    out.per_start = std::move(runs);
    return out;
}

} // namespace detail

/// Projected gradient ascent from one starting density matrix.
[[nodiscard]] inline std::pair<StartSummary, ComplexMatrix>
ascend_reduced(const LeadingFisherFunctional &f, ComplexMatrix rho,
               const OptimizerOptions &opts = {}) {
    StartSummary run;
    double value = f(rho);
    for (run.iterations = 0; run.iterations < opts.max_iterations; ++run.iterations) {
        const ComplexMatrix g = f.gradient(rho);
        run.gradient_norm = (project_to_density(rho + g) - rho).norm();
        if (run.gradient_norm <= opts.tolerance) {
            run.converged = true;
            break;
        }
        double step = opts.initial_step;
        bool accepted = false;
        for (int k = 0; k < opts.max_backtracks; ++k, step *= opts.shrink) {
            ComplexMatrix candidate = project_to_density(rho + step * g);
            const double cand_value = f(candidate);
            const double decrease = (g * (candidate - rho)).trace().real();
            if (cand_value >= value + opts.armijo * decrease) {
                rho = std::move(candidate);
                value = cand_value;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            break; // no ascent step at rounding level
        }
    }
    run.value = value;
    return {run, std::move(rho)};
}

/// Riemannian gradient ascent on the unit sphere from one starting vector.
[[nodiscard]] inline std::pair<StartSummary, ComplexVector>
ascend_pure(const LeadingFisherFunctional &f, ComplexVector phi,
            const OptimizerOptions &opts = {}) {
    StartSummary run;
    phi.normalize();
    double value = f(phi);
    for (run.iterations = 0; run.iterations < opts.max_iterations; ++run.iterations) {
        const ComplexMatrix g = f.gradient(phi * phi.adjoint());
        const ComplexVector gphi = g * phi;
        const ComplexVector tangent = 2.0 * (gphi - phi.dot(gphi) * phi);
        run.gradient_norm = tangent.norm();
        if (run.gradient_norm <= opts.tolerance) {
            run.converged = true;
            break;
        }
        const double slope = run.gradient_norm * run.gradient_norm;
        double step = opts.initial_step;
        bool accepted = false;
        for (int k = 0; k < opts.max_backtracks; ++k, step *= opts.shrink) {
            ComplexVector candidate = (phi + step * tangent).normalized();
            const double cand_value = f(candidate);
            if (cand_value >= value + opts.armijo * step * slope) {
                phi = std::move(candidate);
                value = cand_value;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            break;
        }
    }
    run.value = value;
    return {run, std::move(phi)};
}

/// Maximizes F(ρ̃) over all density matrices of the system from `starts`
/// seeded random initial states; the best run is returned.
[[nodiscard]] inline ReducedOptimization
maximize_reduced(const LowNoiseChannel &ch, int starts = kDefaultStarts,
                 std::uint64_t seed = 0, const OptimizerOptions &opts = {}) {
    if (starts < 1) {
        throw DomainError("maximize_reduced: starts must be >= 1");
    }
    const LeadingFisherFunctional f(ch);
    std::vector<StartSummary> runs;
    std::vector<DensityMatrix> states;
    for (int s = 0; s < starts; ++s) {
        Rng rng = task_rng(seed, static_cast<std::uint64_t>(s));
        const DensityMatrix start = DensityMatrix::random(ch.dim(), rng);
        auto [run, rho] = ascend_reduced(f, start.matrix(), opts);
        runs.push_back(run);
        states.push_back(DensityMatrix::assume_valid(std::move(rho)));
    }
    return detail::collect(std::move(runs), std::move(states));
}

/// Maximizes F(|φ⟩⟨φ|) over unit vectors, multi-start.
[[nodiscard]] inline PureOptimization maximize_pure(const LowNoiseChannel &ch,
                                                    int starts = kDefaultStarts,
                                                    std::uint64_t seed = 0,
                                                    const OptimizerOptions &opts = {}) {
    if (starts < 1) {
        throw DomainError("maximize_pure: starts must be >= 1");
    }
    const LeadingFisherFunctional f(ch);
    std::vector<StartSummary> runs;
    std::vector<PureState> states;
    for (int s = 0; s < starts; ++s) {
        Rng rng = task_rng(seed, detail::kPureStream + static_cast<std::uint64_t>(s));
        const PureState start = PureState::haar_random(ch.dim(), rng);
        auto [run, phi] = ascend_pure(f, start.amplitudes(), opts);
        runs.push_back(run);
        states.push_back(PureState::from_amplitudes(phi));
    }
    return detail::collect(std::move(runs), std::move(states));
}

struct EnhancementReport {
    double j_pure_max = 0.0;
    double j_reduced_max = 0.0;
    /// j_reduced_max / j_pure_max; empty when the pure optimum vanishes.
    std::optional<double> ratio;

    static constexpr double kVanishingOptimum = 1e-12;
};

[[nodiscard]] inline EnhancementReport
enhancement_from(const ReducedOptimization &reduced, const PureOptimization &pure) {
    EnhancementReport out;
    out.j_pure_max = pure.optimum_value;
    out.j_reduced_max = reduced.optimum_value;
    if (out.j_pure_max > EnhancementReport::kVanishingOptimum) {
        out.ratio = out.j_reduced_max / out.j_pure_max;
    }
    return out;
}

[[nodiscard]] inline EnhancementReport
enhancement_factor(const LowNoiseChannel &ch, int starts = kDefaultStarts,
                   std::uint64_t seed = 0, const OptimizerOptions &opts = {}) {
    return enhancement_from(maximize_reduced(ch, starts, seed, opts),
                            maximize_pure(ch, starts, seed, opts));
}

/// Σ_k √λ_k |v_k⟩_S |k⟩_A with λ descending: a purification of ρ̃ on S⊗A.
[[nodiscard]] inline PureState purify(const DensityMatrix &rho) {
    const Index d = rho.dim();
    const auto eig = hermitian_eig(rho.matrix());
    ComplexVector psi = ComplexVector::Zero(d * d);
    for (Index k = 0; k < d; ++k) {
        const Index src = d - 1 - k; // ascending → descending
        const double lambda = std::max(eig.values(src), 0.0);
        const ComplexVector ancilla = ComplexVector::Unit(d, k);
        psi += std::sqrt(lambda) * kron(ComplexVector(eig.vectors.col(src)), ancilla);
    }
    return PureState::from_amplitudes(psi);
}

struct FactorizedOptimum {
    PureState state;      ///< |Ψ_opt⟩^{⊗n}
    PureState site_state; ///< |Ψ_opt⟩ on S⊗A
    double value = 0.0;   ///< leading coefficient of the n-site input
    double site_optimum = 0.0;
    std::vector<double> per_site;
};

[[nodiscard]] inline FactorizedOptimum
factorized_optimum_nbody(const LowNoiseChannel &ch, int n, std::uint64_t seed = 0,
                         int starts = kDefaultStarts, const OptimizerOptions &opts = {}) {
    if (n < 1 || n > ch.limits().max_sites) {
        throw DimensionError("factorized_optimum_nbody: n = " + std::to_string(n) +
                             " outside [1, " + std::to_string(ch.limits().max_sites) +
                             "]");
    }
    Index total = 1;
    for (int i = 0; i < n; ++i) {
        total *= ch.dim() * ch.dim();
    }
    if (total > ch.limits().max_dimension) {
        throw DimensionError("factorized_optimum_nbody: dimension " +
                             std::to_string(total) + " exceeds cap");
    }
    const ReducedOptimization reduced = maximize_reduced(ch, starts, seed, opts);
    const PureState site = purify(reduced.optimizer_state);
    PureState state = site;
    for (int i = 1; i < n; ++i) {
        state = tensor(state, site);
    }
    NbodyLeading leading = leading_fisher_nbody(ch, state, n);
    return {std::move(state), site, leading.total, reduced.optimum_value,
            std::move(leading.per_site)};
}

struct NoGainReport {
    int n = 0;
    int trials = 0;
    double site_optimum = 0.0;
    double bound = 0.0; ///< n × site optimum
    double max_observed = 0.0;
    double mean_observed = 0.0;
    double gap = 0.0; ///< bound − max_observed
    int violations = 0;

    static constexpr double kTolerance = 1e-9;
};

/**
 * Samples Haar-random pure inputs on ((S⊗A))^{⊗n} and checks that none
 * exceeds n × (maximal single-site coefficient) + 1e-9.
 */
[[nodiscard]] inline NoGainReport
verify_no_entanglement_gain(const LowNoiseChannel &ch, int n, int trials,
                            std::uint64_t seed = 0, int starts = kDefaultStarts,
                            const OptimizerOptions &opts = {}) {
    if (trials < 1) {
        throw UsageError("verify_no_entanglement_gain: trials must be >= 1");
    }
    if (n < 2 || n > ch.limits().max_sites) {
        throw UsageError("verify_no_entanglement_gain: n must be in [2, " +
                         std::to_string(ch.limits().max_sites) + "]");
    }
    Index total = 1;
    for (int i = 0; i < n; ++i) {
        total *= ch.dim() * ch.dim();
    }
    if (total > ch.limits().max_dimension) {
        throw DimensionError("verify_no_entanglement_gain: dimension exceeds cap");
    }

    NoGainReport report;
    report.n = n;
    report.trials = trials;
    report.site_optimum = maximize_reduced(ch, starts, seed, opts).optimum_value;
    report.bound = n * report.site_optimum;
    report.max_observed = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = task_rng(seed, detail::kTrialStream + static_cast<std::uint64_t>(t));
        const PureState psi = PureState::haar_random(total, rng);
        const double value = leading_fisher_nbody(ch, psi, n).total;
        sum += value;
        report.max_observed = std::max(report.max_observed, value);
        if (value > report.bound + NoGainReport::kTolerance) {
            ++report.violations;
        }
    }
    report.mean_observed = sum / trials;
    report.gap = report.bound - report.max_observed;
    return report;
}

} // namespace lownoise
