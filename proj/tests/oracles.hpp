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

// Independent reference computations used by the unit and acceptance
// suites. Nothing here calls the optimizer, the SLD solver or the leading
// Fisher functional of the library.

#include "lownoise/matrix.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace lownoise::oracle {

/// Exact J for the qubit depolarizing channel on |0⟩⟨0|: the output is
/// diag(1 − 2ε/3, 2ε/3), so J is the classical Fisher information
/// Σ (∂λ)²/λ with ∂λ = ∓2/3.
inline double depolarizing_ground_fisher(double eps) {
    return (4.0 / 9.0) * (1.0 / (1.0 - 2.0 * eps / 3.0) + 3.0 / (2.0 * eps));
}

/// ε·J for the same case, (4/9)[3/2 + ε/(1 − 2ε/3)].
inline double depolarizing_ground_scaled_fisher(double eps) {
    return (4.0 / 9.0) * (1.5 + eps / (1.0 - 2.0 * eps / 3.0));
}

/// Exact J for amplitude damping on |1⟩⟨1|: output diag(ε, 1 − ε).
inline double amplitude_damping_excited_fisher(double eps) {
    return 1.0 / (eps * (1.0 - eps));
}

/// √(1 − x) by the scalar library routine.
inline double sqrt_one_minus(double x) { return std::sqrt(1.0 - x); }

/**
 * Leading coefficient of a qubit family {M_β} written in Bloch coordinates:
 * with ρ = (1 + r·σ)/2, Tr(ρA) = (Tr A + Σ_k r_k Tr(σ_k A))/2, so
 *   F(r) = Σ_β [(p0 + r·p)/2 − |(m0_β + r·m_β)/2|²]
 * where p0 = Tr P, p_k = Tr(σ_k P), P = Σ M†M, m0_β = Tr M_β, m_β,k = Tr(σ_k M_β).
 */
class BlochFunctional {
  public:
    explicit BlochFunctional(const std::vector<ComplexMatrix> &family) {
        const ComplexMatrix sx = pauli::x();
        const ComplexMatrix sy = pauli::y();
        const ComplexMatrix sz = pauli::z();
        ComplexMatrix p = ComplexMatrix::Zero(2, 2);
        for (const auto &m : family) {
            ComplexMatrix mdm = m.adjoint() * m;
            p += mdm;
            terms_.push_back({m.trace(), (sx * m).trace(), (sy * m).trace(),
                              (sz * m).trace()});
        }
        p0_ = p.trace().real();
        p_[0] = (sx * p).trace().real();
        p_[1] = (sy * p).trace().real();
        p_[2] = (sz * p).trace().real();
    }

    [[nodiscard]] double operator()(double x, double y, double z) const {
        double value = 0.5 * (p0_ + x * p_[0] + y * p_[1] + z * p_[2]);
        for (const auto &t : terms_) {
            const std::complex<double> tr = 0.5 * (t[0] + x * t[1] + y * t[2] + z * t[3]);
            value -= std::norm(tr);
        }
        return value;
    }

  private:
    double p0_ = 0.0;
    double p_[3] = {0.0, 0.0, 0.0};
    std::vector<std::array<std::complex<double>, 4>> terms_;
};

struct GridMaximum {
    double value = -1e300;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Exhaustive search over the Bloch ball on a cubic grid with spacing
/// `step`, optionally restricted to a cube of half-width `half` around a
/// center (used for successive zooming).
inline GridMaximum bloch_ball_grid(const BlochFunctional &f, double step,
                                   double cx = 0.0, double cy = 0.0, double cz = 0.0,
                                   double half = 1.0) {
    GridMaximum best;
    const int n = static_cast<int>(std::lround(half / step));
    for (int i = -n; i <= n; ++i) {
        const double x = cx + i * step;
        for (int j = -n; j <= n; ++j) {
            const double y = cy + j * step;
            for (int k = -n; k <= n; ++k) {
                const double z = cz + k * step;
                if (x * x + y * y + z * z > 1.0 + 1e-12) {
                    continue;
                }
                const double v = f(x, y, z);
                if (v > best.value) {
                    best = {v, x, y, z};
                }
            }
        }
    }
    return best;
}

/// Grid at step 0.01 followed by zoomed grids (each 10× finer) around the
/// incumbent; for a concave objective this converges to the global maximum.
inline GridMaximum bloch_ball_refined(const BlochFunctional &f, int zoom_levels = 4) {
    GridMaximum best = bloch_ball_grid(f, 0.01);
    double step = 0.01;
    for (int level = 0; level < zoom_levels; ++level) {
        const GridMaximum local =
            bloch_ball_grid(f, step / 10.0, best.x, best.y, best.z, 2.0 * step);
        if (local.value > best.value) {
            best = local;
        }
        step /= 10.0;
    }
    return best;
}

/// Search over the Bloch sphere on a (θ, φ) grid with spacing in degrees.
inline GridMaximum bloch_sphere_grid(const BlochFunctional &f, double step_deg = 1.0,
                                     double theta0 = 0.0, double theta1 = 180.0,
                                     double phi0 = 0.0, double phi1 = 360.0) {
    GridMaximum best;
    const double to_rad = std::numbers::pi / 180.0;
    const int nt = static_cast<int>(std::lround((theta1 - theta0) / step_deg));
    const int np = static_cast<int>(std::lround((phi1 - phi0) / step_deg));
    for (int i = 0; i <= nt; ++i) {
        const double theta = (theta0 + i * step_deg) * to_rad;
        for (int j = 0; j <= np; ++j) {
            const double phi = (phi0 + j * step_deg) * to_rad;
            const double x = std::sin(theta) * std::cos(phi);
            const double y = std::sin(theta) * std::sin(phi);
            const double z = std::cos(theta);
            const double v = f(x, y, z);
            if (v > best.value) {
                best = {v, theta / to_rad, phi / to_rad, 0.0};
            }
        }
    }
    return best;
}

/// 1° grid then zoomed (θ, φ) grids around the incumbent.
inline GridMaximum bloch_sphere_refined(const BlochFunctional &f, int zoom_levels = 4) {
    GridMaximum best = bloch_sphere_grid(f, 1.0);
    double step = 1.0;
    for (int level = 0; level < zoom_levels; ++level) {
        const GridMaximum local =
            bloch_sphere_grid(f, step / 10.0, best.x - 2.0 * step, best.x + 2.0 * step,
                              best.y - 2.0 * step, best.y + 2.0 * step);
        if (local.value > best.value) {
            best = local;
        }
        step /= 10.0;
    }
    return best;
}

/// Naive two-site partial trace over site 1 by explicit index arithmetic.
inline ComplexMatrix trace_out_second(const ComplexMatrix &rho, Index da, Index db) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Index i = 0; i < da; ++i) {
        for (Index j = 0; j < da; ++j) {
            for (Index k = 0; k < db; ++k) {
                out(i, j) += rho(i * db + k, j * db + k);
            }
        }
    }
    return out;
}

/// Naive two-site partial trace over site 0.
inline ComplexMatrix trace_out_first(const ComplexMatrix &rho, Index da, Index db) {
    ComplexMatrix out = ComplexMatrix::Zero(db, db);
    for (Index k = 0; k < db; ++k) {
        for (Index l = 0; l < db; ++l) {
            for (Index i = 0; i < da; ++i) {
                out(k, l) += rho(i * db + k, i * db + l);
            }
        }
    }
    return out;
}

/// J for a full-rank ρ by solving ½(ρL + Lρ) = ∂ρ as a dense linear system
/// on vec(L) (column stacking), then J = Tr(∂ρ L).
inline double lyapunov_fisher(const ComplexMatrix &rho, const ComplexMatrix &drho) {
    const Index n = rho.rows();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n * n, n * n);
    Eigen::VectorXcd b(n * n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const Index row = j * n + i; // entry (i, j)
            b(row) = drho(i, j);
            for (Index k = 0; k < n; ++k) {
                a(row, j * n + k) += 0.5 * rho(i, k); // (ρL)_ij
                a(row, k * n + i) += 0.5 * rho(k, j); // (Lρ)_ij
            }
        }
    }
    const Eigen::VectorXcd x = a.fullPivLu().solve(b);
    std::complex<double> j_value = 0.0;
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            j_value += drho(j, i) * x(j * n + i);
        }
    }
    return j_value.real();
}

/// A Kraus operator at fixed ε together with its ε-derivative.
struct KrausPair {
    ComplexMatrix k;
    ComplexMatrix dk;
};

/// Product Kraus operators K_{a}⊗K_{b}⊗… and their derivatives by the
/// product rule, for the same single-site list on every one of `n` sites.
inline std::vector<KrausPair> product_kraus(const std::vector<KrausPair> &site, int n) {
    std::vector<KrausPair> out = site;
    for (int s = 1; s < n; ++s) {
        std::vector<KrausPair> next;
        for (const auto &a : out) {
            for (const auto &b : site) {
                next.push_back({kron(a.k, b.k), kron(a.dk, b.k) + kron(a.k, b.dk)});
            }
        }
        out = std::move(next);
    }
    return out;
}

/// Σ K ρ K† and its derivative Σ (K'ρK† + KρK'†).
inline std::pair<ComplexMatrix, ComplexMatrix>
kraus_output(const std::vector<KrausPair> &ops, const ComplexMatrix &rho) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    ComplexMatrix dout = out;
    for (const auto &op : ops) {
        out += op.k * rho * op.k.adjoint();
        const ComplexMatrix t = op.dk * rho * op.k.adjoint();
        dout += t + t.adjoint();
    }
    return {out, dout};
}

} // namespace lownoise::oracle
