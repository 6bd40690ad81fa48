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

#include "lownoise/catalog.hpp"
#include "lownoise/channel.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace lownoise;

std::vector<LowNoiseChannel> qubit_catalog() {
    std::vector<LowNoiseChannel> out;
    for (auto name : kCatalogNames) {
        out.push_back(catalog(name, 2, kDefaultTruncationOrder, 42));
    }
    return out;
}

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

// C_β -> Σ_γ u_βγ C_γ, coefficient by coefficient.
LowNoiseChannel mix_noise_family(const LowNoiseChannel &ch, const ComplexMatrix &u) {
    std::vector<OperatorSeries> mixed;
    const auto &c = ch.c_series();
    int order = 0;
    for (const auto &s : c) {
        order = std::max(order, s.order());
    }
    for (Index b = 0; b < u.rows(); ++b) {
        std::vector<ComplexMatrix> coeffs;
        for (int n = 0; n <= order; ++n) {
            ComplexMatrix acc = zeros(ch.dim(), ch.dim());
            for (Index g = 0; g < u.cols(); ++g) {
                acc += u(b, g) * c[static_cast<std::size_t>(g)].coefficient(n);
            }
            coeffs.push_back(acc);
        }
        mixed.push_back(OperatorSeries(coeffs));
    }
    return LowNoiseChannel(ch.dim(), ch.kappas(), ch.b_series(), mixed, ch.label() + "~mixed");
}

TEST(EvaluateKraus, ConstantSeries) {
    const OperatorSeries s({identity(2)});
    EXPECT_TRUE(evaluate_kraus(s, 0.3).isApprox(identity(2)));
}

TEST(EvaluateKraus, LinearMonomial) {
    const OperatorSeries s({zeros(2, 2), identity(2)});
    EXPECT_LE((evaluate_kraus(s, 0.5) - 0.5 * identity(2)).norm(), 1e-16);
}

TEST(EvaluateKraus, SquareRootSeriesMatchesScalar) {
    // tail of √(1−ε) after ε⁶ is |c₇|ε⁷(1 + O(ε)) ≈ 2.1e-16 at ε = 0.01
    const OperatorSeries s = sqrt_one_minus_eps_times(identity(2), 6);
    const ComplexMatrix b = evaluate_kraus(s, 0.01);
    EXPECT_NEAR(b(0, 0).real(), oracle::sqrt_one_minus(0.01), 1e-12);
    EXPECT_NEAR(b(1, 1).real(), 0.99498743710662, 1e-12);
    EXPECT_EQ(b(0, 1), Complex(0.0, 0.0));
}

TEST(EvaluateKraus, NegativeEpsIsDomainError) {
    const OperatorSeries s({identity(2)});
    EXPECT_THROW((void)evaluate_kraus(s, -1e-3), DomainError);
    EXPECT_THROW((void)s.derivative(-1.0), DomainError);
}

TEST(OperatorSeries, RejectsMismatchedShapes) {
    EXPECT_THROW(OperatorSeries({identity(2), identity(3)}), DimensionError);
    EXPECT_THROW(OperatorSeries(std::vector<ComplexMatrix>{}), DimensionError);
    ComplexMatrix bad = identity(2);
    bad(0, 0) = std::nan("");
    EXPECT_THROW(OperatorSeries({bad}), ContractViolation);
}

TEST(OperatorSeries, DerivativeOfPolynomial) {
    // X(ε) = A + 2ε B + ε² C  →  X'(ε) = 2B + 2εC
    Rng rng = task_rng(1, 0);
    const ComplexMatrix a = complex_gaussian(2, 2, rng);
    const ComplexMatrix b = complex_gaussian(2, 2, rng);
    const ComplexMatrix c = complex_gaussian(2, 2, rng);
    const OperatorSeries s({a, 2.0 * b, c});
    EXPECT_LE((s.derivative(0.3) - (2.0 * b + 0.6 * c)).norm(), 1e-14);
}

TEST(SeriesKron, CauchyProductTruncates) {
    const OperatorSeries a({identity(2), identity(2)});          // 1 + ε
    const OperatorSeries b({identity(2), zeros(2, 2), identity(2)}); // 1 + ε²
    const OperatorSeries k = kron(a, b, 2);
    ASSERT_EQ(k.order(), 2);
    EXPECT_TRUE(k.coefficient(0).isApprox(identity(4)));
    EXPECT_TRUE(k.coefficient(1).isApprox(identity(4)));
    EXPECT_TRUE(k.coefficient(2).isApprox(identity(4))); // ε³ term dropped
}

TEST(Apply, IdentityChannelLeavesStateUnchanged) {
    Rng rng = task_rng(2, 0);
    const auto rho = DensityMatrix::random(2, rng);
    const auto out = apply(identity_channel(2), rho, 0.1);
    EXPECT_LE((out.state.matrix() - rho.matrix()).norm(), 1e-15);
    EXPECT_LE(out.trace_defect, 1e-15);
}

TEST(Apply, DepolarizingOnGroundState) {
    const auto ch = depolarizing();
    for (double eps : {1e-4, 1e-3, 1e-2, 0.05}) {
        const auto out = apply(ch, DensityMatrix::from_pure(PureState::basis(2, 0)), eps);
        EXPECT_LE((out.state.matrix() - diag2(1.0 - 2.0 * eps / 3.0, 2.0 * eps / 3.0)).norm(),
                  1e-14 + 10.0 * std::pow(eps, 7))
            << "eps " << eps;
    }
}

TEST(Apply, NoiseVanishingLimitIsIdentity) {
    Rng rng = task_rng(2, 1);
    for (const auto &ch : qubit_catalog()) {
        const auto rho = DensityMatrix::random(2, rng);
        EXPECT_LE((apply(ch, rho, 0.0).state.matrix() - rho.matrix()).norm(), 1e-12)
            << ch.label();
    }
}

TEST(Apply, DimensionMismatch) {
    EXPECT_THROW((void)apply(depolarizing(), DensityMatrix::maximally_mixed(3), 0.1),
                 DimensionError);
    EXPECT_THROW((void)derivative_output(depolarizing(), DensityMatrix::maximally_mixed(3), 0.1),
                 DimensionError);
}

TEST(Validate, IdentityChannelPasses) {
    const auto r = validate(identity_channel(2), {0.0, 1e-3, 1e-2, 0.1});
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.kappa_norm_defect, 0.0);
    ASSERT_EQ(r.identity_defects.size(), 1U);
    EXPECT_EQ(r.identity_defects[0], 0.0);
    for (const auto &[eps, res] : r.completeness_residuals) {
        EXPECT_EQ(res, 0.0) << eps;
    }
}

TEST(Validate, DepolarizingResidualIsSeriesTail) {
    const auto r = validate(depolarizing(2, 6), {1e-3, 1e-2});
    EXPECT_TRUE(r.passed);
    ASSERT_EQ(r.completeness_residuals.size(), 2U);
    EXPECT_LE(r.completeness_residuals[0].second, 1e-14);
    EXPECT_LE(r.completeness_residuals[1].second, 1e-12);
    // brute-force scalar bound: ‖(b(ε)² − (1−ε))·1₂‖_F with b the truncated series
    const auto c = sqrt_one_minus_coefficients(6);
    for (const auto &[eps, res] : r.completeness_residuals) {
        double b = 0.0;
        for (int n = 6; n >= 0; --n) {
            b = b * eps + c[static_cast<std::size_t>(n)];
        }
        EXPECT_LE(res, std::sqrt(2.0) * std::abs(b * b - (1.0 - eps)) + 1e-15);
    }
}

TEST(Validate, KappaViolationFails) {
    const LowNoiseChannel bad(2, {Complex{1.0, 0.0}, Complex{1.0, 0.0}},
                              {OperatorSeries({identity(2)}), OperatorSeries({identity(2)})}, {},
                              "bad_kappa");
    const auto r = validate(bad, {1e-3});
    EXPECT_FALSE(r.passed);
    EXPECT_NEAR(r.kappa_norm_defect, 1.0, 1e-15);
}

TEST(Validate, IdentityDefectFails) {
    ComplexMatrix b0 = identity(2);
    b0(0, 1) = 0.1;
    const LowNoiseChannel bad(2, {Complex{1.0, 0.0}}, {OperatorSeries({b0})}, {}, "bad_b0");
    const auto r = validate(bad, {1e-3});
    EXPECT_FALSE(r.passed);
    EXPECT_NEAR(r.identity_defects[0], 0.1, 1e-15);
}

TEST(Validate, GridOutsideRegimeIsDomainError) {
    EXPECT_THROW((void)validate(depolarizing(), {0.2}), DomainError);
    EXPECT_THROW((void)validate(depolarizing(), {-1e-3}), DomainError);
    EXPECT_THROW((void)validate(depolarizing(), {}), DomainError);
}

TEST(Validate, AllCatalogChannelsPassAtOrderSix) {
    for (const auto &ch : qubit_catalog()) {
        const auto r = validate(ch, {1e-4, 1e-3, 1e-2, 0.05, 0.1});
        EXPECT_TRUE(r.passed) << ch.label();
        EXPECT_LE(r.completeness_residuals[2].second, 1e-12) << ch.label();
    }
}

TEST(Validate, RandomChannelsPassAcrossSeedsAndDimensions) {
    for (Index d : {2, 3, 4}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto ch = random_lownoise(d, 6, seed);
            const auto r = validate(ch, {1e-4, 1e-3, 1e-2, 0.05, 0.1});
            EXPECT_TRUE(r.passed) << "d " << d << " seed " << seed << " residual(0.1) "
                                  << r.completeness_residuals.back().second;
        }
    }
}

TEST(ExtendAncilla, IdentityStaysIdentity) {
    const auto ext = extend_ancilla(identity_channel(2));
    EXPECT_EQ(ext.dim(), 4);
    EXPECT_TRUE(ext.b_series()[0].coefficient(0).isApprox(identity(4)));
    EXPECT_TRUE(ext.c_series().empty());
}

TEST(ExtendAncilla, DepolarizingNoiseOperatorsAreLifted) {
    const auto ext = extend_ancilla(depolarizing());
    const auto m = ext.noise_operators();
    ASSERT_EQ(m.size(), 3U);
    const double s = 1.0 / std::sqrt(3.0);
    EXPECT_LE((m[0] - s * kron(pauli::x(), identity(2))).norm(), 1e-15);
    EXPECT_LE((m[1] - s * kron(pauli::y(), identity(2))).norm(), 1e-15);
    EXPECT_LE((m[2] - s * kron(pauli::z(), identity(2))).norm(), 1e-15);
    EXPECT_EQ(ext.kappas(), depolarizing().kappas());
}

TEST(ExtendAncilla, PreservesValidation) {
    for (const auto &ch : qubit_catalog()) {
        ASSERT_TRUE(validate(ch, {1e-3, 1e-2}).passed);
        EXPECT_TRUE(validate(extend_ancilla(ch), {1e-3, 1e-2}).passed) << ch.label();
    }
}

TEST(ExtendAncilla, DimensionCap) {
    EXPECT_THROW((void)extend_ancilla(identity_channel(65)), DimensionError);
}

TEST(ExtendNbody, IdentityChannel) {
    const auto ext = extend_nbody(identity_channel(2), 2);
    EXPECT_EQ(ext.dim(), 4);
    ASSERT_EQ(ext.b_series().size(), 1U);
    EXPECT_TRUE(ext.b_series()[0].coefficient(0).isApprox(identity(4)));
    EXPECT_TRUE(ext.c_series().empty());
}

TEST(ExtendNbody, SingleSiteIsNoOp) {
    const auto ch = depolarizing();
    const auto ext = extend_nbody(ch, 1);
    EXPECT_EQ(ext.dim(), ch.dim());
    ASSERT_EQ(ext.c_series().size(), ch.c_series().size());
    for (std::size_t b = 0; b < ch.c_series().size(); ++b) {
        EXPECT_TRUE(ext.c_series()[b].coefficient(0).isApprox(ch.c_series()[b].coefficient(0)));
    }
}

TEST(ExtendNbody, DepolarizingWithAncillaTwoSites) {
    const auto site = extend_ancilla(depolarizing());
    const auto ext = extend_nbody(site, 2);
    ASSERT_EQ(ext.dim(), 16);
    ASSERT_EQ(ext.b_series().size(), 1U);
    ASSERT_EQ(ext.c_series().size(), 6U); // 2 sites × 3 β × 1 κ-index
    const ComplexMatrix id4 = identity(4);
    const auto m = depolarizing().noise_operators();
    const Complex kappa = depolarizing().kappas()[0];
    for (std::size_t b = 0; b < 3; ++b) {
        const ComplexMatrix lifted = kron(m[b], identity(2));
        EXPECT_LE((ext.c_series()[b].coefficient(0) - kron(lifted, kappa * id4)).norm(), 1e-15);
        EXPECT_LE((ext.c_series()[3 + b].coefficient(0) - kron(kappa * id4, lifted)).norm(),
                  1e-15);
    }
    ASSERT_TRUE(ext.truncation_diagnostic().has_value());
    EXPECT_EQ(ext.truncation_diagnostic()->dropped_products, 9U);
    // Σ_{β,β'} (M_β†M_β ⊗ 1) ⊗ (M_β'†M_β' ⊗ 1) = 1₁₆
    EXPECT_NEAR(ext.truncation_diagnostic()->order2_weight, 4.0, 1e-12);
    EXPECT_EQ(ext.validity_order(), 1);
}

TEST(ExtendNbody, FamilyCountsWithSeveralKappas) {
    const auto ch = random_lownoise(2, 6, 3); // 2 B-families, 3 C-families
    const auto ext = extend_nbody(ch, 3);
    EXPECT_EQ(ext.b_series().size(), 8U);
    EXPECT_EQ(ext.c_series().size(), 3U * 3U * 4U);
    EXPECT_EQ(ext.truncation_diagnostic()->dropped_products,
              3U * 9U * 2U + 27U); // two-C patterns + three-C patterns
    double kappa_norm = 0.0;
    for (auto k : ext.kappas()) {
        kappa_norm += std::norm(k);
    }
    EXPECT_NEAR(kappa_norm, 1.0, 1e-12);
    const auto r = validate(ext, {1e-4, 1e-3});
    EXPECT_LE(r.kappa_norm_defect, 1e-12);
    for (double d : r.identity_defects) {
        EXPECT_LE(d, 1e-12);
    }
}

TEST(ExtendNbody, DimensionAndSiteCaps) {
    EXPECT_THROW((void)extend_nbody(depolarizing(), 4), DimensionError);
    EXPECT_THROW((void)extend_nbody(depolarizing(), 0), DimensionError);
    EXPECT_THROW((void)extend_nbody(identity_channel(20), 3), DimensionError);
}

TEST(ExtendNbodyProperty, FactorizedInputFactorizes) {
    Rng rng = task_rng(23, 0);
    for (const auto &ch : qubit_catalog()) {
        const auto ext = extend_nbody(ch, 2);
        for (double eps : {1e-4, 1e-3, 1e-2}) {
            for (int trial = 0; trial < 10; ++trial) {
                const auto r1 = DensityMatrix::random(2, rng);
                const auto r2 = DensityMatrix::random(2, rng);
                const ComplexMatrix joint = apply(ext, tensor(r1, r2), eps).state.matrix();
                const ComplexMatrix product =
                    kron(apply(ch, r1, eps).state.matrix(), apply(ch, r2, eps).state.matrix());
                EXPECT_LE((joint - product).norm(), 10.0 * eps * eps) << ch.label();
            }
        }
    }
}

TEST(DerivativeOutput, IdentityChannelIsZero) {
    Rng rng = task_rng(29, 0);
    const auto rho = DensityMatrix::random(2, rng);
    EXPECT_LE(derivative_output(identity_channel(2), rho, 0.01).norm(), 0.0);
}

TEST(DerivativeOutput, DepolarizingOnGroundState) {
    const auto rho = DensityMatrix::from_pure(PureState::basis(2, 0));
    const ComplexMatrix d = derivative_output(depolarizing(), rho, 1e-6);
    EXPECT_LE((d - diag2(-2.0 / 3.0, 2.0 / 3.0)).norm(), 1e-5);
    // affine in ε up to the truncated tail, whose derivative is O(ε⁶)
    const ComplexMatrix d2 = derivative_output(depolarizing(), rho, 0.01);
    EXPECT_LE((d2 - diag2(-2.0 / 3.0, 2.0 / 3.0)).norm(), 1e-10);
}

TEST(DerivativeOutputProperty, MatchesCentralFiniteDifferences) {
    Rng rng = task_rng(31, 0);
    const double h = 1e-5;
    std::vector<LowNoiseChannel> channels = qubit_catalog();
    channels.push_back(random_lownoise(3, 6, 9));
    channels.push_back(extend_ancilla(random_lownoise(2, 6, 10)));
    for (const auto &ch : channels) {
        for (double eps : {1e-4, 1e-3, 1e-2, 0.05}) {
            const auto rho = DensityMatrix::random(ch.dim(), rng);
            const ComplexMatrix fd = (output_operator(ch, rho.matrix(), eps + h) -
                                      output_operator(ch, rho.matrix(), eps - h)) /
                                     (2.0 * h);
            EXPECT_LE((derivative_output(ch, rho, eps) - fd).norm(), 1e-8)
                << ch.label() << " eps " << eps;
        }
    }
}

TEST(Catalog, Identity) {
    const auto ch = catalog("identity", 2, 0);
    ASSERT_EQ(ch.b_series().size(), 1U);
    EXPECT_EQ(ch.b_series()[0].order(), 0);
    EXPECT_TRUE(ch.b_series()[0].coefficient(0).isApprox(identity(2)));
    EXPECT_EQ(ch.kappas(), std::vector<Complex>{Complex(1.0, 0.0)});
}

TEST(Catalog, DepolarizingNoiseOperators) {
    const auto ch = catalog("depolarizing", 2, 6);
    const auto m = ch.noise_operators();
    ASSERT_EQ(m.size(), 3U);
    ComplexMatrix sum = zeros(2, 2);
    for (const auto &mb : m) {
        sum += mb.adjoint() * mb;
    }
    EXPECT_LE((sum - identity(2)).norm(), 1e-15);
    EXPECT_LE((m[1] - pauli::y() / std::sqrt(3.0)).norm(), 1e-16);
}

TEST(Catalog, AmplitudeDamping) {
    const auto ch = catalog("amplitude_damping", 2, 6);
    const auto m = ch.noise_operators();
    ASSERT_EQ(m.size(), 1U);
    ComplexMatrix lower = zeros(2, 2);
    lower(0, 1) = 1.0;
    EXPECT_EQ(m[0], lower);
    EXPECT_EQ(ComplexMatrix(m[0].adjoint() * m[0]), diag2(0.0, 1.0));
    const ComplexMatrix b = ch.b_series()[0].evaluate(0.01);
    EXPECT_NEAR(b(0, 0).real(), 1.0, 1e-16);
    EXPECT_NEAR(b(1, 1).real(), std::sqrt(0.99), 1e-12);
}

TEST(Catalog, HigherDimensionalDepolarizingAndPhaseFlip) {
    for (Index d : {3, 4}) {
        EXPECT_TRUE(validate(depolarizing(d), {1e-3, 1e-2, 0.1}).passed);
        EXPECT_TRUE(validate(phase_flip(d), {1e-3, 1e-2, 0.1}).passed);
        EXPECT_EQ(depolarizing(d).c_series().size(), static_cast<std::size_t>(d * d - 1));
    }
}

TEST(Catalog, Errors) {
    EXPECT_THROW((void)catalog("bogus"), UsageError);
    EXPECT_THROW((void)catalog("amplitude_damping", 3), UsageError);
    EXPECT_THROW((void)catalog("depolarizing", 2, -1), UsageError);
}

TEST(Catalog, RandomChannelIsReproducible) {
    const auto a = random_lownoise(2, 6, 77);
    const auto b = random_lownoise(2, 6, 77);
    const auto c = random_lownoise(2, 6, 78);
    EXPECT_EQ(a.noise_operators()[0], b.noise_operators()[0]);
    EXPECT_NE(a.noise_operators()[0], c.noise_operators()[0]);
}

TEST(ChannelProperty, TracePreservationAndPositivity) {
    Rng rng = task_rng(37, 0);
    for (const auto &ch : qubit_catalog()) {
        for (double eps : {0.0, 1e-4, 1e-3, 1e-2}) {
            const double bound = 10.0 * std::pow(eps, ch.truncation_order() + 1) + 1e-12;
            for (int trial = 0; trial < 100; ++trial) {
                const auto rho = DensityMatrix::random(2, rng);
                const ComplexMatrix raw = output_operator(ch, rho.matrix(), eps);
                EXPECT_LE(std::abs(raw.trace().real() - 1.0), bound) << ch.label();
                const auto out = apply(ch, rho, eps);
                EXPECT_LE(out.trace_defect, bound);
                EXPECT_GE(hermitian_eig(out.state.matrix()).values(0), -1e-10) << ch.label();
                if (eps == 0.0) {
                    EXPECT_LE((out.state.matrix() - rho.matrix()).norm(), 1e-12);
                }
            }
        }
    }
}

TEST(ChannelProperty, KrausMixingInvariance) {
    Rng rng = task_rng(41, 0);
    for (const auto &ch : qubit_catalog()) {
        const auto n = static_cast<Index>(ch.c_series().size());
        if (n == 0) {
            continue;
        }
        const auto mixed = mix_noise_family(ch, haar_unitary(n, rng));
        for (double eps : {1e-3, 1e-2}) {
            const auto rho = DensityMatrix::random(2, rng);
            EXPECT_LE((apply(ch, rho, eps).state.matrix() - apply(mixed, rho, eps).state.matrix())
                          .norm(),
                      1e-12)
                << ch.label();
        }
    }
}

} // namespace
