#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "paraamp/material.hpp"
#include "support/oracles.hpp"

using namespace paraamp;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Eta, TableValuesAtTenMillikelvin) {
    // T -> 0 limit theta_F/(4 T_c) - 1; the 10 mK correction is ~3e-8.
    EXPECT_NEAR(eta(materials::sto()), 175.0 / (4.0 * 42.0) - 1.0, 1e-7);
    EXPECT_NEAR(eta(materials::kto()), 170.0 / (4.0 * 32.5) - 1.0, 1e-7);
    // mpmath reference with the full finite-T expression.
    EXPECT_NEAR(eta(materials::sto()), 0.04166669387755074, 1e-15);
    EXPECT_NEAR(eta(materials::kto()), 0.30769234389140221, 1e-15);
}

TEST(Eta, VanishesAtBoundary) {
    auto m = materials::sto();
    m.debye_temp = 4.0 * m.curie_temp;
    m.temperature = 0.0;
    EXPECT_DOUBLE_EQ(eta(m), 0.0);
}

TEST(Eta, RejectsTemperatureOutsideModel) {
    auto m = materials::sto();
    m.temperature = m.debye_temp / 10.0;
    EXPECT_THROW(eta(m), DomainError);
    m.temperature = 0.099 * m.debye_temp;
    EXPECT_NO_THROW(eta(m));
}

TEST(NormalizedBias, Examples) {
    const auto sto = materials::sto();
    EXPECT_DOUBLE_EQ(normalized_bias(0.0, sto), 0.018);
    auto ideal = sto;
    ideal.inhomogeneity = 0.0;
    EXPECT_DOUBLE_EQ(normalized_bias(ideal.renorm_field, ideal), 1.0);
    // 9.3 mV across 200 nm.
    EXPECT_NEAR(normalized_bias(4.65e4, sto), 0.030074663458763928, 1e-15);
    EXPECT_EQ(normalized_bias(-4.65e4, sto), normalized_bias(4.65e4, sto));
}

TEST(Greens, ZeroBiasIsInverseEta) {
    for (double et : {0.01, 0.0416, 0.3, 2.0}) {
        EXPECT_NEAR(greens(0.0, et), 1.0 / et, 1e-14 / et);
        EXPECT_EQ(displacement(0.0, et), 0.0);
    }
}

TEST(Greens, MatchesCubicOracleAtTableInhomogeneity) {
    const auto sto = materials::sto();
    const auto kto = materials::kto();
    // Frozen from a 40-digit bisection of y^3 + 3 eta y = 2 lambda.
    EXPECT_NEAR(greens(0.018, eta(sto)), 11.552044262296845, 1e-12);
    EXPECT_NEAR(greens(0.020, eta(kto)), 3.2303650658596960, 1e-13);
    EXPECT_NEAR(displacement(0.018, eta(sto)), 0.21189165013373847, 1e-14);
    EXPECT_NEAR(displacement(0.2125, eta(kto)), 0.39410415772967975, 1e-14);
}

TEST(Greens, AgreesWithBisectionOracleOverRange) {
    auto gen = oracle::rng();
    std::uniform_real_distribution<double> lam_dist(0.0, 10.0);
    std::uniform_real_distribution<double> eta_dist(0.005, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double lam = lam_dist(gen);
        const double et = eta_dist(gen);
        const auto s = lgd_state(lam, et);
        const double y_ref = static_cast<double>(oracle::cubic_root(lam, et));
        EXPECT_LT(rel(s.displacement, y_ref), 1e-13) << "lambda=" << lam << " eta=" << et;
        EXPECT_LT(rel(s.greens, static_cast<double>(oracle::greens(lam, et))), 1e-13);
    }
}

TEST(Greens, IdentityAndCubicResidual) {
    auto gen = oracle::rng(7);
    std::uniform_real_distribution<double> lam_dist(0.0, 10.0);
    for (const auto& m : {materials::sto(), materials::kto()}) {
        const double et = eta(m);
        for (int i = 0; i < 2000; ++i) {
            // Include tiny and exactly-zero biases where cancellation would bite.
            const double lam = i == 0 ? 0.0 : (i < 200 ? std::pow(10.0, -12.0 + 0.05 * i) : lam_dist(gen));
            const auto s = lgd_state(lam, et);
            const double y = s.displacement;
            EXPECT_NEAR(s.greens * (y * y + et), 1.0, 1e-12) << lam;
            const double residual = y * y * y + 3.0 * et * y - 2.0 * lam;
            EXPECT_LE(std::abs(residual), 1e-12 * std::max(2.0 * lam, 1e-300)) << lam;
            EXPECT_GT(s.greens, 0.0);
            EXPECT_GE(y, 0.0);
        }
    }
}

TEST(Greens, LargeBiasDoesNotCancel) {
    // lambda >> eta^{3/2}: s - lambda underflows relative to lambda.
    const double et = 0.0416;
    for (double lam : {1e3, 1e6, 1e9}) {
        const auto s = lgd_state(lam, et);
        const double y_ref = static_cast<double>(oracle::cubic_root(lam, et));
        EXPECT_LT(rel(s.displacement, y_ref), 1e-13);
        EXPECT_NEAR(s.greens * (s.displacement * s.displacement + et), 1.0, 1e-12);
    }
}

TEST(Greens, RejectsInvalidArguments) {
    EXPECT_THROW(greens(-1e-3, 0.1), DomainError);
    EXPECT_THROW(greens(0.1, 0.0), DomainError);
    EXPECT_THROW(displacement(0.1, -0.1), DomainError);
}

TEST(Greens, DerivativeIdentitiesMatchFiniteDifferences) {
    const double et = eta(materials::sto());
    for (double lam : {0.005, 0.018, 0.05, 0.3, 1.0, 4.0}) {
        const auto s = lgd_state(lam, et);
        const double h = 1e-4 * lam;
        const auto p = lgd_state(lam + h, et);
        const auto m = lgd_state(lam - h, et);
        const auto p2 = lgd_state(lam + 2 * h, et);
        const auto m2 = lgd_state(lam - 2 * h, et);
        const double dy = (-p2.displacement + 8 * p.displacement - 8 * m.displacement + m2.displacement) / (12 * h);
        const double dg = (-p2.greens + 8 * p.greens - 8 * m.greens + m2.greens) / (12 * h);
        const double d2g = (-p2.greens + 16 * p.greens - 30 * s.greens + 16 * m.greens - m2.greens) / (12 * h * h);
        EXPECT_LT(rel(displacement_dlambda(s), dy), 1e-6) << lam;
        EXPECT_LT(rel(greens_dlambda(s), dg), 1e-6) << lam;
        EXPECT_LT(std::abs(greens_d2lambda(s) - d2g), 1e-5 * std::abs(greens_d2lambda(lgd_state(0.0, et)))) << lam;
    }
}

TEST(Permittivity, ZeroBiasValues) {
    EXPECT_NEAR(permittivity(0.0, materials::sto()), 24028.252065577438, 1e-8);
    EXPECT_NEAR(permittivity(0.0, materials::kto()), 4490.2074415449774, 1e-9);
}

TEST(Permittivity, ClosedFormWithoutInhomogeneity) {
    auto m = materials::kto();
    m.inhomogeneity = 0.0;
    EXPECT_NEAR(permittivity(0.0, m), m.eps00_rel / eta(m), 1e-12 * m.eps00_rel / eta(m));
}

TEST(Permittivity, AtStoOptimumField) {
    EXPECT_NEAR(permittivity(4.65e4, materials::sto()), 16638.223695704104, 1e-8);
}

TEST(Permittivity, EvenAndStrictlyDecreasing) {
    for (const auto& m : {materials::sto(), materials::kto()}) {
        double prev = permittivity(0.0, m);
        for (int i = 1; i <= 400; ++i) {
            const double e = i * 0.025 * kVoltsPerMicron;
            const double eps = permittivity(e, m);
            EXPECT_EQ(eps, permittivity(-e, m));
            EXPECT_LT(eps, prev) << e;
            prev = eps;
        }
    }
}

TEST(PermittivityDerivatives, ZeroAtOriginAndOdd) {
    for (const auto& m : {materials::sto(), materials::kto()}) {
        const auto at0 = permittivity_derivatives(0.0, m);
        EXPECT_EQ(at0.d1, 0.0);
        EXPECT_LT(at0.d2, 0.0);
        const auto p = permittivity_derivatives(3e4, m);
        const auto n = permittivity_derivatives(-3e4, m);
        EXPECT_EQ(p.d1, -n.d1);
        EXPECT_EQ(p.d2, n.d2);
    }
}

TEST(PermittivityDerivatives, IdealCrystalAtOrigin) {
    // lambda_s = 0: eps(E) = eps00 G(|E|/E_N), so eps''(0) = eps00 G''(0)/E_N^2
    // with G''(0) = -8/(9 eta^4).
    auto m = materials::sto();
    m.inhomogeneity = 0.0;
    const double et = eta(m);
    const auto d = permittivity_derivatives(0.0, m);
    const double expected = -m.eps00_rel * 8.0 / (9.0 * std::pow(et, 4)) / (m.renorm_field * m.renorm_field);
    EXPECT_LT(rel(d.d2, expected), 1e-12);
}

TEST(LossTangent, OptimumBiasQuality) {
    // Q_int = 1/tan(delta) at the optimal 3WM biases (9.3 mV and 66 mV on 200 nm).
    const auto sto = loss_tangent(9.3e-3 / 200e-9, materials::sto());
    const auto kto = loss_tangent(66e-3 / 200e-9, materials::kto());
    EXPECT_NEAR(sto.total, 1.64e-3, 0.02 * 1.64e-3);
    EXPECT_NEAR(1.0 / sto.total, 6.1e2, 0.03 * 6.1e2);
    EXPECT_NEAR(kto.total, 1.35e-4, 0.02 * 1.35e-4);
    EXPECT_NEAR(1.0 / kto.total, 7.4e3, 0.03 * 7.4e3);
    EXPECT_EQ(sto.defect, 0.0);
    EXPECT_DOUBLE_EQ(sto.total, sto.thermal + sto.piezo + sto.defect);
}

TEST(LossTangent, VanishesForIdealColdCrystal) {
    auto m = materials::sto();
    m.inhomogeneity = 0.0;
    m.temperature = 0.0;
    const auto t = loss_tangent(0.0, m);
    EXPECT_EQ(t.total, 0.0);
    EXPECT_EQ(t.thermal, 0.0);
    EXPECT_EQ(t.piezo, 0.0);
}

TEST(LossTangent, DefectTermNeedsCoefficient) {
    auto m = materials::kto();
    m.defect_density = 1e-3;
    EXPECT_THROW(loss_tangent(0.0, m), ConfigError);
    EXPECT_THROW(validate(m), ConfigError);
    m.a3 = 0.5;
    const auto t = loss_tangent(0.0, m);
    EXPECT_NEAR(t.defect, 0.5 * 1e-3 * greens(m.inhomogeneity, eta(m)), 1e-18);
}

TEST(DielectricResponse, InvariantsAndGammaSplit) {
    for (const auto& m : {materials::sto(), materials::kto()}) {
        for (double e : {0.0, 1e4, 1e5, 1e6, 5e6}) {
            const auto r = respond(e, m);
            EXPECT_GT(r.greens, 0.0);
            EXPECT_GT(r.eps_rel, 0.0);
            EXPECT_GE(r.loss.total, 0.0);
            EXPECT_GE(r.lambda, m.inhomogeneity);
            EXPECT_EQ(r.lambda == m.inhomogeneity, e == 0.0);
            EXPECT_NEAR(r.greens * (r.displacement * r.displacement + r.eta), 1.0, 1e-12);
            EXPECT_NEAR(r.gamma * r.greens, r.loss.total, 1e-15 + 1e-12 * r.loss.total);
        }
    }
}

TEST(Validate, RejectsBadParameters) {
    auto m = materials::sto();
    EXPECT_NO_THROW(validate(m));
    m.eps00_rel = 0.0;
    EXPECT_THROW(validate(m), ConfigError);
    m = materials::sto();
    m.inhomogeneity = -0.1;
    EXPECT_THROW(validate(m), ConfigError);
    m = materials::sto();
    m.renorm_field = std::nan("");
    EXPECT_THROW(validate(m), ConfigError);
}
