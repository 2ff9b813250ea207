#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "paraamp/amplifier.hpp"
#include "support/oracles.hpp"

using namespace paraamp;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const VaractorDesign kSto = default_design(materials::sto());
const VaractorDesign kKto = default_design(materials::kto());
const CircuitParams kCircuit{};

RateBudget sample_rates(double kint_mhz, double kext_mhz, double delta_mhz = 0.0) {
    RateBudget r;
    r.omega0 = to_rad_per_s(2e9);
    r.kappa_int = to_rad_per_s(kint_mhz * 1e6);
    r.kappa_ext = to_rad_per_s(kext_mhz * 1e6);
    r.kappa = r.kappa_int + r.kappa_ext;
    r.delta = to_rad_per_s(delta_mhz * 1e6);
    r.omega_p = 2.0 * (r.omega0 - r.delta);
    return r;
}

}  // namespace

TEST(RateBudget, AtOptima) {
    const auto s = rate_budget(9.3e-3, kSto, kCircuit);
    EXPECT_NEAR(to_hz(s.kappa_int), 3.4e6, 0.03 * 3.4e6);
    EXPECT_NEAR(to_hz(s.kappa_ext), 20.7e6, 0.03 * 20.7e6);
    EXPECT_NEAR(to_hz(s.kappa), 24e6, 0.03 * 24e6);
    EXPECT_NEAR(s.q_int(), 612.0, 0.03 * 612.0);
    EXPECT_DOUBLE_EQ(s.q_ext(), 100.0);

    const auto k = rate_budget(66e-3, kKto, kCircuit);
    EXPECT_NEAR(k.q_int(), 7.4e3, 0.03 * 7.4e3);
    EXPECT_NEAR(to_hz(k.kappa_ext), 48.9e6, 0.03 * 48.9e6);
    EXPECT_NEAR(to_hz(k.kappa), 49.5e6, 0.03 * 49.5e6);
}

TEST(RateBudget, Invariants) {
    const auto r = make_rates(1e10, 0.0, 50.0, 3e6);
    EXPECT_EQ(r.kappa_int, 0.0);
    EXPECT_DOUBLE_EQ(r.kappa_ext, 2e8);
    EXPECT_EQ(r.kappa, r.kappa_int + r.kappa_ext);
    EXPECT_DOUBLE_EQ(r.omega0 - 0.5 * r.omega_p, 3e6);
}

TEST(Reflection, LosslessPassiveIsUnitary) {
    const auto r = sample_rates(0.0, 20.0, 1.5);
    for (int i = -2000; i <= 2000; ++i) {
        const double off = i * 1e-3 * 10 * r.kappa;
        EXPECT_LT(std::abs(std::abs(reflection_at_offset(off, 0.0, r)) - 1.0), 1e-12) << off;
    }
}

TEST(Reflection, LossyPassiveIsPassive) {
    for (const auto& r : {sample_rates(3.4, 20.7), sample_rates(40.0, 20.0, 5.0)}) {
        for (int i = -2000; i <= 2000; ++i) {
            EXPECT_LE(std::abs(reflection_at_offset(i * 5e-3 * r.kappa, 0.0, r)), 1.0 + 1e-15);
        }
    }
}

TEST(Reflection, CentreValues) {
    const auto r = sample_rates(3.4, 20.7);
    EXPECT_NEAR(reflection_at_offset(0.0, 0.0, r).real(), (r.kappa_ext - r.kappa_int) / r.kappa, 1e-15);
    EXPECT_NEAR(reflection_at_offset(0.0, 0.0, r).imag(), 0.0, 1e-15);
    const double hk = 0.5 * r.kappa;
    for (double ratio : {0.1, 0.5, 0.9, 0.99}) {
        const double xi = ratio * hk;
        const double expect = r.kappa_ext * hk / (hk * hk - xi * xi) - 1.0;
        EXPECT_LT(rel(reflection_at_offset(0.0, xi, r).real(), expect), 1e-13);
    }
}

TEST(Reflection, PoleRaisesThresholdError) {
    const auto r = sample_rates(3.4, 20.7);
    try {
        reflection_at_offset(0.0, 0.5 * r.kappa, r);
        FAIL() << "expected ThresholdError";
    } catch (const ThresholdError& e) {
        EXPECT_DOUBLE_EQ(e.pump_ratio(), 1.0);
    }
    EXPECT_THROW(reflection(0.5 * r.omega_p, 0.5 * r.kappa, r), NumericalError);
}

TEST(Reflection, MatchesRealArithmeticOracle) {
    for (const auto& r : {sample_rates(3.4, 20.7), sample_rates(0.66, 48.9, 7.0)}) {
        for (double ratio : {0.0, 0.3, 0.9}) {
            const double xi = ratio * 0.5 * r.kappa;
            for (int i = -300; i <= 300; ++i) {
                const double off = i * 1e-2 * r.kappa;
                const auto a = reflection_at_offset(off, xi, r);
                const auto b = oracle::reflection(off, xi, r.kappa_int, r.kappa_ext, r.delta);
                EXPECT_LE(std::abs(a - b), 1e-12 * std::abs(b)) << off;
            }
        }
    }
}

TEST(Reflection, CentreGainIncreasesWithPump) {
    const auto r = sample_rates(3.4, 20.7);
    double prev = std::norm(reflection_at_offset(0.0, 0.0, r));
    for (int i = 1; i < 1000; ++i) {
        const double g = std::norm(reflection_at_offset(0.0, i * 1e-3 * 0.5 * r.kappa, r));
        EXPECT_GT(g, prev) << i;
        prev = g;
    }
}

TEST(GainProfile, SymmetricAtZeroDetuning) {
    const auto r = sample_rates(3.4, 20.7);
    const auto g = gain_profile(r, 0.9 * 0.5 * r.kappa, GridSpec{5.0, 401});
    ASSERT_EQ(g.reflection.size(), 401u);
    for (std::size_t i = 0; i < 401; ++i) {
        EXPECT_EQ(g.offsets[i], -g.offsets[400 - i]);
        EXPECT_LT(std::abs(std::abs(g.reflection[i]) - std::abs(g.reflection[400 - i])), 1e-12 * std::abs(g.reflection[i]));
        EXPECT_TRUE(std::isfinite(std::abs(g.reflection[i])));
    }
    EXPECT_EQ(g.offsets[200], 0.0);
}

TEST(GainProfile, PointwiseEqualsScalarEvaluation) {
    const auto r = sample_rates(3.4, 20.7, 2.0);
    const double xi = 0.7 * 0.5 * r.kappa;
    const auto g = gain_profile(r, xi, GridSpec{3.0, 101});
    for (std::size_t i = 0; i < g.offsets.size(); ++i) {
        const auto ref = oracle::reflection(g.frequencies[i] - 0.5 * r.omega_p, xi, r.kappa_int, r.kappa_ext, r.delta);
        EXPECT_LE(std::abs(g.reflection[i] - ref), 1e-12 * std::abs(ref));
    }
}

TEST(GainProfile, StoWithoutPumpIsFlatLoss) {
    const auto r = rate_budget(9.3e-3, kSto, kCircuit);
    const auto g = gain_profile(r, 0.0, GridSpec{});
    EXPECT_NEAR(g.peak_gain_db, 20.0 * std::log10((r.kappa_ext - r.kappa_int) / r.kappa), 1e-12);
    EXPECT_FALSE(g.bandwidth_3db.has_value());
    for (const auto& x : g.reflection) {
        EXPECT_LE(std::abs(x), 1.0);
    }
}

TEST(GainProfile, StoNearThresholdMatchesOracle) {
    const auto r = rate_budget(9.3e-3, kSto, kCircuit);
    const double xi = 0.9 * 0.5 * r.kappa;
    const auto g = gain_profile(r, xi, GridSpec{});
    const double oracle_gain = std::norm(oracle::reflection(0.0, xi, r.kappa_int, r.kappa_ext, 0.0));
    EXPECT_LT(rel(std::pow(10.0, g.peak_gain_db / 10.0), oracle_gain), 1e-9);
    EXPECT_NEAR(g.pump_ratio, 0.9, 1e-15);
    ASSERT_TRUE(g.bandwidth_3db.has_value());
    // Half-power points really sit at peak/2.
    const double half = 0.5 * oracle_gain;
    const double b = *g.bandwidth_3db / 2.0;
    EXPECT_LT(rel(std::norm(reflection_at_offset(b, xi, r)), half), 1e-9);
    EXPECT_LT(rel(std::norm(reflection_at_offset(-b, xi, r)), half), 1e-9);
}

TEST(GainProfile, BandwidthShrinksAsGainGrows) {
    // Gain-bandwidth trade-off of a degenerate amplifier.
    const auto r = sample_rates(0.0, 20.0);
    double prev = INFINITY;
    for (double ratio : {0.6, 0.8, 0.9, 0.95, 0.99}) {
        const auto g = gain_profile(r, ratio * 0.5 * r.kappa, GridSpec{});
        ASSERT_TRUE(g.bandwidth_3db.has_value());
        EXPECT_LT(*g.bandwidth_3db, prev);
        prev = *g.bandwidth_3db;
    }
}

TEST(GainProfile, ThresholdErrorCarriesRatio) {
    const auto r = sample_rates(3.4, 20.7);
    try {
        gain_profile(r, 1.1 * 0.5 * r.kappa, GridSpec{});
        FAIL() << "expected ThresholdError";
    } catch (const ThresholdError& e) {
        EXPECT_NEAR(e.pump_ratio(), 1.1, 1e-12);
    }
    // Detuning raises the threshold to sqrt((k/2)^2 + D^2).
    const auto d = sample_rates(3.4, 20.7, 10.0);
    EXPECT_NO_THROW(gain_profile(d, 1.1 * 0.5 * d.kappa, GridSpec{}));
}

TEST(GainProfile, FromOperatingPoint) {
    // 1 mV across the STO varactor already drives |xi| past kappa/2.
    EXPECT_THROW(gain_profile(9.3e-3, DriveSpec{}, kSto, kCircuit, GridSpec{}), ThresholdError);
    const DriveSpec soft{0.3e-3, 0.0};
    const auto g = gain_profile(9.3e-3, soft, kSto, kCircuit, GridSpec{});
    EXPECT_LT(rel(g.xi_mag, std::abs(three_wave_strength(9.3e-3, soft, kSto, kCircuit))), 1e-15);
    EXPECT_LT(g.pump_ratio, 1.0);
    EXPECT_THROW(gain_profile(g.rates, 0.0, GridSpec{1.0, 0}), ConfigError);
}

TEST(Compression, Examples) {
    const auto r = sample_rates(0.0, 20.0);
    const double k = to_rad_per_s(0.1);
    const auto c = compression_estimate(k, r, r.omega0);
    EXPECT_NEAR(c.n_photons, 2e8, 1e-6 * 2e8);
    EXPECT_NEAR(circulating_power_dbm(1e8, r.omega0, r.kappa, PowerConvention::Hertz), -63.749, 0.001);
    EXPECT_NEAR(c.p_circ_dbm_si - c.p_circ_dbm_hz, 20.0 * std::log10(kTwoPi), 1e-12);

    auto wide = r;
    wide.kappa *= 2.0;
    EXPECT_DOUBLE_EQ(compression_estimate(k, wide, r.omega0).n_photons, 2.0 * c.n_photons);
}

TEST(Compression, RejectsNonPositiveKerr) {
    const auto r = sample_rates(0.0, 20.0);
    EXPECT_THROW(compression_estimate(0.0, r, r.omega0), DomainError);
    EXPECT_THROW(compression_estimate(-1.0, r, r.omega0), DomainError);
}
