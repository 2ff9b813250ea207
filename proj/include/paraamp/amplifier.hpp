#pragma once

// Single-port degenerate parametric amplifier in input-output theory.
//
//            k_ext k/2 + i k_ext (D + w - wp/2)
//   R(w) = -------------------------------------- - 1
//          D^2 + (k/2 + i (w - wp/2))^2 - |xi|^2
//
// with D = w0 - wp/2 the half-pump detuning. Losses come from the dielectric
// (k_int = w0 tan(delta)) and the coupler (k_ext = w0 / Q_ext).

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <sstream>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "paraamp/constants.hpp"
#include "paraamp/errors.hpp"
#include "paraamp/resonator.hpp"

namespace paraamp {

struct RateBudget {
    double omega0 = 0.0;      // rad/s
    double kappa_int = 0.0;   // rad/s
    double kappa_ext = 0.0;   // rad/s
    double kappa = 0.0;       // rad/s
    double delta = 0.0;       // rad/s, w0 - wp/2
    double omega_p = 0.0;     // rad/s

    [[nodiscard]] double q_int() const { return omega0 / kappa_int; }
    [[nodiscard]] double q_ext() const { return omega0 / kappa_ext; }
};

inline RateBudget make_rates(double omega0, double tan_delta, double q_ext, double detuning = 0.0) {
    RateBudget r;
    r.omega0 = omega0;
    r.kappa_int = omega0 * tan_delta;
    r.kappa_ext = omega0 / q_ext;
    r.kappa = r.kappa_int + r.kappa_ext;
    r.delta = detuning;
    r.omega_p = 2.0 * (omega0 - detuning);
    return r;
}

/// Loss budget of the resonator biased at v0; `detuning` is w0 - wp/2.
inline RateBudget rate_budget(double v0, const VaractorDesign& design, const CircuitParams& circuit,
                              double detuning = 0.0) {
    const double omega0 = mode(v0, design, circuit).omega0;
    const double tan_delta = loss_tangent(v0 / design.thickness, design.material).total;
    return make_rates(omega0, tan_delta, circuit.q_ext, detuning);
}

/// |xi| / (kappa/2).
inline double pump_ratio(double xi_mag, const RateBudget& rates) { return xi_mag / (0.5 * rates.kappa); }

/// R as a function of the signal offset from half the pump, w - wp/2.
inline std::complex<double> reflection_at_offset(double offset, double xi_mag, const RateBudget& rates) {
    using namespace std::complex_literals;
    const double half_kappa = 0.5 * rates.kappa;
    const std::complex<double> num = rates.kappa_ext * half_kappa + 1i * rates.kappa_ext * (rates.delta + offset);
    const std::complex<double> loss = half_kappa + 1i * offset;
    const std::complex<double> den = rates.delta * rates.delta + loss * loss - xi_mag * xi_mag;
    if (std::abs(den) <= 1e-14 * half_kappa * half_kappa) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "reflection pole at the parametric threshold: |xi|/(kappa/2)=" << pump_ratio(xi_mag, rates)
            << ", offset=" << offset << " rad/s";
        throw ThresholdError(msg.str(), pump_ratio(xi_mag, rates));
    }
    return num / den - 1.0;
}

inline std::complex<double> reflection(double omega, double xi_mag, const RateBudget& rates) {
    return reflection_at_offset(omega - 0.5 * rates.omega_p, xi_mag, rates);
}

inline double power_gain_db(std::complex<double> r) { return 10.0 * std::log10(std::norm(r)); }

/// Symmetric frequency grid around wp/2, `span_linewidths` * kappa on each side.
struct GridSpec {
    double span_linewidths = 5.0;
    std::size_t count = 401;
};

struct GainProfile {
    std::vector<double> offsets;      // rad/s, w - wp/2
    std::vector<double> frequencies;  // rad/s
    std::vector<std::complex<double>> reflection;
    double peak_gain_db = 0.0;                // |R|^2 at w = wp/2, dB
    std::optional<double> bandwidth_3db;      // rad/s, full width at peak/2
    double pump_ratio = 0.0;                  // |xi| / (kappa/2)
    double xi_mag = 0.0;                      // rad/s
    RateBudget rates;
};

namespace detail {

// Offset > 0 on one side of wp/2 (sign = +1 or -1) where |R|^2 falls to `level`.
inline std::optional<double> half_power_offset(double xi_mag, const RateBudget& rates, double level, double sign) {
    auto excess = [&](double x) { return std::norm(reflection_at_offset(sign * x, xi_mag, rates)) - level; };
    double hi = rates.kappa;
    for (int i = 0; i < 60 && excess(hi) > 0.0; ++i) {
        hi *= 2.0;
    }
    if (excess(hi) > 0.0) {
        return std::nullopt;
    }
    const auto tol = [&](double a, double b) { return std::abs(b - a) <= 1e-13 * std::abs(b); };
    const auto [a, b] = boost::math::tools::bisect(excess, 0.0, hi, tol);
    return 0.5 * (a + b);
}

}  // namespace detail

/// Reflection profile for a given pump strength |xi|.
///
/// Requires the amplifier to be below threshold, |xi|^2 < (kappa/2)^2 + D^2;
/// otherwise ThresholdError is raised carrying |xi|/(kappa/2). The 3-dB
/// bandwidth is reported only when the centre gain exceeds 3 dB, so that the
/// half-power level lies above the unit off-resonance reflection.
inline GainProfile gain_profile(const RateBudget& rates, double xi_mag, const GridSpec& grid) {
    if (grid.count < 1 || !(grid.span_linewidths > 0.0)) {
        throw ConfigError("gain grid needs count >= 1 and span_linewidths > 0");
    }
    const double ratio = pump_ratio(xi_mag, rates);
    const double half_kappa = 0.5 * rates.kappa;
    if (xi_mag * xi_mag >= half_kappa * half_kappa + rates.delta * rates.delta) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "pump at/above parametric threshold: |xi|/(kappa/2) = " << ratio;
        throw ThresholdError(msg.str(), ratio);
    }

    GainProfile g;
    g.rates = rates;
    g.xi_mag = xi_mag;
    g.pump_ratio = ratio;
    g.offsets.resize(grid.count);
    g.frequencies.resize(grid.count);
    g.reflection.resize(grid.count);
    const double half_span = grid.span_linewidths * rates.kappa;
    const double centre = 0.5 * rates.omega_p;
    for (std::size_t i = 0; i < grid.count; ++i) {
        // Mirror-exact offsets: sample i and count-1-i differ only in sign.
        const double t = grid.count == 1 ? 0.0
                                         : (2.0 * static_cast<double>(i) - static_cast<double>(grid.count - 1)) /
                                               static_cast<double>(grid.count - 1);
        const double offset = half_span * t;
        g.offsets[i] = offset;
        g.frequencies[i] = centre + offset;
        g.reflection[i] = reflection_at_offset(offset, xi_mag, rates);
    }

    const double peak = std::norm(reflection_at_offset(0.0, xi_mag, rates));
    g.peak_gain_db = 10.0 * std::log10(peak);
    if (peak > 2.0) {
        const auto up = detail::half_power_offset(xi_mag, rates, 0.5 * peak, +1.0);
        const auto down = detail::half_power_offset(xi_mag, rates, 0.5 * peak, -1.0);
        if (up && down) {
            g.bandwidth_3db = *up + *down;
        }
    }
    return g;
}

/// Profile at bias v0 with the pump given by `drive`.
inline GainProfile gain_profile(double v0, const DriveSpec& drive, const VaractorDesign& design,
                                const CircuitParams& circuit, const GridSpec& grid, double detuning = 0.0) {
    const double xi_mag = std::abs(three_wave_strength(v0, drive, design, circuit));
    return gain_profile(rate_budget(v0, design, circuit, detuning), xi_mag, grid);
}

enum class PowerConvention {
    Hertz,  // N hbar (w0/2pi) (kappa/2pi)
    Si,     // N hbar w0 kappa
};

/// Circulating power in dBm for N photons in a mode of frequency w0 and linewidth kappa.
inline double circulating_power_dbm(double n_photons, double omega0, double kappa, PowerConvention conv) {
    const double watts = conv == PowerConvention::Hertz ? n_photons * kHbar * to_hz(omega0) * to_hz(kappa)
                                                        : n_photons * kHbar * omega0 * kappa;
    return 10.0 * std::log10(watts / 1e-3);
}

struct CompressionEstimate {
    double n_photons = 0.0;
    double p_circ_dbm_hz = 0.0;
    double p_circ_dbm_si = 0.0;
};

/// Photon number N = kappa / K_eff at which the Kerr shift reaches one
/// linewidth, and the matching circulating power in both conventions.
inline CompressionEstimate compression_estimate(double k_eff, const RateBudget& rates, double omega0) {
    if (!(k_eff > 0.0)) {
        std::ostringstream msg;
        msg << "compression estimate needs K_eff > 0 (got " << k_eff << " rad/s)";
        throw DomainError(msg.str());
    }
    CompressionEstimate c;
    c.n_photons = rates.kappa / k_eff;
    c.p_circ_dbm_hz = circulating_power_dbm(c.n_photons, omega0, rates.kappa, PowerConvention::Hertz);
    c.p_circ_dbm_si = circulating_power_dbm(c.n_photons, omega0, rates.kappa, PowerConvention::Si);
    return c;
}

}  // namespace paraamp
