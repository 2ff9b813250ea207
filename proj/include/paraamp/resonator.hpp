#pragma once

// LC mode built from the varactor and a linear inductor, linearized around a
// DC charge bias q0 = q(v0). The energy expansion
//   U_c(q0 + dq) = U_c(q0) + U''/2 dq^2 + U'''/6 dq^3 + U''''/24 dq^4 + ...
// reduces, within the rotating-wave approximation, to a degenerate
// three-wave-mixing term xi (for a charge drive at 2 w0) and a Kerr term K_eff.
// The frequency renormalization w0 -> w0 + K_eff is not applied.

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "paraamp/constants.hpp"
#include "paraamp/errors.hpp"
#include "paraamp/varactor.hpp"

namespace paraamp {

struct CircuitParams {
    double inductance = 0.5e-9;  // H
    double q_ext = 100.0;        // external quality factor w0/kappa_ext
};

inline void validate(const CircuitParams& c) {
    if (!(std::isfinite(c.inductance) && c.inductance > 0.0)) {
        throw ConfigError("circuit inductance must be > 0");
    }
    if (!(std::isfinite(c.q_ext) && c.q_ext > 0.0)) {
        throw ConfigError("circuit q_ext must be > 0");
    }
}

/// Charge pump at 2 w0, given by its voltage amplitude across the capacitor.
struct DriveSpec {
    double v_ac = 1e-3;  // V
    double theta = 0.0;  // rad
};

inline void validate(const DriveSpec& d) {
    if (!(std::isfinite(d.v_ac) && d.v_ac >= 0.0)) {
        throw ConfigError("drive v_ac must be >= 0");
    }
    if (!std::isfinite(d.theta)) {
        throw ConfigError("drive theta must be finite");
    }
}

/// q_ac = v_ac * C(v0).
inline double drive_charge(const DriveSpec& drive, double capacitance) { return drive.v_ac * capacitance; }

struct ModeCoefficients {
    double omega0 = 0.0;   // rad/s
    double z0 = 0.0;       // Ohm
    double q_zpf = 0.0;    // C
    double phi_zpf = 0.0;  // Wb
    double v_zpf = 0.0;    // V
    std::complex<double> xi{};  // rad/s
    double k_eff = 0.0;         // rad/s
};

inline ModeCoefficients mode_from_capacitance(double c, const CircuitParams& circuit) {
    ModeCoefficients m;
    m.omega0 = 1.0 / std::sqrt(circuit.inductance * c);
    m.z0 = std::sqrt(circuit.inductance / c);
    m.q_zpf = std::sqrt(kHbar / (2.0 * m.z0));
    m.phi_zpf = std::sqrt(m.z0 * kHbar / 2.0);
    m.v_zpf = m.q_zpf / c;
    return m;
}

/// Linear part of the mode at bias v0 (xi and k_eff left at zero).
inline ModeCoefficients mode(double v0, const VaractorDesign& design, const CircuitParams& circuit) {
    return mode_from_capacitance(capacitance(v0, design), circuit);
}

namespace detail {

inline void require_agreement(double charge_form, double voltage_form, const char* what, double v0) {
    const double scale = std::max(std::abs(charge_form), std::abs(voltage_form));
    if (std::abs(charge_form - voltage_form) > 1e-6 * scale) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << " charge form " << charge_form << " and voltage form " << voltage_form
            << " disagree at v0=" << v0 << " V";
        throw ConsistencyError(msg.str());
    }
}

// 2 hbar, the common denominator of xi and K_eff.
inline constexpr double kTwoHbar = 2.0 * kHbar;

}  // namespace detail

/// Both evaluation routes for xi and K_eff at one bias.
struct NonlinearForms {
    double xi_charge = 0.0;    // -U''' q_ac q_zpf^2 / 2 hbar (theta = 0)
    double xi_voltage = 0.0;   // C' v_ac v_zpf^2 / 2 hbar   (theta = 0)
    double kerr_charge = 0.0;  // U'''' q_zpf^4 / 2 hbar
    double kerr_voltage = 0.0; // (-C'' + 3 C'^2/C) v_zpf^4 / 2 hbar
};

inline NonlinearForms nonlinear_forms(const CapacitanceDerivatives& cd, const ModeCoefficients& m, double v_ac) {
    const double c = cd.c;
    const double c3 = c * c * c;
    const double u3 = -cd.dc_dv / c3;
    const double u4 = (-cd.d2c_dv2 + 3.0 * cd.dc_dv * cd.dc_dv / c) / (c3 * c);
    const double q_ac = v_ac * c;
    const double qz2 = m.q_zpf * m.q_zpf;
    const double vz2 = m.v_zpf * m.v_zpf;

    NonlinearForms f;
    f.xi_charge = -u3 * q_ac * qz2 / detail::kTwoHbar;
    f.xi_voltage = cd.dc_dv * v_ac * vz2 / detail::kTwoHbar;
    f.kerr_charge = u4 * qz2 * qz2 / detail::kTwoHbar;
    f.kerr_voltage = (-cd.d2c_dv2 + 3.0 * cd.dc_dv * cd.dc_dv / c) * vz2 * vz2 / detail::kTwoHbar;
    return f;
}

/// Complex three-wave-mixing strength xi (rad/s) for a pump at 2 w0.
///
/// Evaluated in charge and voltage form; throws ConsistencyError when the two
/// differ by more than 1e-6 relative. Returns the voltage form.
inline std::complex<double> three_wave_strength(double v0, const DriveSpec& drive, const VaractorDesign& design,
                                                const CircuitParams& circuit) {
    const auto cd = capacitance_derivatives(v0, design);
    const auto m = mode_from_capacitance(cd.c, circuit);
    const auto f = nonlinear_forms(cd, m, drive.v_ac);
    detail::require_agreement(f.xi_charge, f.xi_voltage, "xi", v0);
    return f.xi_voltage * std::polar(1.0, -drive.theta);
}

/// Effective Kerr strength K_eff (rad/s), cross-checked like xi.
inline double kerr_strength(double v0, const VaractorDesign& design, const CircuitParams& circuit) {
    const auto cd = capacitance_derivatives(v0, design);
    const auto m = mode_from_capacitance(cd.c, circuit);
    const auto f = nonlinear_forms(cd, m, 0.0);
    detail::require_agreement(f.kerr_charge, f.kerr_voltage, "K_eff", v0);
    return f.kerr_voltage;
}

/// Linear mode plus xi and K_eff at bias v0.
inline ModeCoefficients operating_point(double v0, const DriveSpec& drive, const VaractorDesign& design,
                                        const CircuitParams& circuit) {
    const auto cd = capacitance_derivatives(v0, design);
    auto m = mode_from_capacitance(cd.c, circuit);
    const auto f = nonlinear_forms(cd, m, drive.v_ac);
    detail::require_agreement(f.xi_charge, f.xi_voltage, "xi", v0);
    detail::require_agreement(f.kerr_charge, f.kerr_voltage, "K_eff", v0);
    m.xi = f.xi_voltage * std::polar(1.0, -drive.theta);
    m.k_eff = f.kerr_voltage;
    return m;
}

/// (q_ac / 2 q_zpf)^2: a photon-number scale for the pump. One possible
/// convention among several; reported as a diagnostic only.
inline double pump_photons(double q_ac, double q_zpf) {
    const double r = q_ac / (2.0 * q_zpf);
    return r * r;
}

}  // namespace paraamp
