#pragma once

// Lumped parallel-plate varactor filled with a quantum-paraelectric film.
//
// The film sees a uniform field E = v/d, so the capacitor is fully described
// by C(v) = eps0 eps_r(v/d) A/d and its integral q(v). The stored energy as a
// function of charge needs v(q), which is obtained by inverting q(v).

#include <algorithm>
#include <cmath>
#include <sstream>

#include "paraamp/constants.hpp"
#include "paraamp/errors.hpp"
#include "paraamp/material.hpp"
#include "paraamp/numerics/quadrature.hpp"
#include "paraamp/numerics/richardson.hpp"
#include "paraamp/numerics/roots.hpp"

namespace paraamp {

struct VaractorDesign {
    double plate_area = 0.0;  // m^2
    double thickness = 0.0;   // m
    MaterialParams material;
    double v_max = 1.0;  // V, limit for charge/voltage conversions
};

/// A = (4 um)^2, d = 200 nm.
inline VaractorDesign default_design(const MaterialParams& material) {
    return VaractorDesign{16e-12, 200e-9, material, 1.0};
}

inline void validate(const VaractorDesign& d) {
    if (!(std::isfinite(d.plate_area) && d.plate_area > 0.0)) {
        throw ConfigError("varactor plate_area must be > 0");
    }
    if (!(std::isfinite(d.thickness) && d.thickness > 0.0)) {
        throw ConfigError("varactor thickness must be > 0");
    }
    if (!(std::isfinite(d.v_max) && d.v_max > 0.0)) {
        throw ConfigError("varactor v_max must be > 0");
    }
    validate(d.material);
}

/// eps0 * A / d, the capacitance per unit relative permittivity.
inline double geometric_capacitance(const VaractorDesign& d) {
    return kVacuumPermittivity * d.plate_area / d.thickness;
}

inline double capacitance(double v, const VaractorDesign& d) {
    return geometric_capacitance(d) * permittivity(v / d.thickness, d.material);
}

struct CapacitanceDerivatives {
    double c = 0.0;        // F
    double dc_dv = 0.0;    // F/V
    double d2c_dv2 = 0.0;  // F/V^2
};

/// C, C' and C'' from the analytic chain rule.
inline CapacitanceDerivatives capacitance_derivatives(double v, const VaractorDesign& d) {
    const auto eps = permittivity_derivatives(v / d.thickness, d.material);
    const double c0 = geometric_capacitance(d);
    return {c0 * eps.eps_r, c0 * eps.d1 / d.thickness, c0 * eps.d2 / (d.thickness * d.thickness)};
}

/// C' and C'' by Richardson-extrapolated central differences of C(v).
///
/// Independent of the analytic chain rule; used to cross-check it. C' uses a
/// step of 1e-5 * max(|v|, 1 mV). C'' needs a wider step, 1e-3 * max(|v|, 1 mV),
/// because the 1/h^2 roundoff term would otherwise reach ~1e-6.
inline CapacitanceDerivatives numeric_capacitance_derivatives(double v, const VaractorDesign& d) {
    const double scale = std::max(std::abs(v), 1e-3);
    auto c = [&](double x) { return capacitance(x, d); };
    return {capacitance(v, d), numerics::richardson_derivative<1>(c, v, 1e-5 * scale),
            numerics::richardson_derivative<2>(c, v, 3e-2 * scale)};
}

namespace detail {

inline void require_in_range(double v, const VaractorDesign& d) {
    if (!(std::abs(v) <= d.v_max)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "bias " << v << " V is outside the configured range |v| <= " << d.v_max << " V";
        throw DomainError(msg.str());
    }
}

}  // namespace detail

/// q(v) = (A eps0 / d) * integral_0^v eps_r(v'/d) dv'.
///
/// Integrated in the normalized field u = E/E_N over [0, |v|/(d E_N)] to a
/// relative tolerance of 1e-12; the sign is applied afterwards so the result
/// is exactly odd.
inline double charge(double v, const VaractorDesign& d) {
    detail::require_in_range(v, d);
    const auto& m = d.material;
    const double et = eta(m);
    const double u_end = std::abs(v) / (d.thickness * m.renorm_field);
    const auto integral = numerics::integrate(
        [&](double u) { return greens(std::hypot(m.inhomogeneity, u), et); }, 0.0, u_end, 1e-12);
    const double q = d.plate_area * kVacuumPermittivity * m.eps00_rel * m.renorm_field * integral.value;
    return std::copysign(q, v);
}

/// Inverse of `charge` on [-v_max, v_max] by bracketed root finding.
inline double voltage_from_charge(double q, const VaractorDesign& d) {
    if (q == 0.0) {
        return 0.0;
    }
    const double q_max = charge(d.v_max, d);
    if (!(std::abs(q) <= q_max)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "charge " << q << " C is outside the invertible range |q| <= " << q_max << " C";
        throw DomainError(msg.str());
    }
    // q(v) is odd and strictly increasing, so solve for |q| on [0, v_max].
    const double target = std::abs(q);
    const double v = numerics::bracketed_root([&](double x) { return charge(x, d) - target; }, 0.0, d.v_max, 50);
    return std::copysign(v, q);
}

/// Capacitor state and charge-derivatives of the stored energy at one bias.
struct ChargePoint {
    double voltage = 0.0;      // V
    double field = 0.0;        // V/m
    double charge = 0.0;       // C
    double capacitance = 0.0;  // F
    double dc_dv = 0.0;        // F/V
    double d2c_dv2 = 0.0;      // F/V^2
    double energy = 0.0;       // J, U_c(q0)
    double u2 = 0.0;           // J/C^2
    double u3 = 0.0;           // J/C^3
    double u4 = 0.0;           // J/C^4
};

/// U_c(q0) and its second to fourth charge derivatives at bias v0.
///
/// U_c(q0) = integral_0^q0 v dq = integral_0^v0 v C(v) dv. The higher
/// derivatives follow from dv/dq = 1/C:
///   U'' = 1/C,  U''' = -C'/C^3,  U'''' = (-C'' + 3 C'^2 / C) / C^4.
inline ChargePoint energy_and_derivatives(double v0, const VaractorDesign& d) {
    detail::require_in_range(v0, d);
    const auto cd = capacitance_derivatives(v0, d);
    ChargePoint p;
    p.voltage = v0;
    p.field = v0 / d.thickness;
    p.charge = charge(v0, d);
    p.capacitance = cd.c;
    p.dc_dv = cd.dc_dv;
    p.d2c_dv2 = cd.d2c_dv2;
    p.energy = numerics::integrate([&](double v) { return v * capacitance(v, d); }, 0.0, std::abs(v0), 1e-12).value;
    const double c = cd.c;
    const double c3 = c * c * c;
    p.u2 = 1.0 / c;
    p.u3 = -cd.dc_dv / c3;
    p.u4 = (-cd.d2c_dv2 + 3.0 * cd.dc_dv * cd.dc_dv / c) / (c3 * c);
    return p;
}

}  // namespace paraamp
