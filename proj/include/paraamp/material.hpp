#pragma once

// Field-dependent permittivity and loss of a quantum-paraelectric crystal
// (SrTiO3, KTaO3) in the modified Landau-Ginzburg-Devonshire description.
//
// The bias enters through the normalized field lambda; the dielectric
// response is carried by the real part of the Green's function G(lambda) and
// the residual ferroelectric displacement y(lambda), which is the positive
// root of y^3 + 3 eta y = 2 lambda. The two are tied by G = 1/(y^2 + eta).

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "paraamp/constants.hpp"
#include "paraamp/errors.hpp"

namespace paraamp {

/// Constants defining one quantum-paraelectric material. SI units throughout.
struct MaterialParams {
    std::string name = "custom";
    double eps00_rel = 0.0;       // eps00 / eps0
    double curie_temp = 0.0;      // K
    double debye_temp = 0.0;      // K
    double renorm_field = 0.0;    // V/m
    double inhomogeneity = 0.0;   // lambda_s
    double a1 = 0.0;              // multi-phonon loss coefficient
    double a2 = 0.0;              // residual piezoelectric loss coefficient
    std::optional<double> a3;     // charged-defect loss coefficient, unset when unknown
    double defect_density = 0.0;  // n_d
    double temperature = 0.0;     // K
};

namespace materials {

/// SrTiO3 at 10 mK.
inline MaterialParams sto() {
    MaterialParams m;
    m.name = "sto";
    m.eps00_rel = 2080.0;
    m.curie_temp = 42.0;
    m.debye_temp = 175.0;
    m.renorm_field = 1.93 * kVoltsPerMicron;
    m.inhomogeneity = 0.018;
    m.a1 = 2.45e-4;
    m.a2 = 2.45e-3;
    m.defect_density = 0.0;
    m.temperature = 1e-2;
    return m;
}

/// KTaO3 at 10 mK.
inline MaterialParams kto() {
    MaterialParams m;
    m.name = "kto";
    m.eps00_rel = 1390.0;
    m.curie_temp = 32.5;
    m.debye_temp = 170.0;
    m.renorm_field = 1.56 * kVoltsPerMicron;
    m.inhomogeneity = 0.020;
    m.a1 = 2.06e-4;
    m.a2 = 4e-4;
    m.defect_density = 0.0;
    m.temperature = 1e-2;
    return m;
}

}  // namespace materials

/// Throws ConfigError if any field violates the parameter invariants.
inline void validate(const MaterialParams& p) {
    auto require = [&](bool ok, const char* what) {
        if (!ok) {
            throw ConfigError(std::string("material '") + p.name + "': " + what);
        }
    };
    require(std::isfinite(p.eps00_rel) && p.eps00_rel > 0.0, "eps00_rel must be > 0");
    require(std::isfinite(p.curie_temp) && p.curie_temp > 0.0, "curie_temp must be > 0");
    require(std::isfinite(p.debye_temp) && p.debye_temp > 0.0, "debye_temp must be > 0");
    require(std::isfinite(p.renorm_field) && p.renorm_field > 0.0, "renorm_field must be > 0");
    require(std::isfinite(p.inhomogeneity) && p.inhomogeneity >= 0.0, "inhomogeneity must be >= 0");
    require(std::isfinite(p.a1) && p.a1 >= 0.0, "a1 must be >= 0");
    require(std::isfinite(p.a2) && p.a2 >= 0.0, "a2 must be >= 0");
    require(!p.a3 || (std::isfinite(*p.a3) && *p.a3 >= 0.0), "a3 must be >= 0");
    require(std::isfinite(p.defect_density) && p.defect_density >= 0.0, "defect_density must be >= 0");
    require(std::isfinite(p.temperature) && p.temperature >= 0.0, "temperature must be >= 0");
    require(p.defect_density == 0.0 || p.a3.has_value(), "defect_density > 0 requires a3 to be set");
}

/// Distance of the material from its ferroelectric instability,
/// eta = (theta_F/T_c) sqrt(1/16 + (T/theta_F)^2) - 1.
///
/// The expression is only valid well below the Debye temperature; a
/// temperature of theta_F/10 or more raises DomainError.
inline double eta(const MaterialParams& p) {
    if (!(p.temperature < p.debye_temp / 10.0)) {
        std::ostringstream msg;
        msg << "temperature " << p.temperature << " K is outside the low-temperature model (needs T < "
            << p.debye_temp / 10.0 << " K)";
        throw DomainError(msg.str());
    }
    const double t = p.temperature / p.debye_temp;
    return (p.debye_temp / p.curie_temp) * std::sqrt(1.0 / 16.0 + t * t) - 1.0;
}

/// lambda = sqrt(lambda_s^2 + (E/E_N)^2); even in E.
inline double normalized_bias(double field, const MaterialParams& p) {
    return std::hypot(p.inhomogeneity, field / p.renorm_field);
}

struct LgdState {
    double greens = 0.0;        // G(lambda)
    double displacement = 0.0;  // y(lambda)
};

/// G and y from the two cube roots a = cbrt(s + lambda), b = cbrt(s - lambda)
/// with s = sqrt(lambda^2 + eta^3).
///
/// s - lambda cancels badly for lambda >> eta^{3/2}, so b is always taken
/// from the equal quantity eta^3/(s + lambda). y = a - b is evaluated as
/// 2 lambda / (a^2 + ab + b^2) so that small biases keep full relative
/// precision.
inline LgdState lgd_state(double lambda, double eta) {
    if (!(eta > 0.0) || !(lambda >= 0.0)) {
        std::ostringstream msg;
        msg << "LGD response needs eta > 0 and lambda >= 0 (eta=" << eta << ", lambda=" << lambda << ")";
        throw DomainError(msg.str());
    }
    const double eta3 = eta * eta * eta;
    const double s = std::sqrt(lambda * lambda + eta3);
    const double a = std::cbrt(s + lambda);
    const double b = std::cbrt(eta3 / (s + lambda));
    LgdState out;
    out.greens = 1.0 / (a * a + b * b - eta);
    out.displacement = lambda == 0.0 ? 0.0 : 2.0 * lambda / (a * a + a * b + b * b);
    return out;
}

inline double greens(double lambda, double eta) { return lgd_state(lambda, eta).greens; }

inline double displacement(double lambda, double eta) { return lgd_state(lambda, eta).displacement; }

// Derivatives with respect to lambda, written in terms of G and y.
inline double displacement_dlambda(const LgdState& s) { return 2.0 * s.greens / 3.0; }

inline double greens_dlambda(const LgdState& s) {
    const double g = s.greens;
    return -4.0 / 3.0 * g * g * g * s.displacement;
}

inline double greens_d2lambda(const LgdState& s) {
    const double g = s.greens;
    const double g4 = g * g * g * g;
    return 16.0 / 3.0 * g4 * g * s.displacement * s.displacement - 8.0 / 9.0 * g4;
}

/// Relative permittivity eps_r = eps00_rel * G(lambda(E)).
inline double permittivity(double field, const MaterialParams& p) {
    return p.eps00_rel * greens(normalized_bias(field, p), eta(p));
}

/// eps_r and its first two derivatives with respect to the field.
struct PermittivityDerivatives {
    double eps_r = 0.0;
    double d1 = 0.0;  // 1/(V/m)
    double d2 = 0.0;  // 1/(V/m)^2
};

/// Analytic chain rule through dG/dlambda = -(4/3) G^3 y and
/// dlambda/dE = E / (E_N^2 lambda).
inline PermittivityDerivatives permittivity_derivatives(double field, const MaterialParams& p) {
    const double lambda = normalized_bias(field, p);
    const LgdState s = lgd_state(lambda, eta(p));
    const double en2 = p.renorm_field * p.renorm_field;

    double dl_de = 0.0;
    double dl_de_sq = 0.0;
    double d2l_de2 = 0.0;
    if (lambda > 0.0) {
        dl_de = field / (en2 * lambda);
        dl_de_sq = dl_de * dl_de;
        const double ls = p.inhomogeneity;
        d2l_de2 = ls * ls / (en2 * lambda * lambda * lambda);
    } else {
        // lambda_s = 0 and E = 0: lambda = |E|/E_N, and dG/dlambda vanishes at 0.
        dl_de_sq = 1.0 / en2;
    }

    PermittivityDerivatives out;
    out.eps_r = p.eps00_rel * s.greens;
    out.d1 = p.eps00_rel * greens_dlambda(s) * dl_de;
    out.d2 = p.eps00_rel * (greens_d2lambda(s) * dl_de_sq + greens_dlambda(s) * d2l_de2);
    return out;
}

struct LossTangent {
    double total = 0.0;
    double thermal = 0.0;  // tan(delta_1), multi-phonon
    double piezo = 0.0;    // tan(delta_2), residual piezoelectricity
    double defect = 0.0;   // tan(delta_3), charged defects
};

inline LossTangent loss_tangent(const LgdState& s, const MaterialParams& p) {
    if (p.defect_density > 0.0 && !p.a3) {
        throw ConfigError("material '" + p.name + "': defect_density > 0 requires a3 to be set");
    }
    const double g = s.greens;
    const double t = p.temperature / p.curie_temp;
    LossTangent out;
    out.thermal = p.a1 * t * t * g * std::sqrt(g);
    out.piezo = p.a2 * s.displacement * s.displacement * g;
    out.defect = p.a3 ? *p.a3 * p.defect_density * g : 0.0;
    out.total = out.thermal + out.piezo + out.defect;
    return out;
}

inline LossTangent loss_tangent(double field, const MaterialParams& p) {
    return loss_tangent(lgd_state(normalized_bias(field, p), eta(p)), p);
}

/// Full dielectric state at one bias field.
struct DielectricResponse {
    double bias_field = 0.0;  // V/m
    double lambda = 0.0;
    double eta = 0.0;
    double greens = 0.0;
    double displacement = 0.0;
    double eps_rel = 0.0;
    LossTangent loss;
    // Loss function split so that tan(delta_i) = gamma_i * G.
    double gamma = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
};

inline DielectricResponse respond(double field, const MaterialParams& p) {
    DielectricResponse r;
    r.bias_field = field;
    r.eta = eta(p);
    r.lambda = normalized_bias(field, p);
    const LgdState s = lgd_state(r.lambda, r.eta);
    r.greens = s.greens;
    r.displacement = s.displacement;
    r.eps_rel = p.eps00_rel * s.greens;
    r.loss = loss_tangent(s, p);
    r.gamma1 = r.loss.thermal / s.greens;
    r.gamma2 = r.loss.piezo / s.greens;
    r.gamma3 = r.loss.defect / s.greens;
    r.gamma = r.gamma1 + r.gamma2 + r.gamma3;
    return r;
}

}  // namespace paraamp
