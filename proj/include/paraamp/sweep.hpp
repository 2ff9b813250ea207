#pragma once

// Parametric studies over bias, field, plate separation and pump strength.
// Points are independent and evaluated through numerics::parallel_map, so
// rows always come back in sweep order regardless of thread count.

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "paraamp/amplifier.hpp"
#include "paraamp/errors.hpp"
#include "paraamp/material.hpp"
#include "paraamp/numerics/golden_section.hpp"
#include "paraamp/numerics/parallel.hpp"
#include "paraamp/resonator.hpp"
#include "paraamp/varactor.hpp"
#include "paraamp/version.hpp"

namespace paraamp {

enum class SweepVariable { BiasVoltage, BiasField, PlateSeparation, PumpRatio };
enum class Spacing { Linear, Log };

inline std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::BiasVoltage: return "bias_voltage";
        case SweepVariable::BiasField: return "bias_field";
        case SweepVariable::PlateSeparation: return "plate_separation";
        case SweepVariable::PumpRatio: return "pump_ratio";
    }
    return "unknown";
}

/// Range in SI units of the swept variable (V, V/m, m, or dimensionless).
struct SweepSpec {
    SweepVariable variable = SweepVariable::BiasVoltage;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 2;
    Spacing spacing = Spacing::Linear;
    bool hold_area_ratio = true;  // geometry sweeps keep A/d fixed
};

/// A single point needs min == max; otherwise min < max and count >= 2.
inline void validate(const SweepSpec& s) {
    std::ostringstream msg;
    if (s.count == 0) {
        msg << "sweep count must be >= 1";
    } else if (!std::isfinite(s.min) || !std::isfinite(s.max)) {
        msg << "sweep bounds must be finite";
    } else if (s.count == 1 && s.min != s.max) {
        msg << "a single-point sweep needs min == max";
    } else if (s.count >= 2 && !(s.min < s.max)) {
        msg << "sweep range is empty: min (" << s.min << ") must be < max (" << s.max << ")";
    } else if (s.spacing == Spacing::Log && !(s.min > 0.0)) {
        msg << "log spacing needs min > 0";
    } else {
        return;
    }
    throw ConfigError(msg.str());
}

inline std::vector<double> sample_points(const SweepSpec& s) {
    validate(s);
    std::vector<double> x(s.count);
    if (s.count == 1) {
        x[0] = s.min;
        return x;
    }
    const double n = static_cast<double>(s.count - 1);
    for (std::size_t i = 0; i < s.count; ++i) {
        const double t = static_cast<double>(i) / n;
        x[i] = s.spacing == Spacing::Linear ? s.min + (s.max - s.min) * t
                                            : std::exp(std::log(s.min) + (std::log(s.max) - std::log(s.min)) * t);
    }
    x.front() = s.min;
    x.back() = s.max;
    return x;
}

/// One sweep point. Quantities a given sweep does not compute stay NaN.
struct SweepRow {
    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

    double x = kUnset;            // swept value, SI
    double eps_r = kUnset;
    double tan_delta = kUnset;
    double tan_delta_1 = kUnset;
    double tan_delta_2 = kUnset;
    double tan_delta_3 = kUnset;
    double capacitance = kUnset;  // F
    double omega0 = kUnset;       // rad/s
    double xi_abs = kUnset;       // rad/s
    double k_eff = kUnset;        // rad/s
    double kappa_int = kUnset;    // rad/s
    double kappa_ext = kUnset;    // rad/s
    double peak_gain_db = kUnset; // gain at wp/2; NaN at/above threshold
    double v0_opt = kUnset;       // V, bias of maximal |xi| (geometry sweeps)
};

struct SweepResult {
    SweepVariable variable = SweepVariable::BiasVoltage;
    std::vector<SweepRow> rows;
    std::string config_snapshot;
    std::string version = std::string(kVersion);
};

namespace detail {

// Rethrows a library error with the offending sweep value appended.
template <typename F>
auto annotate(std::string_view label, double value, F&& f) -> decltype(f()) {
    auto where = [&](const std::exception& e) {
        std::ostringstream msg;
        msg.precision(17);
        msg << e.what() << " (at " << label << "=" << value << ")";
        return msg.str();
    };
    try {
        return f();
    } catch (const ThresholdError& e) {
        throw ThresholdError(where(e), e.pump_ratio());
    } catch (const ConsistencyError& e) {
        throw ConsistencyError(where(e));
    } catch (const NumericalError& e) {
        throw NumericalError(where(e));
    } catch (const DomainError& e) {
        throw DomainError(where(e));
    }
}

inline void require_variable(const SweepSpec& s, SweepVariable expected) {
    if (s.variable != expected) {
        throw ConfigError("sweep variable must be " + std::string(to_string(expected)) + ", got " +
                          std::string(to_string(s.variable)));
    }
}

}  // namespace detail

/// w0, |xi|, K_eff, rates and centre gain as functions of the DC bias.
inline SweepResult bias_sweep(const SweepSpec& spec, const VaractorDesign& design, const CircuitParams& circuit,
                              const DriveSpec& drive, std::size_t threads = numerics::default_thread_count()) {
    detail::require_variable(spec, SweepVariable::BiasVoltage);
    const auto xs = sample_points(spec);
    SweepResult out;
    out.variable = spec.variable;
    out.rows = numerics::parallel_map<SweepRow>(
        xs.size(),
        [&](std::size_t i) {
            const double v0 = xs[i];
            return detail::annotate("v0_V", v0, [&] {
                SweepRow r;
                r.x = v0;
                const auto op = operating_point(v0, drive, design, circuit);
                const auto resp = respond(v0 / design.thickness, design.material);
                const auto rates = make_rates(op.omega0, resp.loss.total, circuit.q_ext);
                r.eps_r = resp.eps_rel;
                r.tan_delta = resp.loss.total;
                r.tan_delta_1 = resp.loss.thermal;
                r.tan_delta_2 = resp.loss.piezo;
                r.tan_delta_3 = resp.loss.defect;
                r.capacitance = capacitance(v0, design);
                r.omega0 = op.omega0;
                r.xi_abs = std::abs(op.xi);
                r.k_eff = op.k_eff;
                r.kappa_int = rates.kappa_int;
                r.kappa_ext = rates.kappa_ext;
                if (pump_ratio(r.xi_abs, rates) < 1.0) {
                    r.peak_gain_db = power_gain_db(reflection_at_offset(0.0, r.xi_abs, rates));
                }
                return r;
            });
        },
        threads);
    return out;
}

struct Optimum3wm {
    double v0 = 0.0;      // V
    double xi_abs = 0.0;  // rad/s
};

/// Bias in [v_lo, v_hi] maximizing |xi(v0)|.
///
/// A uniform scan of `grid_points` (>= 200) locates the best sample, then a
/// golden-section search on its two neighbouring intervals refines it to
/// 1 uV. Throws NumericalError if |xi| vanishes on the whole scan.
inline Optimum3wm maximize_3wm(const VaractorDesign& design, const CircuitParams& circuit, const DriveSpec& drive,
                               double v_lo, double v_hi, std::size_t grid_points = 401) {
    if (!(v_lo < v_hi)) {
        throw ConfigError("3WM search range is empty");
    }
    if (grid_points < 200) {
        throw ConfigError("3WM search needs at least 200 grid points");
    }
    auto objective = [&](double v) { return std::abs(three_wave_strength(v, drive, design, circuit)); };

    std::size_t best = 0;
    double best_val = -1.0;
    const double step = (v_hi - v_lo) / static_cast<double>(grid_points - 1);
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double v = i + 1 == grid_points ? v_hi : v_lo + step * static_cast<double>(i);
        const double val = objective(v);
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    if (!(best_val > 0.0)) {
        throw NumericalError("3WM objective is identically zero on the search range (no bias-induced asymmetry)");
    }
    const double a = best == 0 ? v_lo : v_lo + step * static_cast<double>(best - 1);
    const double b = best + 1 >= grid_points ? v_hi : v_lo + step * static_cast<double>(best + 1);
    const auto ext = numerics::golden_section_maximize(objective, a, b, 1e-6);
    if (ext.value >= best_val) {
        return {ext.x, ext.value};
    }
    return {v_lo + step * static_cast<double>(best), best_val};
}

/// Per plate separation: re-optimized |xi| and K_eff at zero bias.
///
/// With `hold_area_ratio` the plate area scales with d so A/d stays at the
/// base design's value. The bias search covers fields up to `max_field`
/// (V/m), i.e. v0 in [0, max_field * d].
inline SweepResult geometry_sweep(const SweepSpec& spec, const VaractorDesign& base, const CircuitParams& circuit,
                                  const DriveSpec& drive, double max_field,
                                  std::size_t threads = numerics::default_thread_count()) {
    detail::require_variable(spec, SweepVariable::PlateSeparation);
    if (!(spec.min > 0.0)) {
        throw ConfigError("plate separation must be > 0");
    }
    if (!(max_field > 0.0)) {
        throw ConfigError("geometry sweep needs a positive maximum search field");
    }
    const auto xs = sample_points(spec);
    const double area_ratio = base.plate_area / base.thickness;
    SweepResult out;
    out.variable = spec.variable;
    out.rows = numerics::parallel_map<SweepRow>(
        xs.size(),
        [&](std::size_t i) {
            const double d = xs[i];
            return detail::annotate("d_m", d, [&] {
                VaractorDesign design = base;
                design.thickness = d;
                if (spec.hold_area_ratio) {
                    design.plate_area = area_ratio * d;
                }
                design.v_max = base.v_max * d / base.thickness;
                const auto opt = maximize_3wm(design, circuit, drive, 0.0, max_field * d);
                SweepRow r;
                r.x = d;
                r.v0_opt = opt.v0;
                r.xi_abs = opt.xi_abs;
                r.k_eff = kerr_strength(0.0, design, circuit);
                r.capacitance = capacitance(0.0, design);
                r.omega0 = mode(opt.v0, design, circuit).omega0;
                return r;
            });
        },
        threads);
    return out;
}

/// eps_r and the loss-tangent breakdown versus bias field.
inline SweepResult dielectric_sweep(const SweepSpec& spec, const MaterialParams& material,
                                    std::size_t threads = numerics::default_thread_count()) {
    detail::require_variable(spec, SweepVariable::BiasField);
    validate(material);
    if (spec.min < 0.0 || spec.max > 10.0 * material.renorm_field) {
        std::ostringstream msg;
        msg << "field range must lie within [0, 10 E_N] = [0, " << 10.0 * material.renorm_field << "] V/m";
        throw ConfigError(msg.str());
    }
    const auto xs = sample_points(spec);
    SweepResult out;
    out.variable = spec.variable;
    out.rows = numerics::parallel_map<SweepRow>(
        xs.size(),
        [&](std::size_t i) {
            return detail::annotate("E_V_per_m", xs[i], [&] {
                const auto resp = respond(xs[i], material);
                SweepRow r;
                r.x = xs[i];
                r.eps_r = resp.eps_rel;
                r.tan_delta = resp.loss.total;
                r.tan_delta_1 = resp.loss.thermal;
                r.tan_delta_2 = resp.loss.piezo;
                r.tan_delta_3 = resp.loss.defect;
                return r;
            });
        },
        threads);
    return out;
}

/// Centre gain versus |xi|/(kappa/2) for a fixed loss budget.
inline SweepResult pump_ratio_sweep(const SweepSpec& spec, const RateBudget& rates,
                                    std::size_t threads = numerics::default_thread_count()) {
    detail::require_variable(spec, SweepVariable::PumpRatio);
    if (spec.min < 0.0) {
        throw ConfigError("pump ratio must be >= 0");
    }
    const auto xs = sample_points(spec);
    SweepResult out;
    out.variable = spec.variable;
    out.rows = numerics::parallel_map<SweepRow>(
        xs.size(),
        [&](std::size_t i) {
            return detail::annotate("pump_ratio", xs[i], [&] {
                const double xi = xs[i] * 0.5 * rates.kappa;
                const auto g = gain_profile(rates, xi, GridSpec{1.0, 1});
                SweepRow r;
                r.x = xs[i];
                r.xi_abs = xi;
                r.omega0 = rates.omega0;
                r.kappa_int = rates.kappa_int;
                r.kappa_ext = rates.kappa_ext;
                r.peak_gain_db = g.peak_gain_db;
                return r;
            });
        },
        threads);
    return out;
}

}  // namespace paraamp
