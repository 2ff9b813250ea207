#pragma once

// Tool configuration: a YAML document with one level of sections and
// unit-suffixed keys, e.g.
//
//   material:
//     name: sto
//   geometry:
//     area_um2: 16
//     thickness_nm: 200
//
// Unknown sections or keys are rejected with their line/column.

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "paraamp/amplifier.hpp"
#include "paraamp/errors.hpp"
#include "paraamp/material.hpp"
#include "paraamp/resonator.hpp"
#include "paraamp/sweep.hpp"
#include "paraamp/varactor.hpp"

namespace paraamp::cli {

struct MaterialSection {
    std::string name = "sto";
    // Overrides on top of the named base set; unset fields keep the base value.
    std::optional<double> eps00_rel;
    std::optional<double> curie_temp_k;
    std::optional<double> debye_temp_k;
    std::optional<double> renorm_field_v_per_um;
    std::optional<double> inhomogeneity;
    std::optional<double> a1;
    std::optional<double> a2;
    std::optional<double> a3;
    std::optional<double> defect_density;
    std::optional<double> temperature_k;
};

struct GeometrySection {
    double area_um2 = 16.0;
    double thickness_nm = 200.0;
    double v_max_mv = 1000.0;
};

struct CircuitSection {
    double inductance_nh = 0.5;
    double q_ext = 100.0;
};

struct DriveSection {
    double v_ac_mv = 1.0;
    double theta_rad = 0.0;
};

struct SweepSection {
    std::string variable = "bias_voltage_mv";
    double min = 0.0;
    double max = 250.0;
    std::size_t count = 251;
    std::string spacing = "linear";
};

struct SearchSection {
    double v_min_mv = 0.0;
    double v_max_mv = 250.0;
    std::size_t grid_points = 401;
};

struct GainSection {
    std::vector<double> xi_ratios{0.0, 0.5, 0.7, 0.9};
    double span_linewidths = 3.0;
    std::size_t count = 401;
    double detuning_mhz = 0.0;
};

struct OutputSection {
    std::string path = ".";
    std::string format = "csv";
};

struct ToolConfig {
    MaterialSection material;
    GeometrySection geometry;
    CircuitSection circuit;
    DriveSection drive;
    std::optional<SweepSection> sweep;
    SearchSection search;
    GainSection gain;
    OutputSection output;
};

namespace detail {

inline std::string where(const YAML::Node& node, std::string_view origin) {
    std::ostringstream s;
    s << origin;
    const auto mark = node.Mark();
    if (!mark.is_null()) {
        s << ":" << mark.line + 1 << ":" << mark.column + 1;
    }
    return s.str();
}

template <typename T>
T scalar(const YAML::Node& node, std::string_view section, std::string_view key, std::string_view origin) {
    if (!node.IsScalar()) {
        throw ConfigError(where(node, origin) + ": " + std::string(section) + "." + std::string(key) +
                          " must be a scalar");
    }
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(where(node, origin) + ": " + std::string(section) + "." + std::string(key) +
                          " has invalid value '" + node.Scalar() + "'");
    }
}

// Applies every key of one section through `set(key, node)`, which returns
// false for keys it does not know.
template <typename Setter>
void read_section(const YAML::Node& node, std::string_view section, std::string_view origin, Setter&& set) {
    if (!node.IsMap()) {
        throw ConfigError(where(node, origin) + ": section '" + std::string(section) + "' must be a mapping");
    }
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!set(key, kv.second)) {
            throw ConfigError(where(kv.first, origin) + ": unknown key '" + key + "' in section '" +
                              std::string(section) + "'");
        }
    }
}

}  // namespace detail

/// Parses `doc` into `cfg`, overwriting only the keys present.
inline void apply_yaml(ToolConfig& cfg, const YAML::Node& doc, std::string_view origin) {
    using detail::scalar;
    if (!doc || doc.IsNull()) {
        return;
    }
    if (!doc.IsMap()) {
        throw ConfigError(detail::where(doc, origin) + ": top level must be a mapping of sections");
    }
    for (const auto& sec : doc) {
        const auto name = sec.first.as<std::string>();
        const YAML::Node& body = sec.second;
        if (name == "material") {
            auto& m = cfg.material;
            detail::read_section(body, name, origin, [&](const std::string& k, const YAML::Node& v) {
                auto opt = [&](std::optional<double>& field) { field = scalar<double>(v, name, k, origin); };
                if (k == "name") m.name = scalar<std::string>(v, name, k, origin);
                else if (k == "eps00_rel") opt(m.eps00_rel);
                else if (k == "curie_temp_k") opt(m.curie_temp_k);
                else if (k == "debye_temp_k") opt(m.debye_temp_k);
                else if (k == "renorm_field_v_per_um") opt(m.renorm_field_v_per_um);
                else if (k == "inhomogeneity") opt(m.inhomogeneity);
                else if (k == "a1") opt(m.a1);
                else if (k == "a2") opt(m.a2);
                else if (k == "a3") opt(m.a3);
                else if (k == "defect_density") opt(m.defect_density);
                else if (k == "temperature_k") opt(m.temperature_k);
                else return false;
                return true;
            });
        } else if (name == "geometry") {
            auto& g = cfg.geometry;
            detail::read_section(body, name, origin, [&](const std::string& k, const YAML::Node& v) {
                if (k == "area_um2") g.area_um2 = scalar<double>(v, name, k, origin);
                else if (k == "thickness_nm") g.thickness_nm = scalar<double>(v, name, k, origin);
                else if (k == "v_max_mv") g.v_max_mv = scalar<double>(v, name, k, origin);
                else return false;
                return true;
            });
        } else if (name == "circuit") {
            auto& c = cfg.circuit;
            detail::read_section(body, name, origin, [&](const std::string& k, const YAML::Node& v) {
                if (k == "inductance_nh") c.inductance_nh = scalar<double>(v, name, k, origin);
                else if (k == "q_ext") c.q_ext = scalar<double>(v, name, k, origin);
                else return false;
                return true;
            });
        } else if (name == "drive") {
            auto& d = cfg.drive;
            detail::read_section(body, name, origin, [&](const std::string& k, const YAML::Node& v) {
                if (k == "v_ac_mv") d.v_ac_mv = scalar<double>(v, name, k, origin);
                else if (k == "theta_rad") d.theta_rad = scalar<double>(v, name, k, origin);
                else return false;
                return true;
            });
        } else if (name == "sweep") {
            if (!cfg.sweep) {
                cfg.sweep.emplace();
            }
            auto& s = *cfg.sweep;
            detail::read_section(body, name, origin, [&](const std::string& k, const YAML::Node& v) {
                if (k == "variable") s.variable = scalar<std::string>(v, name, k, origin);
                else if (k == "min") s.min = scalar<double>(v, name, k, origin);
                else if (k == "max") s.max = scalar<double>(v, name, k, origin);
                else if (k == "count") s.count = scalar<std::size_t>(v, name, k, origin);
                else if (k == "spacing") s.spacing = scalar<std::string>(v, name, k, origin);
                else return false;
                return true;
            });
        } else if (name == "search") {
            auto& s = cfg.search;
            detail::read_section(body, name, origin, [&](const std::string& k, const YAML::Node& v) {
                if (k == "v_min_mv") s.v_min_mv = scalar<double>(v, name, k, origin);
                else if (k == "v_max_mv") s.v_max_mv = scalar<double>(v, name, k, origin);
                else if (k == "grid_points") s.grid_points = scalar<std::size_t>(v, name, k, origin);
                else return false;
                return true;
            });
        } else if (name == "gain") {
            auto& g = cfg.gain;
            detail::read_section(body, name, origin, [&](const std::string& k, const YAML::Node& v) {
                if (k == "xi_ratios") {
                    if (v.IsScalar()) {
                        g.xi_ratios = {scalar<double>(v, name, k, origin)};
                    } else if (v.IsSequence()) {
                        g.xi_ratios.clear();
                        for (const auto& item : v) {
                            g.xi_ratios.push_back(scalar<double>(item, name, k, origin));
                        }
                    } else {
                        throw ConfigError(detail::where(v, origin) + ": gain.xi_ratios must be a number or a list");
                    }
                } else if (k == "span_linewidths") g.span_linewidths = scalar<double>(v, name, k, origin);
                else if (k == "count") g.count = scalar<std::size_t>(v, name, k, origin);
                else if (k == "detuning_mhz") g.detuning_mhz = scalar<double>(v, name, k, origin);
                else return false;
                return true;
            });
        } else if (name == "output") {
            auto& o = cfg.output;
            detail::read_section(body, name, origin, [&](const std::string& k, const YAML::Node& v) {
                if (k == "path") o.path = scalar<std::string>(v, name, k, origin);
                else if (k == "format") o.format = scalar<std::string>(v, name, k, origin);
                else return false;
                return true;
            });
        } else {
            throw ConfigError(detail::where(sec.first, origin) + ": unknown section '" + name + "'");
        }
    }
}

inline ToolConfig parse_config(std::string_view text, std::string_view origin = "<config>") {
    ToolConfig cfg;
    YAML::Node doc;
    try {
        doc = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError(std::string(origin) + ":" + std::to_string(e.mark.line + 1) + ":" +
                          std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
    apply_yaml(cfg, doc, origin);
    return cfg;
}

inline ToolConfig load_config(const std::string& path) {
    YAML::Node doc;
    try {
        doc = YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        throw ConfigError("cannot read config file '" + path + "'");
    } catch (const YAML::ParserException& e) {
        throw ConfigError(path + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                          ": " + e.msg);
    }
    ToolConfig cfg;
    apply_yaml(cfg, doc, path);
    return cfg;
}

/// Applies one `section.key=value` override; `value` is parsed as YAML.
inline void apply_override(ToolConfig& cfg, std::string_view spec) {
    const auto eq = spec.find('=');
    const auto dot = spec.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq || dot == 0 || dot + 1 == eq) {
        throw ConfigError("override '" + std::string(spec) + "' must look like section.key=value");
    }
    YAML::Node value;
    try {
        value = YAML::Load(std::string(spec.substr(eq + 1)));
    } catch (const YAML::ParserException& e) {
        throw ConfigError("override '" + std::string(spec) + "': " + e.msg);
    }
    YAML::Node doc;
    doc[std::string(spec.substr(0, dot))][std::string(spec.substr(dot + 1, eq - dot - 1))] = value;
    apply_yaml(cfg, doc, "--override " + std::string(spec));
}

// ---------------------------------------------------------------------------
// Resolution into library types

inline MaterialParams resolve_material(const MaterialSection& s) {
    MaterialParams m;
    if (s.name == "sto") {
        m = materials::sto();
    } else if (s.name == "kto") {
        m = materials::kto();
    } else if (s.name == "custom") {
        m.name = "custom";
        m.temperature = 1e-2;
        const bool complete = s.eps00_rel && s.curie_temp_k && s.debye_temp_k && s.renorm_field_v_per_um;
        if (!complete) {
            throw ConfigError(
                "material 'custom' needs eps00_rel, curie_temp_k, debye_temp_k and renorm_field_v_per_um");
        }
    } else {
        throw ConfigError("material.name must be sto, kto or custom (got '" + s.name + "')");
    }
    if (s.eps00_rel) m.eps00_rel = *s.eps00_rel;
    if (s.curie_temp_k) m.curie_temp = *s.curie_temp_k;
    if (s.debye_temp_k) m.debye_temp = *s.debye_temp_k;
    if (s.renorm_field_v_per_um) m.renorm_field = *s.renorm_field_v_per_um * kVoltsPerMicron;
    if (s.inhomogeneity) m.inhomogeneity = *s.inhomogeneity;
    if (s.a1) m.a1 = *s.a1;
    if (s.a2) m.a2 = *s.a2;
    if (s.a3) m.a3 = *s.a3;
    if (s.defect_density) m.defect_density = *s.defect_density;
    if (s.temperature_k) m.temperature = *s.temperature_k;
    validate(m);
    eta(m);  // rejects temperatures outside the model
    return m;
}

inline VaractorDesign resolve_design(const ToolConfig& cfg) {
    VaractorDesign d;
    d.material = resolve_material(cfg.material);
    d.plate_area = cfg.geometry.area_um2 * 1e-12;
    d.thickness = cfg.geometry.thickness_nm * kNano;
    d.v_max = cfg.geometry.v_max_mv * kMilli;
    validate(d);
    return d;
}

inline CircuitParams resolve_circuit(const ToolConfig& cfg) {
    CircuitParams c{cfg.circuit.inductance_nh * kNano, cfg.circuit.q_ext};
    validate(c);
    return c;
}

inline DriveSpec resolve_drive(const ToolConfig& cfg) {
    DriveSpec d{cfg.drive.v_ac_mv * kMilli, cfg.drive.theta_rad};
    validate(d);
    return d;
}

/// Sweep variable name with unit suffix, and the factor to SI.
struct SweepUnit {
    SweepVariable variable;
    double to_si;
};

inline SweepUnit sweep_unit(const std::string& name) {
    if (name == "bias_voltage_mv") return {SweepVariable::BiasVoltage, kMilli};
    if (name == "bias_field_v_per_um") return {SweepVariable::BiasField, kVoltsPerMicron};
    if (name == "plate_separation_nm") return {SweepVariable::PlateSeparation, kNano};
    if (name == "pump_ratio") return {SweepVariable::PumpRatio, 1.0};
    throw ConfigError("sweep.variable must be one of bias_voltage_mv, bias_field_v_per_um, plate_separation_nm, "
                      "pump_ratio (got '" + name + "')");
}

inline SweepSpec resolve_sweep(const SweepSection& s) {
    const auto unit = sweep_unit(s.variable);
    SweepSpec spec;
    spec.variable = unit.variable;
    spec.min = s.min * unit.to_si;
    spec.max = s.max * unit.to_si;
    spec.count = s.count;
    if (s.spacing == "linear") {
        spec.spacing = Spacing::Linear;
    } else if (s.spacing == "log") {
        spec.spacing = Spacing::Log;
    } else {
        throw ConfigError("sweep.spacing must be linear or log (got '" + s.spacing + "')");
    }
    validate(spec);
    return spec;
}

// ---------------------------------------------------------------------------
// Echo

namespace detail {

inline std::string num(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

// YAML double-quoted scalar.
inline std::string quoted(std::string_view text) {
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"' || ch == '\\') {
            out += '\\';
        }
        out += ch;
    }
    return out + "\"";
}

}  // namespace detail

/// Fully resolved configuration (defaults applied) as YAML. Parsing the
/// result reproduces the same configuration.
inline std::string dump_config(const ToolConfig& cfg) {
    using detail::num;
    const MaterialParams m = resolve_material(cfg.material);
    std::ostringstream o;
    o << "material:\n"
      << "  name: " << cfg.material.name << "\n"
      << "  eps00_rel: " << num(m.eps00_rel) << "\n"
      << "  curie_temp_k: " << num(m.curie_temp) << "\n"
      << "  debye_temp_k: " << num(m.debye_temp) << "\n"
      << "  renorm_field_v_per_um: " << num(m.renorm_field / kVoltsPerMicron) << "\n"
      << "  inhomogeneity: " << num(m.inhomogeneity) << "\n"
      << "  a1: " << num(m.a1) << "\n"
      << "  a2: " << num(m.a2) << "\n";
    if (m.a3) {
        o << "  a3: " << num(*m.a3) << "\n";
    }
    o << "  defect_density: " << num(m.defect_density) << "\n"
      << "  temperature_k: " << num(m.temperature) << "\n"
      << "geometry:\n"
      << "  area_um2: " << num(cfg.geometry.area_um2) << "\n"
      << "  thickness_nm: " << num(cfg.geometry.thickness_nm) << "\n"
      << "  v_max_mv: " << num(cfg.geometry.v_max_mv) << "\n"
      << "circuit:\n"
      << "  inductance_nh: " << num(cfg.circuit.inductance_nh) << "\n"
      << "  q_ext: " << num(cfg.circuit.q_ext) << "\n"
      << "drive:\n"
      << "  v_ac_mv: " << num(cfg.drive.v_ac_mv) << "\n"
      << "  theta_rad: " << num(cfg.drive.theta_rad) << "\n";
    if (cfg.sweep) {
        o << "sweep:\n"
          << "  variable: " << cfg.sweep->variable << "\n"
          << "  min: " << num(cfg.sweep->min) << "\n"
          << "  max: " << num(cfg.sweep->max) << "\n"
          << "  count: " << cfg.sweep->count << "\n"
          << "  spacing: " << cfg.sweep->spacing << "\n";
    }
    o << "search:\n"
      << "  v_min_mv: " << num(cfg.search.v_min_mv) << "\n"
      << "  v_max_mv: " << num(cfg.search.v_max_mv) << "\n"
      << "  grid_points: " << cfg.search.grid_points << "\n"
      << "gain:\n"
      << "  xi_ratios: [";
    for (std::size_t i = 0; i < cfg.gain.xi_ratios.size(); ++i) {
        o << (i ? ", " : "") << num(cfg.gain.xi_ratios[i]);
    }
    o << "]\n"
      << "  span_linewidths: " << num(cfg.gain.span_linewidths) << "\n"
      << "  count: " << cfg.gain.count << "\n"
      << "  detuning_mhz: " << num(cfg.gain.detuning_mhz) << "\n"
      << "output:\n"
      << "  path: " << detail::quoted(cfg.output.path) << "\n"
      << "  format: " << cfg.output.format << "\n";
    return o.str();
}

}  // namespace paraamp::cli
