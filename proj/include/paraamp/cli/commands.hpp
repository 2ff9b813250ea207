#pragma once

// Implementation of the `paraamp` subcommands. Each command reads a resolved
// ToolConfig, writes its table into the output directory, and reports on the
// given stream. run_command() maps library errors onto exit codes.

#include <cmath>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "paraamp/amplifier.hpp"
#include "paraamp/cli/config.hpp"
#include "paraamp/constants.hpp"
#include "paraamp/errors.hpp"
#include "paraamp/resonator.hpp"
#include "paraamp/sweep.hpp"
#include "paraamp/version.hpp"

namespace paraamp::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

/// Comma-separated table; numbers are written with 17 significant digits.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(const std::vector<double>& values) {
        if (values.size() != columns_.size()) {
            throw std::logic_error("CSV row width does not match the header");
        }
        rows_.push_back(values);
    }

    [[nodiscard]] std::size_t size() const { return rows_.size(); }

    void write(std::ostream& os) const {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            os << (i ? "," : "") << columns_[i];
        }
        os << "\n";
        os << std::setprecision(17);
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) {
                    os << ",";
                }
                if (std::isnan(row[i])) {
                    os << "nan";
                } else {
                    os << row[i];
                }
            }
            os << "\n";
        }
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// Comment block echoing the tool version and the effective configuration.
inline std::string provenance_header(std::string_view command, const ToolConfig& cfg) {
    std::ostringstream o;
    o << "# paraamp " << kVersion << " " << command << "\n# effective config:\n";
    std::istringstream lines(dump_config(cfg));
    for (std::string line; std::getline(lines, line);) {
        o << "# " << line << "\n";
    }
    return o.str();
}

/// Recovers the YAML config echoed by provenance_header().
inline std::string extract_echoed_config(std::istream& is) {
    std::string line;
    std::ostringstream out;
    bool in_config = false;
    while (std::getline(is, line)) {
        if (line.rfind("# ", 0) != 0) {
            break;
        }
        if (line == "# effective config:") {
            in_config = true;
            continue;
        }
        if (in_config) {
            out << line.substr(2) << "\n";
        }
    }
    return out.str();
}

namespace detail {

inline std::filesystem::path output_file(const ToolConfig& cfg, std::string_view name) {
    if (cfg.output.format != "csv") {
        throw ConfigError("output.format must be csv (got '" + cfg.output.format + "')");
    }
    const std::filesystem::path dir(cfg.output.path);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + cfg.output.path + "': " + ec.message());
    }
    return dir / std::string(name);
}

inline void write_file(const std::filesystem::path& path, const std::string& header, const CsvTable& table) {
    std::ofstream f(path);
    if (!f) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    f << header;
    table.write(f);
}

inline SweepSpec sweep_or_default(const ToolConfig& cfg, const SweepSection& fallback) {
    return resolve_sweep(cfg.sweep.value_or(fallback));
}

inline Optimum3wm search_optimum(const ToolConfig& cfg, const VaractorDesign& design, const CircuitParams& circuit,
                                 const DriveSpec& drive) {
    return maximize_3wm(design, circuit, drive, cfg.search.v_min_mv * kMilli, cfg.search.v_max_mv * kMilli,
                        cfg.search.grid_points);
}

inline double mhz(double omega) { return to_hz(omega) / 1e6; }

inline CsvTable dielectric_table(const SweepResult& r) {
    CsvTable t({"E_V_per_um", "eps_r", "tan_delta", "tan_delta_1", "tan_delta_2", "tan_delta_3"});
    for (const auto& row : r.rows) {
        t.add_row({row.x / kVoltsPerMicron, row.eps_r, row.tan_delta, row.tan_delta_1, row.tan_delta_2,
                   row.tan_delta_3});
    }
    return t;
}

}  // namespace detail

/// Default range of the `material` command: 0 to 10 V/um in 201 points.
inline SweepSection default_material_sweep() { return {"bias_field_v_per_um", 0.0, 10.0, 201, "linear"}; }

/// Default range of the `sweep` command: 0 to 250 mV bias in 251 points.
inline SweepSection default_bias_sweep() { return {"bias_voltage_mv", 0.0, 250.0, 251, "linear"}; }

/// Permittivity and loss tangent versus field; writes material.csv.
inline std::filesystem::path cmd_material(const ToolConfig& cfg, std::ostream& log) {
    const auto material = resolve_material(cfg.material);
    const auto spec = detail::sweep_or_default(cfg, default_material_sweep());
    if (spec.variable != SweepVariable::BiasField) {
        throw ConfigError("the material command sweeps bias_field_v_per_um");
    }
    const auto result = dielectric_sweep(spec, material);
    const auto path = detail::output_file(cfg, "material.csv");
    detail::write_file(path, provenance_header("material", cfg), detail::dielectric_table(result));
    log << "wrote " << result.rows.size() << " rows to " << path.string() << "\n";
    return path;
}

/// Key figures of the amplifier at its optimal 3WM bias.
struct DesignReport {
    std::string material;
    double v0_max_mv = 0.0;
    double capacitance_pf = 0.0;
    double f0_ghz = 0.0;
    double z0_ohm = 0.0;
    double xi_mhz = 0.0;
    double k_eff_hz = 0.0;
    double xi_over_k_eff = 0.0;
    double tan_delta = 0.0;
    double q_int = 0.0;
    double q_ext = 0.0;
    double kappa_int_mhz = 0.0;
    double kappa_ext_mhz = 0.0;
    double kappa_mhz = 0.0;
    double pump_ratio = 0.0;
    double pump_photons = 0.0;
    double compression_photons = 0.0;
    double p_circ_dbm_hz = 0.0;
    double p_circ_dbm_si = 0.0;

    [[nodiscard]] std::vector<std::pair<std::string, double>> fields() const {
        return {{"v0_max_mv", v0_max_mv},
                {"capacitance_pf", capacitance_pf},
                {"f0_ghz", f0_ghz},
                {"z0_ohm", z0_ohm},
                {"xi_mhz", xi_mhz},
                {"k_eff_hz", k_eff_hz},
                {"xi_over_k_eff", xi_over_k_eff},
                {"tan_delta", tan_delta},
                {"q_int", q_int},
                {"q_ext", q_ext},
                {"kappa_int_mhz", kappa_int_mhz},
                {"kappa_ext_mhz", kappa_ext_mhz},
                {"kappa_mhz", kappa_mhz},
                {"pump_ratio", pump_ratio},
                {"pump_photons", pump_photons},
                {"compression_photons", compression_photons},
                {"p_circ_dbm_hz", p_circ_dbm_hz},
                {"p_circ_dbm_si", p_circ_dbm_si}};
    }
};

inline DesignReport design_report(const ToolConfig& cfg) {
    const auto design = resolve_design(cfg);
    const auto circuit = resolve_circuit(cfg);
    const auto drive = resolve_drive(cfg);
    const auto opt = detail::search_optimum(cfg, design, circuit, drive);
    const auto op = operating_point(opt.v0, drive, design, circuit);
    const auto rates = rate_budget(opt.v0, design, circuit, to_rad_per_s(cfg.gain.detuning_mhz * 1e6));
    const double c = capacitance(opt.v0, design);

    DesignReport r;
    r.material = design.material.name;
    r.v0_max_mv = opt.v0 / kMilli;
    r.capacitance_pf = c * 1e12;
    r.f0_ghz = to_hz(op.omega0) / 1e9;
    r.z0_ohm = op.z0;
    r.xi_mhz = detail::mhz(std::abs(op.xi));
    r.k_eff_hz = to_hz(op.k_eff);
    r.xi_over_k_eff = std::abs(op.xi) / op.k_eff;
    r.tan_delta = rates.kappa_int / rates.omega0;
    r.q_int = rates.q_int();
    r.q_ext = rates.q_ext();
    r.kappa_int_mhz = detail::mhz(rates.kappa_int);
    r.kappa_ext_mhz = detail::mhz(rates.kappa_ext);
    r.kappa_mhz = detail::mhz(rates.kappa);
    r.pump_ratio = pump_ratio(std::abs(op.xi), rates);
    r.pump_photons = pump_photons(drive_charge(drive, c), op.q_zpf);
    if (op.k_eff > 0.0) {
        const auto comp = compression_estimate(op.k_eff, rates, op.omega0);
        r.compression_photons = comp.n_photons;
        r.p_circ_dbm_hz = comp.p_circ_dbm_hz;
        r.p_circ_dbm_si = comp.p_circ_dbm_si;
    } else {
        r.compression_photons = r.p_circ_dbm_hz = r.p_circ_dbm_si = SweepRow::kUnset;
    }
    return r;
}

/// Operating point report on `log`, plus design.kv in the output directory.
inline std::filesystem::path cmd_design(const ToolConfig& cfg, std::ostream& log) {
    const auto r = design_report(cfg);
    const auto path = detail::output_file(cfg, "design.kv");
    {
        std::ofstream f(path);
        if (!f) {
            throw ConfigError("cannot open '" + path.string() + "' for writing");
        }
        f << provenance_header("design", cfg) << "material = " << r.material << "\n" << std::setprecision(17);
        for (const auto& [key, value] : r.fields()) {
            f << key << " = " << value << "\n";
        }
    }

    const auto old_flags = log.flags();
    const auto old_prec = log.precision();
    log << std::setprecision(4);
    log << "paraamp " << kVersion << " design report (" << r.material << ")\n"
        << "  optimal 3WM bias      v0_max      = " << r.v0_max_mv << " mV\n"
        << "  capacitance           C(v0)       = " << r.capacitance_pf << " pF\n"
        << "  mode frequency        w0/2pi      = " << std::fixed << std::setprecision(4) << r.f0_ghz << " GHz\n"
        << std::defaultfloat << std::setprecision(4)
        << "  impedance             z0          = " << r.z0_ohm << " Ohm\n"
        << "  three-wave mixing     |xi|/2pi    = " << r.xi_mhz << " MHz\n"
        << "  effective Kerr        K_eff/2pi   = " << r.k_eff_hz << " Hz\n"
        << "  figure of merit       |xi|/K_eff  = " << r.xi_over_k_eff << "\n"
        << "  loss tangent          tan(delta)  = " << r.tan_delta << "  (Q_int = " << r.q_int << ")\n"
        << "  internal loss         k_int/2pi   = " << r.kappa_int_mhz << " MHz\n"
        << "  external coupling     k_ext/2pi   = " << r.kappa_ext_mhz << " MHz  (Q_ext = " << r.q_ext << ")\n"
        << "  total linewidth       k/2pi       = " << r.kappa_mhz << " MHz\n"
        << "  pump strength         |xi|/(k/2)  = " << r.pump_ratio << "\n"
        << "  pump photons (q_ac/2q_zpf)^2      = " << r.pump_photons << "\n"
        << "  compression photons   N = k/K_eff = " << r.compression_photons << "\n"
        << "  circulating power     P_circ      = " << r.p_circ_dbm_hz << " dBm (N hbar f0 k/2pi), "
        << r.p_circ_dbm_si << " dBm (N hbar w0 k)\n"
        << "wrote " << path.string() << "\n";
    log.flags(old_flags);
    log.precision(old_prec);
    return path;
}

/// Reflection profiles at the optimal bias for each gain.xi_ratios entry;
/// writes gain.csv.
inline std::filesystem::path cmd_gain(const ToolConfig& cfg, std::ostream& log) {
    const auto design = resolve_design(cfg);
    const auto circuit = resolve_circuit(cfg);
    const auto drive = resolve_drive(cfg);
    if (cfg.gain.xi_ratios.empty()) {
        throw ConfigError("gain.xi_ratios must list at least one value");
    }
    for (double ratio : cfg.gain.xi_ratios) {
        if (!(ratio >= 0.0)) {
            throw ConfigError("gain.xi_ratios entries must be >= 0");
        }
    }
    const GridSpec grid{cfg.gain.span_linewidths, cfg.gain.count};
    const auto opt = detail::search_optimum(cfg, design, circuit, drive);
    const auto rates = rate_budget(opt.v0, design, circuit, to_rad_per_s(cfg.gain.detuning_mhz * 1e6));

    CsvTable table({"xi_ratio", "freq_ghz", "gain_db", "re_R", "im_R"});
    for (double ratio : cfg.gain.xi_ratios) {
        const auto profile = gain_profile(rates, ratio * 0.5 * rates.kappa, grid);
        for (std::size_t i = 0; i < profile.frequencies.size(); ++i) {
            const auto r = profile.reflection[i];
            table.add_row({ratio, to_hz(profile.frequencies[i]) / 1e9, power_gain_db(r), r.real(), r.imag()});
        }
    }
    const auto path = detail::output_file(cfg, "gain.csv");
    detail::write_file(path, provenance_header("gain", cfg), table);
    log << "wrote " << table.size() << " rows to " << path.string() << "\n";
    return path;
}

/// Bias, field, geometry or pump-ratio sweep; writes sweep.csv.
inline std::filesystem::path cmd_sweep(const ToolConfig& cfg, std::ostream& log) {
    const auto spec = detail::sweep_or_default(cfg, default_bias_sweep());
    CsvTable table({});
    switch (spec.variable) {
        case SweepVariable::BiasVoltage: {
            const auto result =
                bias_sweep(spec, resolve_design(cfg), resolve_circuit(cfg), resolve_drive(cfg));
            table = CsvTable({"v0_mv", "eps_r", "tan_delta", "capacitance_pf", "f0_ghz", "xi_mhz", "k_eff_hz",
                              "kappa_int_mhz", "kappa_ext_mhz", "peak_gain_db"});
            for (const auto& r : result.rows) {
                table.add_row({r.x / kMilli, r.eps_r, r.tan_delta, r.capacitance * 1e12, to_hz(r.omega0) / 1e9,
                               detail::mhz(r.xi_abs), to_hz(r.k_eff), detail::mhz(r.kappa_int),
                               detail::mhz(r.kappa_ext), r.peak_gain_db});
            }
            break;
        }
        case SweepVariable::BiasField:
            table = detail::dielectric_table(dielectric_sweep(spec, resolve_material(cfg.material)));
            break;
        case SweepVariable::PlateSeparation: {
            const auto design = resolve_design(cfg);
            const double max_field = cfg.search.v_max_mv * kMilli / design.thickness;
            const auto result = geometry_sweep(spec, design, resolve_circuit(cfg), resolve_drive(cfg), max_field);
            const double area_ratio = design.plate_area / design.thickness;
            table = CsvTable({"d_nm", "area_um2", "v0_opt_mv", "xi_mhz", "k_eff_hz", "xi_over_k_eff", "f0_ghz",
                              "capacitance0_pf"});
            for (const auto& r : result.rows) {
                table.add_row({r.x / kNano, area_ratio * r.x * 1e12, r.v0_opt / kMilli, detail::mhz(r.xi_abs),
                               to_hz(r.k_eff), r.xi_abs / r.k_eff, to_hz(r.omega0) / 1e9, r.capacitance * 1e12});
            }
            break;
        }
        case SweepVariable::PumpRatio: {
            const auto design = resolve_design(cfg);
            const auto circuit = resolve_circuit(cfg);
            const auto opt = detail::search_optimum(cfg, design, circuit, resolve_drive(cfg));
            const auto rates = rate_budget(opt.v0, design, circuit, to_rad_per_s(cfg.gain.detuning_mhz * 1e6));
            const auto result = pump_ratio_sweep(spec, rates);
            table = CsvTable({"pump_ratio", "xi_mhz", "peak_gain_db"});
            for (const auto& r : result.rows) {
                table.add_row({r.x, detail::mhz(r.xi_abs), r.peak_gain_db});
            }
            break;
        }
    }
    const auto path = detail::output_file(cfg, "sweep.csv");
    detail::write_file(path, provenance_header("sweep", cfg), table);
    log << "wrote " << table.size() << " rows to " << path.string() << "\n";
    return path;
}

/// Runs `command`, printing errors to `err`. Returns the process exit code:
/// 0 on success, 2 for configuration/validation errors, 3 for numerical or
/// threshold errors.
inline int run_command(std::string_view command, const ToolConfig& cfg, std::ostream& log, std::ostream& err) {
    try {
        if (command == "material") {
            cmd_material(cfg, log);
        } else if (command == "design") {
            cmd_design(cfg, log);
        } else if (command == "gain") {
            cmd_gain(cfg, log);
        } else if (command == "sweep") {
            cmd_sweep(cfg, log);
        } else {
            err << "error: unknown command '" << command << "'\n";
            return kExitConfig;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ThresholdError& e) {
        err << "threshold error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace paraamp::cli
