#pragma once

// Configuration loading (strict flat JSON), CSV emission at fixed 17
// significant digits, grid-spec parsing, and the run manifest that makes
// every output reproducible.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "analytic.hpp"
#include "oracle.hpp"
#include "params.hpp"

namespace apa {

using nlohmann::json;

inline PhysicalConfig config_from_json(const json& j) {
    static const std::vector<std::string> known = {
        "n_atoms",          "cavity_length",   "pump_wavelength",
        "atom_mass",        "vacuum_rabi",     "atom_detuning",
        "scattering_length", "waist",          "omega_sw_over_omega_r",
        "cavity_detuning",  "alpha_sq"};
    if (!j.is_object())
        throw ConfigError("config root must be a flat JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config field \"" + key + "\"");
        (void)value;
    }
    auto need = [&](const char* key) -> const json& {
        if (!j.contains(key))
            throw ConfigError(std::string("missing config field \"") + key + "\"");
        return j.at(key);
    };
    auto as_num = [&](const char* key, const json& v) -> double {
        if (!v.is_number())
            throw ConfigError(std::string("config field \"") + key + "\" must be a number");
        return v.get<double>();
    };
    PhysicalConfig c;
    c.n_atoms = static_cast<long long>(as_num("n_atoms", need("n_atoms")));
    c.cavity_length = as_num("cavity_length", need("cavity_length"));
    c.pump_wavelength = as_num("pump_wavelength", need("pump_wavelength"));
    c.vacuum_rabi = as_num("vacuum_rabi", need("vacuum_rabi"));
    c.atom_detuning = as_num("atom_detuning", need("atom_detuning"));
    c.scattering_length = as_num("scattering_length", need("scattering_length"));
    c.alpha_sq = as_num("alpha_sq", need("alpha_sq"));
    if (j.contains("atom_mass")) c.atom_mass = as_num("atom_mass", j.at("atom_mass"));
    if (j.contains("waist")) c.waist = as_num("waist", j.at("waist"));
    if (j.contains("omega_sw_over_omega_r"))
        c.omega_sw_over_omega_r = as_num("omega_sw_over_omega_r",
                                         j.at("omega_sw_over_omega_r"));
    if (j.contains("cavity_detuning"))
        c.cavity_detuning = as_num("cavity_detuning", j.at("cavity_detuning"));
    c.validate();
    return c;
}

inline PhysicalConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

// fixed 17-significant-digit scientific notation, enough to round-trip any double
inline std::string format_sig17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

inline json derived_to_json(const DerivedParams& p) {
    return json{{"omega_r_si", p.omega_r_si},
                {"u0", p.u0},
                {"omega_sw", p.omega_sw},
                {"zeta", p.zeta},
                {"delta_c", p.delta_c},
                {"omega_c", p.omega_c},
                {"beta", p.beta},
                {"omega_c_prime", p.omega_c_prime},
                {"mu", p.mu},
                {"nu", p.nu},
                {"xi", p.xi}};
}

inline json weak_coupling_to_json(const WeakCouplingReport& r) {
    return json{{"ok", r.ok},
                {"u0_alpha_sq_over_omega_r", r.u0_alpha_sq_over_omega_r},
                {"fraction_of_bound", r.fraction_of_bound}};
}

inline json report_to_json(const OracleReport& r) {
    return json{{"quantity", r.quantity},
                {"analytic", r.analytic},
                {"oracle", r.oracle},
                {"abs_residual", r.abs_residual},
                {"rel_residual", r.rel_residual},
                {"cutoff", r.cutoff},
                {"convergence_delta", r.convergence_delta},
                {"converged", r.converged},
                {"discrepancy", r.discrepancy},
                {"note", r.note}};
}

// "min:max:steps" for one axis; a single spec is used for both axes
inline GridAxis parse_axis(const std::string& spec) {
    GridAxis a;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &a.lo, &a.hi, &a.steps, &extra) != 3
        || a.steps < 1 || !(a.hi >= a.lo))
        throw ConfigError("bad grid axis spec \"" + spec +
                          "\" (want min:max:steps with max >= min, steps >= 1)");
    return a;
}

inline void parse_grid(const std::string& spec, GridAxis& re, GridAxis& im) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos) {
        re = parse_axis(spec);
        im = re;
    } else {
        re = parse_axis(spec.substr(0, comma));
        im = parse_axis(spec.substr(comma + 1));
    }
}

inline std::string iso_timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// everything needed to reproduce an output byte for byte (the timestamp is
// documentation; outputs carry no time dependence)
struct RunManifest {
    std::string config_path;
    std::string command;
    json derived;
    json cutoffs = json::object();
    json tolerances = json::object();
    std::vector<std::string> outputs;
    std::string timestamp;
};

inline void write_manifest(const RunManifest& m, const std::string& path) {
    json j{{"config_path", m.config_path},
           {"command", m.command},
           {"derived_params", m.derived},
           {"cutoffs", m.cutoffs},
           {"tolerances", m.tolerances},
           {"outputs", m.outputs},
           {"timestamp", m.timestamp}};
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
}

inline void write_squeeze_csv(std::ostream& out,
                              const std::vector<double>& omega_sw_values,
                              const std::vector<std::vector<SqueezePoint>>& rows) {
    out << "omega_sw_over_omega_r,tau,s_q,s_p\n";
    for (size_t i = 0; i < omega_sw_values.size(); ++i)
        for (const SqueezePoint& s : rows[i])
            out << format_sig17(omega_sw_values[i]) << ',' << format_sig17(s.tau)
                << ',' << format_sig17(s.s_q) << ',' << format_sig17(s.s_p) << '\n';
}

inline void write_qfunc_csv(std::ostream& out, const QGrid& g) {
    out << "gamma_re,gamma_im,q\n";
    for (int i = 0; i < g.re_axis.steps; ++i)
        for (int j = 0; j < g.im_axis.steps; ++j)
            out << format_sig17(g.re_axis.at(i)) << ',' << format_sig17(g.im_axis.at(j))
                << ',' << format_sig17(g.values(i, j)) << '\n';
}

}  // namespace apa
