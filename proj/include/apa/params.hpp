#pragma once

// Laboratory inputs and the derived model parameters of the two-mode
// atomic-parametric-amplifier Hamiltonian. Everything downstream works in
// recoil units: hbar = 1 and all frequencies measured in omega_r, so time
// enters only through the dimensionless tau = omega_c_prime * t.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace apa {

// CODATA 2018
inline constexpr double k_hbar = 1.054571817e-34;        // J s
inline constexpr double k_amu = 1.66053906660e-27;       // kg
inline constexpr double k_mass_rb87 = 86.909180531 * k_amu;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnstableFrequencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhysicalConfig {
    long long n_atoms = 0;                  // N
    double cavity_length = 0.0;             // L, m
    double pump_wavelength = 0.0;           // lambda, m; k = 2 pi / lambda
    double atom_mass = k_mass_rb87;         // m0, kg
    double vacuum_rabi = 0.0;               // g0, rad/s
    double atom_detuning = 0.0;             // Delta_a, rad/s
    double scattering_length = 0.0;         // a_s, m
    std::optional<double> waist;            // w, m
    std::optional<double> omega_sw_over_omega_r;
    std::optional<double> cavity_detuning;  // Delta_c, rad/s; absent = operating
                                            // point delta_c = 0
    double alpha_sq = 0.0;                  // |alpha|^2, mean photon number

    void validate() const {
        if (n_atoms < 1)
            throw ConfigError("n_atoms must be >= 1");
        if (!(cavity_length > 0.0))
            throw ConfigError("cavity_length must be > 0");
        if (!(pump_wavelength > 0.0))
            throw ConfigError("pump_wavelength must be > 0");
        if (!(atom_mass > 0.0))
            throw ConfigError("atom_mass must be > 0");
        if (!(scattering_length > 0.0))
            throw ConfigError("scattering_length must be > 0");
        if (!(alpha_sq >= 0.0))
            throw ConfigError("alpha_sq must be >= 0");
        if (atom_detuning == 0.0)
            throw ConfigError("atom_detuning must be nonzero (dispersive regime)");
        if (waist.has_value() == omega_sw_over_omega_r.has_value())
            throw ConfigError(waist
                ? "provide exactly one of waist and omega_sw_over_omega_r, not both"
                : "provide exactly one of waist and omega_sw_over_omega_r");
        if (waist && !(*waist > 0.0))
            throw ConfigError("waist must be > 0");
    }
};

struct DerivedParams {
    double omega_r_si = 0.0;        // rad/s, for SI reporting only
    // everything below in omega_r units
    double u0 = 0.0;                // U0 = g0^2 / Delta_a
    double omega_sw = 0.0;          // s-wave scattering frequency
    double zeta = 0.0;              // zeta = (1/2) sqrt(N) U0
    double delta_c = 0.0;           // -Delta_c + (1/2) N U0
    double omega_c = 0.0;           // 4 + omega_sw
    double beta = 0.0;              // (sqrt2/2) zeta / (omega_c + omega_sw/2)
    double omega_c_prime = 0.0;     // sqrt((4 + omega_sw/2)(4 + 3 omega_sw/2))
    double mu = 0.0;
    double nu = 0.0;
    double xi = 0.0;                // acosh(mu), nonnegative real
};

inline DerivedParams derive(const PhysicalConfig& cfg) {
    cfg.validate();
    DerivedParams p;
    const double k = 2.0 * M_PI / cfg.pump_wavelength;
    p.omega_r_si = k_hbar * k * k / (2.0 * cfg.atom_mass);
    p.u0 = (cfg.vacuum_rabi * cfg.vacuum_rabi / cfg.atom_detuning) / p.omega_r_si;
    if (cfg.omega_sw_over_omega_r) {
        p.omega_sw = *cfg.omega_sw_over_omega_r;
    } else {
        const double w = *cfg.waist;
        p.omega_sw = 8.0 * M_PI * k_hbar * cfg.scattering_length
                     * static_cast<double>(cfg.n_atoms)
                     / (cfg.atom_mass * cfg.cavity_length * w * w)
                     / p.omega_r_si;
    }
    p.zeta = 0.5 * std::sqrt(static_cast<double>(cfg.n_atoms)) * p.u0;
    p.delta_c = cfg.cavity_detuning
                    ? -*cfg.cavity_detuning / p.omega_r_si
                          + 0.5 * static_cast<double>(cfg.n_atoms) * p.u0
                    : 0.0;
    p.omega_c = 4.0 + p.omega_sw;
    p.beta = (std::sqrt(2.0) / 2.0) * p.zeta / (p.omega_c + 0.5 * p.omega_sw);
    const double opc_sq = (4.0 + 0.5 * p.omega_sw) * (4.0 + 1.5 * p.omega_sw);
    if (!(opc_sq > 0.0))
        throw UnstableFrequencyError(
            "unstable effective frequency: (4 + omega_sw/2)(4 + 3 omega_sw/2) <= 0 "
            "at omega_sw = " + std::to_string(p.omega_sw));
    p.omega_c_prime = std::sqrt(opc_sq);
    const double r = p.omega_c / p.omega_c_prime;      // >= 1
    p.mu = std::sqrt(0.5 * (r + 1.0));
    p.nu = std::sqrt(std::max(0.0, 0.5 * (r - 1.0)));
    // equal to acosh(mu) but well conditioned near mu = 1
    p.xi = 0.5 * std::atanh(p.omega_sw / (2.0 * p.omega_c));
    return p;
}

struct WeakCouplingReport {
    bool ok = false;
    double u0_alpha_sq_over_omega_r = 0.0;  // U0 |alpha|^2 in omega_r units
    double fraction_of_bound = 0.0;         // same quantity divided by the bound 10
};

inline WeakCouplingReport weak_coupling_check(const DerivedParams& p, double alpha_sq) {
    WeakCouplingReport r;
    r.u0_alpha_sq_over_omega_r = p.u0 * alpha_sq;
    r.fraction_of_bound = r.u0_alpha_sq_over_omega_r / 10.0;
    r.ok = r.u0_alpha_sq_over_omega_r <= 10.0;
    return r;
}

}  // namespace apa
