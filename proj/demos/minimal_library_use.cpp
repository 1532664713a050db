// Smallest useful slice of the header library: derive the working point from
// a physical configuration, sweep the closed-form squeezing parameters over
// one drive period, and watch the uncertainty product stay on or above the
// vacuum floor.

#include <cstdio>

#include <apa/analytic.hpp>
#include <apa/params.hpp>

int main() {
    apa::PhysicalConfig cfg;
    cfg.n_atoms = 100000;
    cfg.cavity_length = 178e-6;
    cfg.pump_wavelength = 780e-9;
    cfg.vacuum_rabi = 88592912.83123216;
    cfg.atom_detuning = 364424747816.416;
    cfg.scattering_length = 5e-9;
    cfg.omega_sw_over_omega_r = 20.0;
    cfg.alpha_sq = 0.01;

    const apa::DerivedParams p = apa::derive(cfg);
    std::printf("omega_sw %.4f  beta %.6f  mu %.6f  nu %.6f  xi %.6f\n",
                p.omega_sw, p.beta, p.mu, p.nu, p.xi);

    std::printf("%8s %12s %12s %16s\n", "tau", "s_q", "s_p", "(1+s_q)(1+s_p)");
    for (int j = 0; j <= 8; ++j) {
        const double tau = j * 0.7853981633974483;
        const apa::SqueezePoint s = apa::squeezing(p, cfg.alpha_sq, tau);
        std::printf("%8.4f %12.6f %12.6f %16.10f\n", tau, s.s_q, s.s_p,
                    apa::heisenberg_product(s.s_q, s.s_p));
    }
    return 0;
}
