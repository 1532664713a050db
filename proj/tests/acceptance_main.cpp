// Acceptance gate: seven go/no-go criteria with pinned tolerances. Each
// criterion prints one verdict line plus indented evidence; the exit status
// is the number of failed criteria.
//
// C2 is expected to carry a red clause: the printed closed forms disagree
// with the brute-force oracle at omega_sw > 0 by an O(1) margin traceable to
// the sign of the Bogoliubov weight (see the transform-chain diagnosis under
// C4). The gate reports that disagreement honestly instead of retuning the
// tolerance until it disappears.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <apa/analytic.hpp>
#include <apa/oracle.hpp>
#include <apa/params.hpp>

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kPiHalf = 1.5707963267948966;
constexpr double kThreePiHalf = 4.7123889803846897;
constexpr double kTwoPi = 6.2831853071795862;

apa::PhysicalConfig reference_config(double omega_sw_over_omega_r) {
    apa::PhysicalConfig c;
    c.n_atoms = 100000;
    c.cavity_length = 178e-6;
    c.pump_wavelength = 780e-9;
    c.vacuum_rabi = 88592912.83123216;
    c.atom_detuning = 364424747816.416;
    c.scattering_length = 5e-9;
    c.omega_sw_over_omega_r = omega_sw_over_omega_r;
    c.alpha_sq = 0.01;
    return c;
}

apa::DerivedParams reference_params(double wsw) {
    return apa::derive(reference_config(wsw));
}

constexpr double kAlphaSq = 0.01;

int g_failures = 0;

void verdict(const char* id, bool pass, const char* line) {
    std::printf("%s %s: %s\n", id, pass ? "PASS" : "FAIL", line);
    if (!pass) ++g_failures;
}

// frozen oracle regression lattice: brute-force squeezing parameters from an
// independent prototype run whose convergence was established by literal
// cutoff doubling
struct OraclePin {
    double wsw, tau, s_q, s_p;
};
const OraclePin kOraclePins[] = {
    {5.0, 0.5, -5.317829652278e-02, 1.445560877432e+00},
    {5.0, kPiHalf, 2.685188954943e+00, 6.289180458745e+00},
    {5.0, kPi, 1.247988625455e+01, 8.881784197001e-16},
    {5.0, kThreePiHalf, 2.685188954943e+00, 6.289180458745e+00},
    {5.0, kTwoPi, -1.368228293633e-16, 1.368228295197e-16},
    {5.0, 5.0, 1.201183627025e+00, 5.783126361451e+00},
    {10.0, 0.5, -1.038443267351e-01, 8.100037884462e-01},
    {10.0, kPiHalf, 6.166654828012e-01, 3.524071574802e+00},
    {10.0, kPi, 4.571925089099e+00, 0.000000000000e+00},
    {10.0, kThreePiHalf, 6.166654828011e-01, 3.524071574802e+00},
    {10.0, kTwoPi, 2.107370615014e-16, -2.107366896015e-16},
    {10.0, 5.0, 1.025430633593e-01, 3.240509849823e+00},
    {15.0, 0.5, -1.212978821183e-01, 6.110066729794e-01},
    {15.0, kPiHalf, 2.152543864894e-02, 2.658297749930e+00},
    {15.0, kPi, 2.350252697992e+00, 0.000000000000e+00},
    {15.0, kThreePiHalf, 2.152543864894e-02, 2.658297749930e+00},
    {15.0, kTwoPi, -8.201685053187e-18, 8.289618054908e-18},
    {15.0, 5.0, -2.189898544236e-01, 2.444399853852e+00},
    {20.0, 0.5, -1.298561738873e-01, 5.275978632071e-01},
    {20.0, kPiHalf, -2.313008310630e-01, 2.295412267419e+00},
    {20.0, kPi, 1.427737852219e+00, 0.000000000000e+00},
    {20.0, kThreePiHalf, -2.313008310630e-01, 2.295412267419e+00},
    {20.0, kTwoPi, 1.551720747079e-16, -1.535161439514e-16},
    {20.0, 5.0, -3.577460888850e-01, 2.110713674251e+00},
};

struct Stash {
    double c1_certificate = 1.0;
    double c2_worst_certificate = 1.0;
};

// C1: at omega_sw = 0 the closed forms are exact; both quadrature parameters
// are nonnegative on the sweep grid and the brute-force oracle confirms them
// over one full period
bool criterion_1(Stash& stash) {
    const apa::DerivedParams p = reference_params(0.0);

    double grid_floor = 1e9;
    double limit_worst = 0.0;
    const double b2a = 4.0 * p.beta * p.beta * kAlphaSq;
    for (int j = 0; j < 400; ++j) {
        const double tau = 4.0 * kPi * j / 399.0;
        const apa::SqueezePoint s = apa::squeezing(p, kAlphaSq, tau);
        grid_floor = std::min({grid_floor, s.s_q, s.s_p});
        const double tr = apa::reduce_two_pi(tau);
        const double eq = b2a * (1.0 - std::cos(tr)) * (1.0 - std::cos(tr));
        const double ep = b2a * std::sin(tr) * std::sin(tr);
        const double scale = std::max(1.0, eq);
        limit_worst = std::max({limit_worst, std::fabs(s.s_q - eq) / scale,
                                std::fabs(s.s_p - ep) / scale});
    }

    std::vector<double> probes;
    for (int j = 1; j <= 8; ++j) probes.push_back(j * kPi / 4.0);
    const apa::OracleMomentSeries series =
        apa::oracle_moments(p, kAlphaSq, probes);
    double probe_worst = 0.0;
    for (size_t j = 0; j < probes.size(); ++j) {
        double sq = 0.0, sp = 0.0;
        apa::squeezing_from_moments(series.at[j], sq, sp);
        const apa::SqueezePoint s = apa::squeezing(p, kAlphaSq, probes[j]);
        probe_worst = std::max({probe_worst, std::fabs(sq - s.s_q),
                                std::fabs(sp - s.s_p)});
    }
    const double certificate = std::max(series.edge_flux_bound, series.tail_bound);
    stash.c1_certificate = certificate;

    const bool pass = grid_floor >= -1e-12 && limit_worst <= 1e-10
                      && series.tail_converged && probe_worst <= 1e-8
                      && certificate < 1e-8;
    verdict("C1", pass,
            "omega_sw = 0: closed forms nonnegative, limit forms exact, and the "
            "oracle confirms one full period within 1e-08");
    std::printf("    sweep floor %.3e (>= -1e-12); limit-form residual %.3e "
                "(<= 1e-10)\n",
                grid_floor, limit_worst);
    std::printf("    oracle residual over 8 probe times %.3e (<= 1e-08); "
                "certificate %.3e (< 1e-08); largest sector dim %d (%s)\n",
                probe_worst, certificate, series.dims.back(),
                series.routes.back().c_str());
    return pass;
}

// C2: the printed family's phenomenology holds (no q-quadrature squeezing,
// p-quadrature squeezing above threshold), the frozen oracle lattice is
// reproduced, and the printed forms are required to match the oracle to 1e-06
bool criterion_2(Stash& stash) {
    double sq_floor = 1e9;
    for (double wsw : {5.0, 10.0, 15.0, 20.0}) {
        const apa::DerivedParams p = reference_params(wsw);
        for (int j = 0; j < 400; ++j)
            sq_floor = std::min(
                sq_floor, apa::squeezing(p, kAlphaSq, 4.0 * kPi * j / 399.0).s_q);
    }
    double sp_ceiling = -1e9;
    for (double wsw : {15.0, 20.0}) {
        const apa::DerivedParams p = reference_params(wsw);
        for (int j = 0; j < 400; ++j)
            sp_ceiling = std::max(
                sp_ceiling, apa::squeezing(p, kAlphaSq, 4.0 * kPi * j / 399.0).s_p);
    }

    const std::vector<double> taus = {0.5, kPiHalf, kPi, kThreePiHalf, kTwoPi, 5.0};
    double regress_worst = 0.0;
    double rel_worst = 0.0;
    double rel_wsw = 0.0, rel_tau = 0.0;
    double cert_worst = 0.0;
    for (double wsw : {5.0, 10.0, 15.0, 20.0}) {
        const apa::DerivedParams p = reference_params(wsw);
        const apa::OracleMomentSeries series =
            apa::oracle_moments(p, kAlphaSq, taus);
        cert_worst = std::max(
            cert_worst, std::max(series.edge_flux_bound, series.tail_bound));
        for (size_t j = 0; j < taus.size(); ++j) {
            double sq = 0.0, sp = 0.0;
            apa::squeezing_from_moments(series.at[j], sq, sp);
            for (const OraclePin& pin : kOraclePins) {
                if (pin.wsw == wsw && pin.tau == taus[j]) {
                    regress_worst = std::max({regress_worst,
                                              std::fabs(sq - pin.s_q),
                                              std::fabs(sp - pin.s_p)});
                }
            }
            const apa::SqueezePoint s = apa::squeezing(p, kAlphaSq, taus[j]);
            const double rq = std::fabs(s.s_q - sq) / std::max(1.0, std::fabs(s.s_q));
            const double rp = std::fabs(s.s_p - sp) / std::max(1.0, std::fabs(s.s_p));
            if (std::max(rq, rp) > rel_worst) {
                rel_worst = std::max(rq, rp);
                rel_wsw = wsw;
                rel_tau = taus[j];
            }
        }
    }
    stash.c2_worst_certificate = cert_worst;

    const bool pheno = sq_floor >= -1e-12 && sp_ceiling <= 1e-12;
    const bool regress = regress_worst <= 2e-8;
    const bool agree = rel_worst <= 1e-6;
    const bool pass = pheno && regress && agree;
    verdict("C2", pass,
            pass ? "printed squeezing matches the oracle within 1e-06 across the "
                   "lattice"
                 : "printed-family phenomenology and the frozen oracle regression "
                   "hold, but printed-vs-oracle exceeds the 1e-06 gate");
    std::printf("    printed s_q floor (omega_sw in {5,10,15,20}) %.3e (>= -1e-12); "
                "printed s_p ceiling (omega_sw in {15,20}) %.3e (<= 1e-12)\n",
                sq_floor, sp_ceiling);
    std::printf("    frozen oracle regression max |delta| %.3e (<= 2e-08); "
                "certificate %.3e\n",
                regress_worst, cert_worst);
    std::printf("    printed-vs-oracle max rel residual %.3e at omega_sw=%g "
                "tau=%.6f (gate 1e-06); the families coincide at omega_sw = 0 "
                "and split by the sign of the Bogoliubov weight (see C4)\n",
                rel_worst, rel_wsw, rel_tau);
    return pass;
}

// C3: the Husimi distribution is a vacuum Gaussian at tau = 0, matches the
// closed single-sector mixture at tau = pi/2 on a window wide enough to hold
// the displaced sectors, and carries the frozen axis variances
bool criterion_3() {
    const apa::DerivedParams p = reference_params(20.0);

    const apa::QGrid vac = apa::q_function(p, kAlphaSq, 0.0,
                                           apa::GridAxis{-6.0, 6.0, 121},
                                           apa::GridAxis{-6.0, 6.0, 121});
    const bool vac_ok = vac.crosscheck_residual >= 0.0
                        && vac.crosscheck_residual < 1e-10 && !vac.discrepancy;

    const apa::GridAxis wide_re{-11.0, 5.0, 215};
    const apa::GridAxis wide_im{-7.0, 5.0, 161};
    const apa::QGrid g = apa::q_function(p, kAlphaSq, kPiHalf, wide_re, wide_im);
    const apa::QMoments m = apa::q_axis_moments(g);

    const bool mixture_ok = g.crosscheck_residual >= 0.0
                            && g.crosscheck_residual < 1e-7 && !g.discrepancy;
    const bool positive = g.values.minCoeff() >= 0.0 && vac.values.minCoeff() >= 0.0;
    const bool norm_ok = std::fabs(g.norm_estimate - 1.0) < 1e-3;
    // frozen grid-measured variances on exactly this window, plus the
    // continuum values they approach
    const bool var_pins = std::fabs(m.var_r - 0.9463752709) < 1e-6
                          && std::fabs(m.var_i - 0.3896842119) < 1e-6
                          && std::fabs(m.var_r - 0.9463764729069695) < 1e-4
                          && std::fabs(m.var_i - 0.38968443002051684) < 1e-4;
    const bool anisotropy = m.var_i < m.var_r
                            && std::fabs(m.var_i / m.var_r - 7.0 / 17.0) < 1e-5;

    const bool pass = vac_ok && mixture_ok && positive && norm_ok && var_pins
                      && anisotropy;
    verdict("C3", pass,
            "Husimi distribution: vacuum Gaussian at tau = 0, closed-mixture "
            "match at tau = pi/2, frozen axis variances and anisotropy");
    std::printf("    tau=0 residual %.3e (< 1e-10); tau=pi/2 residual %.3e "
                "(< 1e-07); window mass %.10f (within 1e-03 of 1)\n",
                vac.crosscheck_residual, g.crosscheck_residual, g.norm_estimate);
    std::printf("    var_re %.10f var_im %.10f ratio %.10f (7/17 = %.10f)\n",
                m.var_r, m.var_i, m.var_i / m.var_r, 7.0 / 17.0);
    return pass;
}

// C4: the similarity-transform chain diagonalizes every photon sector with
// the solved hyperbolic angle, reproduces the dressed frequency and the
// photon-number-squared light shift, and flags the printed angle's sign
bool criterion_4() {
    bool pass = true;
    struct Row {
        double wsw;
        apa::DiagReport rep;
    };
    std::vector<Row> rows;
    for (double wsw : {0.0, 5.0, 20.0})
        rows.push_back({wsw, apa::check_diagonalization(reference_params(wsw))});
    for (const Row& r : rows) {
        const bool expect_flag = r.wsw > 0.0;
        pass = pass && r.rep.solved_sign_diagonalizes
               && r.rep.freq_residual < 1e-6 && r.rep.kerr_rel_residual < 1e-6
               && r.rep.discrepancy == expect_flag;
    }
    verdict("C4", pass,
            "transform chain: solved hyperbolic angle diagonalizes every "
            "sector; printed angle flagged wherever omega_sw > 0");
    for (const Row& r : rows)
        std::printf("    omega_sw=%-4g xi_printed %+.6f xi_solved %+.6f "
                    "offdiag printed/solved %.3e/%.3e kerr rel %.3e flag %d\n",
                    r.wsw, r.rep.xi_printed, r.rep.xi_solved,
                    r.rep.offdiag_printed, r.rep.offdiag_solved,
                    r.rep.kerr_rel_residual, r.rep.discrepancy ? 1 : 0);
    return pass;
}

// C5: free evolution rotates displaced-squeezed states covariantly, the
// property the interaction-picture closed forms rest on
bool criterion_5() {
    double min_fid = 1.0;
    for (double babs : {0.5, 1.7, 3.0})
        for (double barg : {0.0, 2.1})
            for (double r : {0.0, 0.25, 0.5}) {
                const int dim = apa::cutoff_dim(
                    babs * babs * std::exp(4.0 * r) + 10.0);
                const apa::FockSpace space(dim);
                const apa::Complex beta = std::polar(babs, barg);
                const apa::Vec psi =
                    apa::squeezed_coherent(space, beta, apa::Complex(r, 0.0));
                for (double wt : {0.0, kPi / 7.0, kPiHalf, kPi, kTwoPi}) {
                    const apa::Vec evolved = apa::evolve_free(psi, wt);
                    const apa::Complex rot = std::exp(apa::Complex(0.0, -wt));
                    const apa::Vec target = apa::squeezed_coherent(
                        space, beta * rot, apa::Complex(r, 0.0) * rot * rot);
                    min_fid = std::min(min_fid,
                                       std::abs(apa::overlap(target, evolved)));
                }
            }
    const bool pass = min_fid >= 1.0 - 1e-8;
    verdict("C5", pass,
            "free evolution rotates displaced-squeezed states covariantly");
    std::printf("    minimum fidelity over 90 lattice points %.12f "
                "(>= 1 - 1e-08)\n",
                min_fid);
    return pass;
}

// C6: structural invariants and convergence evidence: hyperbolic identity,
// uncertainty bound, density-matrix health, 2 pi periodicity, detuning
// independence, literal cutoff doubling where affordable, and the edge-flux
// certificates where not
bool criterion_6(const Stash& stash) {
    bool pass = true;

    double hyper_worst = 0.0;
    for (int j = 0; j <= 40; ++j) {
        const apa::DerivedParams p = reference_params(0.5 * j);
        hyper_worst = std::max({hyper_worst,
                                std::fabs(p.mu * p.mu - p.nu * p.nu - 1.0),
                                std::fabs(std::cosh(p.xi) - p.mu)});
    }
    pass = pass && hyper_worst < 1e-12;

    double heis_min = 1e9;
    double period_worst = 0.0;
    for (double wsw : {0.0, 5.0, 10.0, 15.0, 20.0}) {
        const apa::DerivedParams p = reference_params(wsw);
        for (int j = 0; j < 400; ++j) {
            const double tau = 4.0 * kPi * j / 399.0;
            const apa::SqueezePoint s = apa::squeezing(p, kAlphaSq, tau);
            heis_min = std::min(heis_min, apa::heisenberg_product(s.s_q, s.s_p));
        }
        for (double tau : {0.3, 2.0, 5.9}) {
            const apa::SqueezePoint a = apa::squeezing(p, kAlphaSq, tau);
            const apa::SqueezePoint b = apa::squeezing(p, kAlphaSq, tau + kTwoPi);
            const double scale = std::max(1.0, std::fabs(a.s_q));
            period_worst = std::max({period_worst,
                                     std::fabs(a.s_q - b.s_q) / scale,
                                     std::fabs(a.s_p - b.s_p) / scale});
        }
    }
    pass = pass && heis_min >= 1.0 - 1e-8 && period_worst <= 4e-12;

    const apa::DerivedParams p20 = reference_params(20.0);
    double rho_trace_worst = 0.0, rho_herm_worst = 0.0, rho_eig_floor = 0.0;
    double rho_vacuum_residual = 0.0;
    {
        const int dim = apa::rho_c_recommended_dim(p20, kAlphaSq, 1e-9);
        const apa::FockSpace space(dim);
        for (double tau : {0.0, kPiHalf, 2.0}) {
            const apa::Mat rho = apa::rho_c(p20, kAlphaSq, tau, space, 1e-9);
            rho_trace_worst = std::max(rho_trace_worst,
                                       std::fabs(rho.trace().real() - 1.0));
            rho_herm_worst = std::max(rho_herm_worst, apa::hermiticity_defect(rho));
            rho_eig_floor = std::min(rho_eig_floor, apa::min_eigenvalue(rho));
            if (tau == 0.0) {
                apa::Mat vac = apa::Mat::Zero(dim, dim);
                vac(0, 0) = 1.0;
                rho_vacuum_residual = (rho - vac).norm();
            }
        }
    }
    pass = pass && rho_trace_worst < 1e-8 && rho_herm_worst < 1e-12
           && rho_eig_floor > -1e-10 && rho_vacuum_residual < 1e-7;

    const apa::FullTensorReport ft = apa::check_full_tensor(p20, kAlphaSq, kPiHalf);
    const apa::FullTensorReport ft_small =
        apa::check_full_tensor(p20, kAlphaSq, kPiHalf, 4, 48);
    pass = pass && ft.pass && ft_small.pass && ft.commutator_norm < 1e-12;

    // literal cutoff doubling on the reported scalars at omega_sw = 20
    const std::vector<double> taus = {kPiHalf, 5.0};
    apa::OracleSettings base, doubled;
    doubled.cutoff_scale = 2.0;
    const apa::OracleMomentSeries s1 = apa::oracle_moments(p20, kAlphaSq, taus, base);
    const apa::OracleMomentSeries s2 =
        apa::oracle_moments(p20, kAlphaSq, taus, doubled);
    double double_worst = 0.0;
    for (size_t j = 0; j < taus.size(); ++j) {
        double q1 = 0.0, p1 = 0.0, q2 = 0.0, p2 = 0.0;
        apa::squeezing_from_moments(s1.at[j], q1, p1);
        apa::squeezing_from_moments(s2.at[j], q2, p2);
        double_worst = std::max({double_worst, std::fabs(q1 - q2),
                                 std::fabs(p1 - p2)});
    }
    pass = pass && double_worst < 1e-8;

    const apa::DiagReport diag2 = apa::check_diagonalization(p20, 2.0);
    pass = pass && diag2.solved_sign_diagonalizes
           && diag2.kerr_rel_residual < 1e-6;

    const bool certificates = stash.c1_certificate < 1e-8
                              && stash.c2_worst_certificate < 1e-8;
    pass = pass && certificates;

    verdict("C6", pass,
            "invariants hold and every reported scalar carries convergence "
            "evidence (doubling where affordable, edge-flux certificates "
            "elsewhere)");
    std::printf("    hyperbolic identity %.3e; uncertainty floor %.12f; "
                "periodicity %.3e\n",
                hyper_worst, heis_min, period_worst);
    std::printf("    rho_c: |trace-1| %.3e, hermiticity %.3e, min eig %.3e, "
                "tau=0 vacuum residual %.3e\n",
                rho_trace_worst, rho_herm_worst, rho_eig_floor,
                rho_vacuum_residual);
    std::printf("    full tensor pass %d/%d (commutator %.3e, delta_c shift "
                "%.3e); doubling delta %.3e (< 1e-08, scale-2 top route %s); "
                "doubled transform chain kerr rel %.3e\n",
                ft.pass ? 1 : 0, ft_small.pass ? 1 : 0, ft.commutator_norm,
                ft.trace_distance_delta_c, double_worst,
                s2.routes.back().c_str(), diag2.kerr_rel_residual);
    std::printf("    certificates: omega_sw=0 %.3e, worst omega_sw>0 %.3e "
                "(< 1e-08)\n",
                stash.c1_certificate, stash.c2_worst_certificate);
    return pass;
}

// C7: the two independent assembly routes for the squeezing parameters agree
// in extended precision everywhere, and the discrepancy-flag plumbing that
// guards them actually trips when fed a disagreement
bool criterion_7() {
    double dual_worst = 0.0;
    bool flags_clean = true;
    for (double wsw : {0.0, 5.0, 10.0, 15.0, 20.0}) {
        const apa::DerivedParams p = reference_params(wsw);
        for (int j = 0; j < 400; ++j) {
            const apa::SqueezePoint s =
                apa::squeezing(p, kAlphaSq, 4.0 * kPi * j / 399.0);
            const double scale = std::max({1.0, std::fabs(s.s_q), std::fabs(s.s_p)});
            dual_worst = std::max(dual_worst, s.dual_residual / scale);
            flags_clean = flags_clean && !s.discrepancy;
        }
    }

    const apa::OracleReport trip =
        apa::make_report("probe", 1.0, 1.0 + 2e-6, 100, 1e-12, 1e-6);
    const apa::OracleReport clean =
        apa::make_report("probe", 1.0, 1.0 + 5e-7, 100, 1e-12, 1e-6);
    const bool mechanism = trip.discrepancy && !clean.discrepancy
                           && trip.converged;

    const bool pass = dual_worst <= 1e-10 && flags_clean && mechanism;
    verdict("C7", pass,
            "dual-route closed-form assembly agrees to 1e-10 and the "
            "discrepancy protocol trips exactly when it should");
    std::printf("    worst scaled dual-route residual %.3e (<= 1e-10); "
                "report flagging verified either side of the gate\n",
                dual_worst);
    return pass;
}

}  // namespace

int main() {
    std::printf("acceptance gate: seven criteria, pinned tolerances\n");
    Stash stash;
    criterion_1(stash);
    criterion_2(stash);
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6(stash);
    criterion_7();
    std::printf("acceptance: %d of 7 criteria passed\n", 7 - g_failures);
    return g_failures;
}
