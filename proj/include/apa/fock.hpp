#pragma once

// Dense truncated-Fock-space toolbox: ladder operators, displacement and
// squeeze unitaries, spectral matrix exponentials, overlaps, partial traces.
// Conventions, fixed once here:
//   D(beta) = exp(beta c+ - conj(beta) c)
//   S(xi)   = exp((conj(xi) c^2 - xi c+^2) / 2),  xi = |xi| e^{i theta}
//   |beta, xi> = S(xi) D(beta) |0>, so S c S+ = cosh|xi| c + e^{i theta} sinh|xi| c+.
// Truncation is always explicit: every constructor takes the space and the
// health of a state near the cutoff is measured by edge_leakage.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "params.hpp"

namespace apa {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FockSpace {
    int dim = 0;
    explicit FockSpace(int d) : dim(d) {
        if (d < 1) throw std::invalid_argument("FockSpace dim must be >= 1");
    }
};

// cutoff rule: mean occupancy m plus a ~10 sigma Poissonian tail margin
inline int cutoff_dim(double m) {
    return static_cast<int>(std::ceil(m + 10.0 * std::sqrt(m + 1.0) + 20.0));
}

inline Mat annihilation(const FockSpace& s) {
    Mat c = Mat::Zero(s.dim, s.dim);
    for (int k = 1; k < s.dim; ++k) c(k - 1, k) = std::sqrt(static_cast<double>(k));
    return c;
}

inline Mat creation(const FockSpace& s) { return annihilation(s).adjoint(); }

inline Mat number_op(const FockSpace& s) {
    Mat n = Mat::Zero(s.dim, s.dim);
    for (int k = 0; k < s.dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

inline double hermiticity_defect(const Mat& h) {
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

inline double unitarity_defect(const Mat& u) {
    return (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

// norm captured by the top `frac` of the basis; ~0 means the cutoff is healthy
inline double edge_leakage(const Vec& psi, double frac = 0.1) {
    const int dim = static_cast<int>(psi.size());
    const int band = std::max(1, static_cast<int>(std::floor(frac * dim)));
    return psi.tail(band).norm();
}

// U = exp(-i H t) by spectral decomposition; H must be Hermitian
inline Mat matrix_exp_hermitian(const Mat& h, double t) {
    const double defect = hermiticity_defect(h);
    if (defect > 1e-10)
        throw std::invalid_argument(
            "matrix_exp_hermitian: input is not Hermitian (defect " +
            std::to_string(defect) + ")");
    Eigen::SelfAdjointEigenSolver<Mat> es((h + h.adjoint()) / 2.0);
    const Eigen::VectorXd w = es.eigenvalues();
    const Mat& v = es.eigenvectors();
    Vec phase(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        phase(i) = std::exp(Complex(0.0, -w(i) * t));
    return v * phase.asDiagonal() * v.adjoint();
}

inline Mat displacement(const FockSpace& s, Complex beta, double leak_tol = 1e-8) {
    // exp(beta c+ - conj(beta) c) = exp(-i H), H = i (beta c+ - conj(beta) c)
    const Mat c = annihilation(s);
    const Mat h = Complex(0.0, 1.0) * (beta * c.adjoint() - std::conj(beta) * c);
    Mat u = matrix_exp_hermitian(h, 1.0);
    const double leak = edge_leakage(u.col(0));  // vacuum column = coherent state
    if (leak > leak_tol)
        throw TruncationError(
            "displacement: cutoff " + std::to_string(s.dim) +
            " too small for |beta| = " + std::to_string(std::abs(beta)) +
            " (norm leakage " + std::to_string(leak) + ")");
    return u;
}

inline Mat squeeze(const FockSpace& s, Complex xi, double leak_tol = 1e-8) {
    // exp((conj(xi) c^2 - xi c+^2)/2) = exp(-i H), H = (i/2)(conj(xi) c^2 - xi c+^2)
    const Mat c = annihilation(s);
    const Mat c2 = c * c;
    const Mat h = Complex(0.0, 0.5) * (std::conj(xi) * c2 - xi * c2.adjoint());
    Mat u = matrix_exp_hermitian(h, 1.0);
    const double leak = edge_leakage(u.col(0));  // vacuum column = squeezed vacuum
    if (leak > leak_tol)
        throw TruncationError(
            "squeeze: cutoff " + std::to_string(s.dim) +
            " too small for |xi| = " + std::to_string(std::abs(xi)) +
            " (norm leakage " + std::to_string(leak) + ")");
    return u;
}

// truncated coherent amplitudes e^{-|b|^2/2} b^k / sqrt(k!), renormalized;
// throws if the cutoff visibly clips the state
inline Vec coherent_state(const FockSpace& s, Complex beta, double leak_tol = 1e-8) {
    Vec psi(s.dim);
    psi(0) = Complex(std::exp(-0.5 * std::norm(beta)), 0.0);
    for (int k = 1; k < s.dim; ++k)
        psi(k) = psi(k - 1) * beta / std::sqrt(static_cast<double>(k));
    const double leak = edge_leakage(psi);
    const double nrm = psi.norm();
    if (!(nrm > 0.0) || leak > leak_tol)
        throw TruncationError(
            "coherent_state: cutoff " + std::to_string(s.dim) +
            " too small for |beta| = " + std::to_string(std::abs(beta)) +
            " (norm leakage " + std::to_string(leak) + ")");
    return psi / nrm;
}

// |beta, xi> = S(xi) D(beta) |0>
inline Vec squeezed_coherent(const FockSpace& s, Complex beta, Complex xi,
                             double leak_tol = 1e-8) {
    const Vec base = coherent_state(s, beta, leak_tol);
    Vec psi = squeeze(s, xi) * base;
    const double leak = edge_leakage(psi);
    if (leak > leak_tol)
        throw TruncationError(
            "squeezed_coherent: cutoff " + std::to_string(s.dim) +
            " too small for beta, xi (norm leakage " + std::to_string(leak) + ")");
    return psi / psi.norm();
}

// phase twist exp(-i w t c+c): the free Bogoliubov rotation
inline Vec evolve_free(const Vec& psi, double omega_t) {
    Vec out(psi.size());
    for (Eigen::Index k = 0; k < psi.size(); ++k)
        out(k) = psi(k) * std::exp(Complex(0.0, -omega_t * static_cast<double>(k)));
    return out;
}

inline Complex overlap(const Vec& a, const Vec& b) { return a.dot(b); }

// trace out the first factor of a state on A (x) B, index (i,j) -> i*dim_b + j
inline Mat partial_trace_first(const Mat& rho, int dim_a, int dim_b) {
    if (rho.rows() != static_cast<Eigen::Index>(dim_a) * dim_b || rho.rows() != rho.cols())
        throw std::invalid_argument("partial_trace_first: dimension mismatch");
    Mat out = Mat::Zero(dim_b, dim_b);
    for (int i = 0; i < dim_a; ++i)
        out += rho.block(static_cast<Eigen::Index>(i) * dim_b,
                         static_cast<Eigen::Index>(i) * dim_b, dim_b, dim_b);
    return out;
}

inline double trace_distance(const Mat& a, const Mat& b) {
    Mat d = a - b;
    d = (d + Mat(d.adjoint())) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(d);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double min_eigenvalue(const Mat& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es((rho + Mat(rho.adjoint())) / 2.0);
    return es.eigenvalues().minCoeff();
}

}  // namespace apa
