#pragma once

#include <complex>
#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dissipad {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cxd>;
using Triplet = Eigen::Triplet<cxd>;

inline constexpr cxd I_UNIT{0.0, 1.0};

// Numerical thresholds used across the library. Tests assert against the
// same constants so a change here propagates everywhere.
namespace tol {
inline constexpr double hermiticity = 1e-12;      // relative Frobenius
inline constexpr double normalization = 1e-12;    // u^2 + v^2 = 1
inline constexpr double orthonormal = 1e-10;      // eigenbasis columns
inline constexpr double pairing = 1e-10;          // e_{-a} = -e_a
inline constexpr double eig_residual = 1e-10;     // H psi - e psi
inline constexpr double antisymmetry = 1e-10;     // anomalous correlator
inline constexpr double occupation = 1e-10;       // normal eigenvalues in [0,1]
inline constexpr double majorana_purity = 1e-8;   // ||G_M^2 + 1||
inline constexpr double dark_mode_factor = 1e-8;  // vs max overlap
inline constexpr double null_space_rel = 1e-10;   // singular values vs largest
inline constexpr double degeneracy_ratio = 1e-8;  // zero-cluster gap test
inline constexpr double steady_residual = 1e-8;   // ||L(rho)||
inline constexpr double psd = 1e-8;               // min eigenvalue of rho
inline constexpr double trace_preserving = 1e-10;
inline constexpr double ode_rel = 1e-9;           // covariance integrator
inline constexpr double ode_abs = 1e-12;
inline constexpr double krylov = 1e-9;            // expm-vector propagation
inline constexpr double spectrum_round = 1e-12;   // sort rounding
inline constexpr double zero_mode = 1e-10;        // |eps| treated as zero mode
inline constexpr double weak_symmetry = 1e-10;
}  // namespace tol

}  // namespace dissipad
