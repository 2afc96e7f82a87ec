#pragma once

#include <utility>
#include <vector>

#include "dissipad/types.hpp"

namespace dissipad {

/// Eigenvalues of a general complex matrix (LAPACK zgeev, values only).
Vec dense_eigenvalues(const Mat& a);

/// Eigenvalues and right eigenvectors of a general complex matrix.
std::pair<Vec, Mat> dense_eigensystem(const Mat& a);

/// Sort complex values lexicographically by (Re, Im) after rounding at `round`.
void sort_spectrum(std::vector<cxd>& v, double round = tol::spectrum_round);

/// Greatest matching distance between two spectra as multisets: values are
/// greedily paired within a real-part window, robust against rounding-grid
/// straddling. Returns +inf when the sizes differ or a value has no partner.
double spectra_distance(std::vector<cxd> a, std::vector<cxd> b, double window);

/// Solve X S + S X^T = C for S (Bartels-Stewart via complex Schur of X).
RMat lyapunov_solve(const RMat& x, const RMat& c);

/// Pfaffian of a real antisymmetric matrix (via real Schur form).
double pfaffian(const RMat& a);

/// Dense matrix exponential (scaling and squaring).
Mat dense_expm(const Mat& a);

/// y = exp(t A) v for sparse A, adaptive Krylov (Arnoldi) stepping.
Vec krylov_expv(const SpMat& a, const Vec& v, double t, double tolerance = tol::krylov,
                int m = 40);

/// Invariant subspace of A near eigenvalue zero: subspace iteration on
/// (A - shift)^{-1} with a sparse LU factorization. Returns the k eigenvalues
/// of smallest magnitude (Ritz values of A on the converged subspace) and the
/// matching vectors (columns).
struct NearZeroResult {
  std::vector<cxd> eigenvalues;
  Mat vectors;
};
NearZeroResult eigs_near_zero(const SpMat& a, int k, int iterations = 30,
                              unsigned seed = 7);

/// Least-squares line fit y ~ a + b x; returns {slope, intercept, rms residual}.
struct LineFit {
  double slope = 0, intercept = 0, residual = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Max |a_ij - b_ij|.
double max_abs_diff(const Mat& a, const Mat& b);

/// Trace distance (1/2)||a - b||_1 of two Hermitian matrices.
double trace_distance(const Mat& a, const Mat& b);

}  // namespace dissipad
