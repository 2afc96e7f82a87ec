#include "dissipad/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "dissipad/errors.hpp"

namespace dissipad {

Vec dense_eigenvalues(const Mat& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Mat work = a;  // zgeev overwrites
  Vec w(n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n,
                                  w.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw Error("zgeev failed, info=" + std::to_string(info));
  return w;
}

std::pair<Vec, Mat> dense_eigensystem(const Mat& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Mat work = a;
  Vec w(n);
  Mat vr(n, n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n,
                                  w.data(), nullptr, 1, vr.data(), n);
  if (info != 0) throw Error("zgeev failed, info=" + std::to_string(info));
  return {w, vr};
}

void sort_spectrum(std::vector<cxd>& v, double round) {
  auto key = [round](const cxd& z) {
    return std::pair<double, double>(std::round(z.real() / round) * round,
                                     std::round(z.imag() / round) * round);
  };
  std::sort(v.begin(), v.end(),
            [&](const cxd& a, const cxd& b) { return key(a) < key(b); });
}

double spectra_distance(std::vector<cxd> a, std::vector<cxd> b, double window) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  auto by_real = [](const cxd& x, const cxd& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), by_real);
  std::sort(b.begin(), b.end(), by_real);
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  size_t lo = 0;
  for (const cxd& z : a) {
    while (lo < b.size() && (used[lo] || b[lo].real() < z.real() - window)) ++lo;
    double best = std::numeric_limits<double>::infinity();
    size_t best_j = b.size();
    for (size_t j = lo; j < b.size() && b[j].real() <= z.real() + window; ++j) {
      if (used[j]) continue;
      const double d = std::abs(b[j] - z);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (best_j == b.size()) return std::numeric_limits<double>::infinity();
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

// Solve X S + S X^T = C. Complex Schur X = Q T Q^H turns the problem into a
// triangular Sylvester solve, columns processed back to front.
RMat lyapunov_solve(const RMat& x, const RMat& c) {
  const long n = x.rows();
  Eigen::ComplexSchur<Mat> schur(x.cast<cxd>());
  const Mat& t = schur.matrixT();
  const Mat& q = schur.matrixU();
  // X = Q T Q^H; write S = conj(Q) Y Q^H ... using S real: substitute
  // S' = Q^H S conj(Q), giving T S' + S' T^T = Q^H C conj(Q).
  Mat cp = q.adjoint() * c.cast<cxd>() * q.conjugate();
  Mat y = Mat::Zero(n, n);
  for (long j = n - 1; j >= 0; --j) {
    Vec rhs = cp.col(j);
    for (long k = j + 1; k < n; ++k) rhs -= t(j, k) * y.col(k);
    Mat lhs = t + t(j, j) * Mat::Identity(n, n);
    y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  Mat s = q * y * q.transpose();
  return s.real();
}

// Real Schur of an antisymmetric matrix is block diagonal with 2x2 blocks
// [[0, b], [-b, 0]]; Pf = det(Q) * prod(b).
double pfaffian(const RMat& a) {
  const long n = a.rows();
  if (n % 2 != 0) return 0.0;
  if (n == 0) return 1.0;
  Eigen::RealSchur<RMat> schur(a);
  const RMat& t = schur.matrixT();
  const RMat& q = schur.matrixU();
  double pf = 1.0;
  for (long i = 0; i + 1 < n; i += 2) pf *= t(i, i + 1);
  return pf * q.determinant();
}

Mat dense_expm(const Mat& a) { return a.exp(); }

// Arnoldi approximation of exp(tau A) v on one substep; Expokit-style local
// error estimate from the last Krylov residual column.
namespace {
struct ArnoldiStep {
  Vec result;
  double err;
  double active_norm;  // infinity norm of the projected Hessenberg block
};

ArnoldiStep arnoldi_expv(const SpMat& a, const Vec& v, double tau, int m) {
  const long n = v.size();
  const double beta = v.norm();
  ArnoldiStep out;
  if (beta == 0.0) {
    out.result = v;
    out.err = 0.0;
    return out;
  }
  Mat basis(n, m + 1);
  Mat h = Mat::Zero(m + 2, m + 2);
  basis.col(0) = v / beta;
  int used = m;
  bool breakdown = false;
  for (int j = 0; j < m; ++j) {
    Vec w = a * basis.col(j);
    for (int i = 0; i <= j; ++i) {
      h(i, j) = basis.col(i).dot(w);
      w -= h(i, j) * basis.col(i);
    }
    // one re-orthogonalization pass keeps the basis clean for stiff L
    for (int i = 0; i <= j; ++i) {
      cxd corr = basis.col(i).dot(w);
      h(i, j) += corr;
      w -= corr * basis.col(i);
    }
    double hnext = w.norm();
    if (hnext < 1e-14 * beta) {
      used = j + 1;
      breakdown = true;
      break;
    }
    h(j + 1, j) = hnext;
    if (j + 1 <= m) basis.col(j + 1) = w / hnext;
  }
  int k = used;
  Mat hk = h.topLeftCorner(k + 2, k + 2);
  out.active_norm = 0.0;
  for (int i = 0; i < k; ++i) {
    double s = 0;
    for (int j = 0; j < k; ++j) s += std::abs(h(i, j));
    out.active_norm = std::max(out.active_norm, s);
  }
  if (!breakdown) {
    // augmented matrix trick: exp of H with an extra corner block yields the
    // phi-function terms of the a-posteriori error expansion
    hk(k, k + 1) = 1.0;
    hk.row(k).head(k).setZero();
    hk(k, k) = 0.0;
  } else {
    hk.setZero();
    hk.topLeftCorner(k, k) = h.topLeftCorner(k, k);
  }
  Mat f = dense_expm(tau * hk);
  out.result = beta * (basis.leftCols(k) * f.col(0).head(k));
  if (breakdown) {
    out.err = 0.0;
  } else {
    const double avnorm = (a * basis.col(k)).norm();
    const double p1 = std::abs(beta * f(k, 0)) * std::abs(h(k, k - 1));
    const double p2 = std::abs(beta * f(k + 1, 0)) * std::abs(h(k, k - 1)) * avnorm;
    if (p1 > 10.0 * p2) out.err = p2;
    else if (p1 > p2) out.err = p1 * p2 / (p1 - p2);
    else out.err = p1;
  }
  return out;
}
}  // namespace

Vec krylov_expv(const SpMat& a, const Vec& v, double t, double tolerance, int m) {
  if (t == 0.0) return v;
  double anorm = 0.0;  // crude infinity-norm estimate for the first step size
  for (int k = 0; k < a.outerSize(); ++k) {
    double s = 0;
    for (SpMat::InnerIterator it(a, k); it; ++it) s += std::abs(it.value());
    anorm = std::max(anorm, s);
  }
  if (anorm == 0.0) return v;
  double done = 0.0;
  double tau = std::min(t, 10.0 * m / anorm);
  Vec y = v;
  int guard = 0;
  while (done < t) {
    tau = std::min(tau, t - done);
    ArnoldiStep step = arnoldi_expv(a, y, tau, m);
    // error budget proportional to the fraction of the interval covered;
    // additionally distrust steps far outside the Krylov convergence region
    // of the *active* spectrum (the a-posteriori estimate turns optimistic
    // there), while still permitting long steps once the dynamics is slow
    double tol_here = tolerance * std::max(1.0, y.norm()) * std::max(tau / t, 1e-3);
    bool in_trust_region = tau * step.active_norm <= 2.5 * m;
    if ((step.err > tol_here || !in_trust_region) && tau > 1e-12 * t) {
      tau *= 0.5;
      if (++guard > 400)
        throw IntegratorError("krylov step underflow at t", done);
      continue;
    }
    y = step.result;
    done += tau;
    guard = 0;
    if (step.err < 0.1 * tol_here) tau *= 1.8;
  }
  return y;
}

NearZeroResult eigs_near_zero(const SpMat& a, int k, int iterations, unsigned seed) {
  const long n = a.rows();
  k = std::min<long>(k, n);
  SpMat shifted = a;
  // tiny complex shift keeps the LU factorization away from the exact kernel
  double scale = 0.0;
  for (int c = 0; c < a.outerSize(); ++c)
    for (SpMat::InnerIterator it(a, c); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  if (scale == 0.0) scale = 1.0;
  const cxd shift = scale * cxd(1e-13, 1e-13);
  SpMat ident(n, n);
  ident.setIdentity();
  shifted = a - shift * ident;
  shifted.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(shifted);
  lu.factorize(shifted);
  if (lu.info() != Eigen::Success)
    throw Error("sparse LU factorization failed in eigs_near_zero");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat basis(n, k);
  for (long j = 0; j < k; ++j)
    for (long i = 0; i < n; ++i) basis(i, j) = cxd(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr0(basis);
  basis = qr0.householderQ() * Mat::Identity(n, k);

  for (int it = 0; it < iterations; ++it) {
    Mat next(n, k);
    for (long j = 0; j < k; ++j) next.col(j) = lu.solve(basis.col(j));
    Eigen::HouseholderQR<Mat> qr(next);
    basis = qr.householderQ() * Mat::Identity(n, k);
  }
  // Rayleigh-Ritz on A restricted to the converged subspace
  Mat ab(n, k);
  for (long j = 0; j < k; ++j) ab.col(j) = a * basis.col(j);
  Mat small = basis.adjoint() * ab;
  auto [w, vr] = dense_eigensystem(small);
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return std::abs(w(i)) < std::abs(w(j)); });
  NearZeroResult res;
  res.vectors = Mat(n, k);
  for (int i = 0; i < k; ++i) {
    res.eigenvalues.push_back(w(order[i]));
    res.vectors.col(i) = basis * vr.col(order[i]);
    res.vectors.col(i).normalize();
  }
  return res;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const size_t n = x.size();
  if (n < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double rss = 0;
  for (size_t i = 0; i < n; ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    rss += r * r;
  }
  f.residual = std::sqrt(rss / n);
  return f;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double trace_distance(const Mat& a, const Mat& b) {
  Mat d = a - b;
  Eigen::SelfAdjointEigenSolver<Mat> es((d + d.adjoint()) / 2.0);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace dissipad
