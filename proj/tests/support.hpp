// Shared helpers for the test suites: small Fock-space oracles kept
// independent of the covariance-flow implementation they are used to check.
#pragma once

#include <random>
#include <vector>

#include "dissipad/gaussian.hpp"
#include "dissipad/jw.hpp"
#include "dissipad/linalg.hpp"
#include "dissipad/qops.hpp"

namespace dissipad::testing {

// Two-point functions of a Fock-space density matrix, straight from the
// operator definitions.
inline PairCovariance covariance_from_density(const Mat& rho, int n_sites) {
  PairCovariance cov;
  cov.normal = Mat(n_sites, n_sites);
  cov.anomalous = Mat(n_sites, n_sites);
  std::vector<SpMat> c(n_sites);
  for (int k = 0; k < n_sites; ++k) c[k] = fock_annihilation(n_sites, k);
  for (int i = 0; i < n_sites; ++i)
    for (int j = 0; j < n_sites; ++j) {
      cov.normal(i, j) = (Mat(SpMat(c[i].adjoint()) * c[j]) * rho).trace();
      cov.anomalous(i, j) = (Mat(c[i] * c[j]) * rho).trace();
    }
  return cov;
}

inline PairCovariance covariance_from_state(const Vec& psi, int n_sites) {
  return covariance_from_density(psi * psi.adjoint(), n_sites);
}

// The paired state prod_g (u_g + v_g d_g^dag d_{-g}^dag) |0>, built directly
// from creation operators.
inline Vec paired_state_fock(const LatticeSpec& spec, const EigenBasis& basis,
                             const BogoliubovData& bog) {
  const int n = spec.n_sites();
  const long dim = 1L << n;
  std::vector<SpMat> cdag(n);
  for (int k = 0; k < n; ++k) cdag[k] = SpMat(fock_annihilation(n, k).adjoint());
  Vec psi = Vec::Zero(dim);
  psi(0) = 1.0;
  for (int g = 0; g < spec.n_pairs; ++g) {
    SpMat dg(dim, dim), dmg(dim, dim);
    for (int i = 0; i < n; ++i) {
      dg += basis.wavefunctions(i, g) * cdag[i];
      dmg += basis.wavefunctions(i, spec.n_pairs + g) * cdag[i];
    }
    psi = bog.u_alpha(g) * psi + bog.v_alpha(g) * (dg * (dmg * psi));
  }
  return psi;
}

// Dense null vector of a small Liouvillian, Hermitized and normalized;
// deliberately does not share code with spin::steady_states.
inline Mat dense_steady_state(const SpMat& liouvillian, long dim_rho) {
  auto [w, vr] = dense_eigensystem(Mat(liouvillian));
  int best = 0;
  for (int k = 1; k < w.size(); ++k)
    if (std::abs(w(k)) < std::abs(w(best))) best = k;
  Mat rho = unvectorize(vr.col(best), dim_rho);
  rho = (rho + rho.adjoint()) / 2.0;
  double tr = rho.trace().real();
  if (tr < 0) rho = -rho;
  return rho / std::abs(tr);
}

// Random mixture of product occupation states: a Gaussian state with
// diagonal normal correlator, convenient for evolution cross-checks.
inline void random_product_state(int n_sites, unsigned seed, Mat& rho,
                                 PairCovariance& cov) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  RVec filling(n_sites);
  for (int i = 0; i < n_sites; ++i) filling(i) = unif(rng);
  const long dim = 1L << n_sites;
  rho = Mat::Zero(dim, dim);
  for (long s = 0; s < dim; ++s) {
    double p = 1.0;
    for (int i = 0; i < n_sites; ++i)
      p *= ((s >> i) & 1) ? filling(i) : 1.0 - filling(i);
    rho(s, s) = p;
  }
  cov.normal = Mat::Zero(n_sites, n_sites);
  cov.anomalous = Mat::Zero(n_sites, n_sites);
  for (int i = 0; i < n_sites; ++i) cov.normal(i, i) = filling(i);
}

inline double covariance_distance(const PairCovariance& a, const PairCovariance& b) {
  RMat d = majorana_covariance(a) - majorana_covariance(b);
  Eigen::JacobiSVD<RMat> svd(d);
  return 0.5 * svd.singularValues().sum();
}

inline std::vector<double> random_couplings(int n, unsigned seed, double lo = 0.5,
                                            double hi = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> j(n);
  for (double& x : j) x = u(rng);
  return j;
}

}  // namespace dissipad::testing
