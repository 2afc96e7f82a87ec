#include "dissipad/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dissipad/errors.hpp"
#include "dissipad/linalg.hpp"

namespace dissipad {

namespace {

// Diagonal chiral sign vector (-1 on A, +1 on B) via two-coloring; mirrors
// the check in verify_chiral but returns the signs themselves.
std::vector<int> coloring(const Mat& h) {
  const int n = static_cast<int>(h.rows());
  const double cut = 1e-14 * std::max(1e-300, h.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i)
    if (std::abs(h(i, i)) > cut) return {};
  std::vector<int> color(n, 0);
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    color[start] = -1;
    stack.push_back(start);
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (j == i || std::abs(h(i, j)) <= cut) continue;
        if (color[j] == 0) {
          color[j] = -color[i];
          stack.push_back(j);
        } else if (color[j] == color[i]) {
          return {};
        }
      }
    }
  }
  return color;
}

void gauge_fix_column(Mat& psi, int col, int ref_site) {
  const double big = psi.col(col).cwiseAbs().maxCoeff();
  int ref = ref_site;
  if (std::abs(psi(ref, col)) <= 1e-8 * big) {
    ref = 0;
    while (std::abs(psi(ref, col)) <= 1e-8 * big) ++ref;
  }
  cxd z = psi(ref, col);
  psi.col(col) *= std::abs(z) / z;
}

}  // namespace

EigenBasis chiral_paired_basis(const LatticeSpec& spec) {
  spec.validate();
  const int n = spec.n_sites();
  const int np = spec.n_pairs;
  std::vector<int> sign = coloring(spec.hopping);
  if (sign.empty())
    throw Error("hopping matrix admits no diagonal sign chiral operator");

  Eigen::SelfAdjointEigenSolver<Mat> es(spec.hopping);
  const RVec& w = es.eigenvalues();  // ascending
  const double scale = std::max(w.cwiseAbs().maxCoeff(), 1e-300);
  for (int k = 0; k < n; ++k)
    if (std::abs(w(k)) < tol::zero_mode * scale)
      throw ZeroModeError("single-particle zero mode: +/- pairing undefined");

  EigenBasis basis;
  basis.energies = RVec(n);
  basis.wavefunctions = Mat(n, n);
  int g = 0;
  for (int k = 0; k < n; ++k) {
    if (w(k) <= 0) continue;
    basis.energies(g) = w(k);
    basis.energies(np + g) = -w(k);
    basis.wavefunctions.col(g) = es.eigenvectors().col(k);
    // the partner is the chiral image, exact for any degeneracy pattern
    for (int i = 0; i < n; ++i)
      basis.wavefunctions(i, np + g) =
          double(sign[i]) * basis.wavefunctions(i, g);
    ++g;
  }
  if (g != np) throw ZeroModeError("spectrum not symmetric about zero");
  for (int c = 0; c < n; ++c)
    gauge_fix_column(basis.wavefunctions, c, spec.diss_site_0);
  return basis;
}

EigenBasis eigenbasis(const LatticeSpec& spec) {
  ChiralReport rep = verify_chiral(spec);
  if (!rep.chiral_ok)
    throw Error("eigenbasis requires a chiral-symmetric hopping matrix");
  return chiral_paired_basis(spec);
}

BogoliubovData bogoliubov(const LatticeSpec& spec, const EigenBasis& basis) {
  const int np = basis.n_pairs();
  const int s0 = spec.diss_site_0, s1 = spec.diss_site_1;
  // ratio condition must hold or no coefficient choice can kill the jump
  double worst = 0;
  int worst_g = 0;
  for (int g = 0; g < np; ++g) {
    const cxd lhs = basis.wavefunctions(s0, g) * std::conj(basis.wavefunctions(s1, g));
    const cxd rhs = basis.wavefunctions(s0, np + g) *
                    std::conj(basis.wavefunctions(s1, np + g));
    const double mag = std::abs(lhs) + std::abs(rhs);
    const double res = mag > 1e-300 ? std::abs(lhs + rhs) / mag : 0.0;
    if (res > worst) {
      worst = res;
      worst_g = g + 1;
    }
  }
  if (worst > 1e-8)
    throw ConstraintError(
        "dissipator placement violates the pairing ratio condition", worst_g,
        worst);

  BogoliubovData bog;
  bog.u = spec.u;
  bog.v = spec.v;
  bog.phi = spec.phi;
  bog.u_alpha = Vec(np);
  bog.v_alpha = Vec(np);
  bog.n_alpha = RVec(np);
  bog.x_gamma = Vec(np);
  const cxd vphase = spec.v * std::exp(I_UNIT * spec.phi);
  for (int g = 0; g < np; ++g) {
    const cxd a0 = basis.wavefunctions(s0, g);
    const cxd b1 = std::conj(basis.wavefunctions(s1, np + g));
    const double ng = std::sqrt(spec.u * spec.u * std::norm(a0) +
                                spec.v * spec.v * std::norm(b1));
    bog.n_alpha(g) = ng;
    if (ng > 1e-300) {
      bog.u_alpha(g) = spec.u * a0 / ng;
      bog.v_alpha(g) = vphase * b1 / ng;
    } else {
      bog.u_alpha(g) = 0;
      bog.v_alpha(g) = 0;
    }
    const cxd b0 = basis.wavefunctions(s0, np + g);
    bog.x_gamma(g) = std::abs(b0) > 1e-300 ? a0 / b0 : cxd(0, 0);
  }
  return bog;
}

PairCovariance analytic_steady_correlators(const BogoliubovData& bog,
                                           const EigenBasis& basis) {
  const int np = basis.n_pairs();
  const int n = 2 * np;
  const double nmax = bog.n_alpha.maxCoeff();
  std::vector<int> dark;
  for (int g = 0; g < np; ++g)
    if (bog.n_alpha(g) <= tol::dark_mode_factor * nmax) dark.push_back(g + 1);
  if (!dark.empty())
    throw DarkModeError("dark modes present: steady state not unique", dark);

  PairCovariance cov;
  cov.normal = Mat::Zero(n, n);
  cov.anomalous = Mat::Zero(n, n);
  const Mat& psi = basis.wavefunctions;
  for (int g = 0; g < np; ++g) {
    const double occ = std::norm(bog.v_alpha(g));
    cov.normal += occ * (psi.col(g).conjugate() * psi.col(g).transpose() +
                         psi.col(np + g).conjugate() * psi.col(np + g).transpose());
    // <d_g d_{-g}> = -u_g^* v_g in the pair state (u_g + v_g d_g^+ d_{-g}^+)|0>
    const cxd f = -std::conj(bog.u_alpha(g)) * bog.v_alpha(g);
    cov.anomalous += f * (psi.col(g) * psi.col(np + g).transpose() -
                          psi.col(np + g) * psi.col(g).transpose());
  }
  return cov;
}

void jump_vectors(const LatticeSpec& spec, Vec& p, Vec& q) {
  const int n = spec.n_sites();
  p = Vec::Zero(n);
  q = Vec::Zero(n);
  p(spec.diss_site_0) = spec.u;
  q(spec.diss_site_1) = -spec.v * std::exp(I_UNIT * spec.phi);
}

void covariance_flow(const LatticeSpec& spec, RMat& drift, RMat& source) {
  const int n = spec.n_sites();
  const int m = 2 * n;
  RMat a = RMat::Zero(m, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cxd h = spec.hopping(i, j);
      a(2 * i, 2 * j) += h.imag();
      a(2 * i, 2 * j + 1) += h.real();
      a(2 * i + 1, 2 * j) -= h.real();
      a(2 * i + 1, 2 * j + 1) += h.imag();
    }
  Vec p, q;
  jump_vectors(spec, p, q);
  Vec ell(m);
  for (int j = 0; j < n; ++j) {
    ell(2 * j) = 0.5 * (p(j) + q(j));
    ell(2 * j + 1) = 0.5 * I_UNIT * (p(j) - q(j));
  }
  Mat bath = spec.gamma * (ell * ell.adjoint());
  drift = a - 2.0 * bath.real();
  source = 4.0 * bath.imag();
}

PairCovariance vacuum_covariance(int n_sites) {
  PairCovariance cov;
  cov.normal = Mat::Zero(n_sites, n_sites);
  cov.anomalous = Mat::Zero(n_sites, n_sites);
  return cov;
}

RMat majorana_covariance(const PairCovariance& cov) {
  const int n = cov.n_sites();
  RMat g(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cxd gg = cov.normal(i, j);
      const cxd f = cov.anomalous(i, j);
      const double d = i == j ? 1.0 : 0.0;
      g(2 * i, 2 * j) = -2.0 * (f.imag() + gg.imag());
      g(2 * i, 2 * j + 1) = 2.0 * f.real() + 2.0 * gg.real() - d;
      g(2 * i + 1, 2 * j) = 2.0 * f.real() - 2.0 * gg.real() + d;
      g(2 * i + 1, 2 * j + 1) = 2.0 * (f.imag() - gg.imag());
    }
  return g;
}

PairCovariance covariance_from_majorana(const RMat& gamma) {
  const int n = static_cast<int>(gamma.rows()) / 2;
  PairCovariance cov;
  cov.normal = Mat(n, n);
  cov.anomalous = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double gee = gamma(2 * i, 2 * j);
      const double goo = gamma(2 * i + 1, 2 * j + 1);
      const double geo = gamma(2 * i, 2 * j + 1);
      const double goe = gamma(2 * i + 1, 2 * j);
      const double d = i == j ? 1.0 : 0.0;
      cov.normal(i, j) =
          cxd(0.25 * (geo - goe) + 0.5 * d, -0.25 * (gee + goo));
      cov.anomalous(i, j) = cxd(0.25 * (geo + goe), 0.25 * (goo - gee));
    }
  return cov;
}

double majorana_purity_residual(const RMat& gamma) {
  const long m = gamma.rows();
  return (gamma * gamma + RMat::Identity(m, m)).cwiseAbs().maxCoeff();
}

double fermion_parity(const PairCovariance& cov) {
  return pfaffian(majorana_covariance(cov));
}

double mode_occupation(const PairCovariance& cov, const Vec& p, const Vec& q) {
  const int n = cov.n_sites();
  cxd acc = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      acc += std::conj(p(i)) * p(j) * cov.normal(i, j);
      acc -= std::conj(p(i)) * q(j) * std::conj(cov.anomalous(i, j));
      acc += std::conj(q(i)) * p(j) * cov.anomalous(i, j);
      acc += std::conj(q(i)) * q(j) *
             ((i == j ? 1.0 : 0.0) - cov.normal(j, i));
    }
  return acc.real();
}

double energy_expectation(const Mat& hopping, const PairCovariance& cov) {
  return (hopping.cwiseProduct(cov.normal)).sum().real();
}

void PairCovariance::validate(bool assert_pure) const {
  const int n = n_sites();
  if ((normal - normal.adjoint()).cwiseAbs().maxCoeff() > tol::occupation)
    throw Error("normal correlator not Hermitian");
  if ((anomalous + anomalous.transpose()).cwiseAbs().maxCoeff() > tol::antisymmetry)
    throw Error("anomalous correlator not antisymmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(normal);
  if (es.eigenvalues().minCoeff() < -tol::occupation ||
      es.eigenvalues().maxCoeff() > 1.0 + tol::occupation)
    throw Error("occupation eigenvalues leave [0,1]");
  if (assert_pure && n > 0) {
    if (majorana_purity_residual(majorana_covariance(*this)) > tol::majorana_purity)
      throw Error("state is not a pure Gaussian state");
  }
}

namespace {

// Dormand-Prince 5(4) on the matrix-valued linear flow.
std::vector<RMat> rk45_covariance(const RMat& x, const RMat& y, RMat g0,
                                  const std::vector<double>& times) {
  auto rhs = [&](const RMat& g) -> RMat {
    RMat xg = x * g;
    return xg - xg.transpose() + y;  // X G + G X^T for antisymmetric G
  };
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  std::vector<RMat> out;
  double t = times.empty() ? 0.0 : 0.0;
  double h = 0.01;
  RMat g = std::move(g0);
  for (double target : times) {
    while (t < target) {
      h = std::min(h, target - t);
      RMat k1 = rhs(g);
      RMat k2 = rhs(g + h * (k1 / 5.0));
      RMat k3 = rhs(g + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
      RMat k4 = rhs(g + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
      RMat k5 = rhs(g + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                             64448.0 / 6561 * k3 - 212.0 / 729 * k4));
      RMat k6 = rhs(g + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                             46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                             5103.0 / 18656 * k5));
      RMat g5 = g + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                         2187.0 / 6784 * k5 + 11.0 / 84 * k6);
      RMat k7 = rhs(g5);
      RMat err = h * (71.0 / 57600 * k1 - 71.0 / 16695 * k3 + 71.0 / 1920 * k4 -
                      17253.0 / 339200 * k5 + 22.0 / 525 * k6 - 1.0 / 40 * k7);
      double scale = tol::ode_abs +
                     tol::ode_rel * std::max(g.cwiseAbs().maxCoeff(),
                                             g5.cwiseAbs().maxCoeff());
      double enorm = err.cwiseAbs().maxCoeff() / scale;
      if (enorm <= 1.0) {
        t += h;
        g = std::move(g5);
      }
      double factor = enorm > 0 ? 0.9 * std::pow(enorm, -0.2) : 5.0;
      h *= std::clamp(factor, 0.2, 5.0);
      if (h < 1e-14 * std::max(1.0, target))
        throw IntegratorError("covariance integrator step underflow", t);
      (void)c2; (void)c3; (void)c4; (void)c5;
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace

std::vector<PairCovariance> evolve_covariance(const LatticeSpec& spec,
                                              const PairCovariance& state0,
                                              const std::vector<double>& times) {
  spec.validate();
  for (size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0) throw Error("evolve_covariance: negative time");
    if (k > 0 && times[k] <= times[k - 1])
      throw Error("evolve_covariance: times must increase");
  }
  RMat x, y;
  covariance_flow(spec, x, y);
  std::vector<RMat> traj = rk45_covariance(x, y, majorana_covariance(state0), times);
  std::vector<PairCovariance> out;
  out.reserve(traj.size());
  for (const RMat& g : traj) out.push_back(covariance_from_majorana(g));
  return out;
}

RapiditySpectrum rapidity_spectrum(const LatticeSpec& spec) {
  spec.validate();
  RMat x, y;
  covariance_flow(spec, x, y);
  Vec ev = dense_eigenvalues(x.cast<cxd>());
  RapiditySpectrum rs;
  rs.rates.assign(ev.data(), ev.data() + ev.size());
  double scale = 0;
  for (const cxd& z : rs.rates) scale = std::max(scale, std::abs(z));
  const double cut = 1e-12 * std::max(scale, 1e-300);
  double slowest = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (cxd& z : rs.rates) {
    if (z.real() > 0 && z.real() < cut) z = cxd(0.0, z.imag());
    if (std::abs(z.real()) > cut) {
      any = true;
      slowest = std::max(slowest, z.real());
    }
  }
  sort_spectrum(rs.rates);
  rs.gap = any ? -slowest : 0.0;
  return rs;
}

PairCovariance steady_covariance(const LatticeSpec& spec) {
  RapiditySpectrum rs = rapidity_spectrum(spec);
  double scale = 0;
  for (const cxd& z : rs.rates) scale = std::max(scale, std::abs(z));
  bool all_decay = true;
  for (const cxd& z : rs.rates)
    if (z.real() > -1e-12 * std::max(scale, 1e-300)) all_decay = false;
  if (!all_decay) {
    std::vector<int> dark;
    try {
      dark = verify_chiral(spec).dark_modes;
    } catch (const Error&) {
    }
    throw DarkModeError("zero rapidity gap: fixed point not unique", dark);
  }
  RMat x, y;
  covariance_flow(spec, x, y);
  RMat g = lyapunov_solve(x, -y);
  g = 0.5 * (g - g.transpose());  // clean antisymmetry
  return covariance_from_majorana(g);
}

double log_negativity(const BogoliubovData& bog) {
  double e = 0;
  for (int g = 0; g < bog.u_alpha.size(); ++g)
    e += std::log2(1.0 + 2.0 * std::abs(bog.u_alpha(g) * bog.v_alpha(g)));
  return e;
}

GapTable gap_scaling(const std::function<LatticeSpec(int)>& family,
                     const std::vector<int>& n_values) {
  GapTable table;
  std::vector<double> lx, ly;
  for (int n : n_values) {
    LatticeSpec spec = family(n);
    if (!verify_chiral(spec).ok())
      throw Error("gap_scaling: family member fails the symmetry checks");
    double gap = rapidity_spectrum(spec).gap;
    table.n_values.push_back(n);
    table.gaps.push_back(gap);
    lx.push_back(std::log(double(n)));
    ly.push_back(std::log(gap));
  }
  LineFit f = fit_line(lx, ly);
  table.slope = f.slope;
  table.residual = f.residual;
  return table;
}

}  // namespace dissipad
