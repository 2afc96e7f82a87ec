#include "dissipad/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "dissipad/errors.hpp"
#include "dissipad/gaussian.hpp"

namespace dissipad {

void LatticeSpec::set_v2(double v2) {
  if (v2 < 0.0 || v2 > 1.0) throw Error("v^2 must lie in [0,1]");
  v = std::sqrt(v2);
  u = std::sqrt(1.0 - v2);
}

int LatticeSpec::chain_index(int label, int n_pairs) {
  if (label == 0 || label < -n_pairs || label > n_pairs)
    throw Error("chain site label out of range (labels run -N..-1, 1..N)");
  return label < 0 ? label + n_pairs : label + n_pairs - 1;
}

int LatticeSpec::chain_label(int index, int n_pairs) {
  return index < n_pairs ? index - n_pairs : index - n_pairs + 1;
}

void LatticeSpec::validate() const {
  const int n = n_sites();
  if (n_pairs < 1) throw Error("lattice needs at least one site pair");
  if (hopping.rows() != n || hopping.cols() != n)
    throw Error("hopping matrix dimension mismatch");
  const double scale = std::max(1e-300, hopping.norm());
  if ((hopping - hopping.adjoint()).norm() / scale > tol::hermiticity)
    throw Error("hopping matrix is not Hermitian");
  if (std::abs(u * u + v * v - 1.0) > tol::normalization)
    throw Error("u^2 + v^2 must equal 1");
  if (u < 0 || u > 1 || v < 0 || v > 1) throw Error("u, v must lie in [0,1]");
  if (gamma < 0) throw Error("dissipation strength must be non-negative");
  if (diss_site_0 == diss_site_1) throw Error("dissipation sites must differ");
  if (diss_site_0 < 0 || diss_site_0 >= n || diss_site_1 < 0 || diss_site_1 >= n)
    throw Error("dissipation site index out of range");
  if (static_cast<int>(sublattice.size()) != n)
    throw Error("sublattice label list has wrong length");
  int na = 0, nb = 0, nu = 0;
  for (Sublattice s : sublattice) {
    if (s == Sublattice::A) ++na;
    else if (s == Sublattice::B) ++nb;
    else ++nu;
  }
  if (nu == 0 && na != nb) throw Error("sublattices must have equal size");
}

LatticeSpec build_chain(int n_pairs, const std::vector<double>& couplings, bool mirror) {
  if (n_pairs < 1) throw Error("build_chain: N must be at least 1");
  const int n = 2 * n_pairs;
  std::vector<double> bonds(n - 1);
  if (mirror) {
    // couplings = [middle bond, then outward]; bond p pairs with 2N-2-p
    if (static_cast<int>(couplings.size()) != n_pairs)
      throw Error("build_chain: mirror chain needs N couplings");
    for (int k = 0; k < n_pairs; ++k) {
      bonds[n_pairs - 1 + k] = couplings[k];
      bonds[n_pairs - 1 - k] = couplings[k];
    }
  } else {
    if (static_cast<int>(couplings.size()) != n - 1)
      throw Error("build_chain: open chain needs 2N-1 couplings");
    bonds = couplings;
  }
  LatticeSpec spec;
  spec.n_pairs = n_pairs;
  spec.hopping = Mat::Zero(n, n);
  for (int p = 0; p + 1 < n; ++p) {
    spec.hopping(p, p + 1) = bonds[p];
    spec.hopping(p + 1, p) = bonds[p];
  }
  // alternate labels so that site -1 (index N-1) lands on sublattice A
  spec.sublattice.resize(n);
  for (int p = 0; p < n; ++p)
    spec.sublattice[p] =
        ((p - (n_pairs - 1)) % 2 == 0) ? Sublattice::A : Sublattice::B;
  spec.diss_site_0 = LatticeSpec::chain_index(-1, n_pairs);
  spec.diss_site_1 = LatticeSpec::chain_index(+1, n_pairs);
  spec.validate();
  return spec;
}

LatticeSpec build_bipartite(const std::vector<BipartiteEdge>& edges, int n_pairs) {
  if (n_pairs < 1) throw Error("build_bipartite: N must be at least 1");
  const int n = 2 * n_pairs;
  LatticeSpec spec;
  spec.n_pairs = n_pairs;
  spec.hopping = Mat::Zero(n, n);
  for (const auto& e : edges) {
    if (e.a < 0 || e.a >= n_pairs || e.b < 0 || e.b >= n_pairs)
      throw Error("build_bipartite: edge endpoint out of range");
    spec.hopping(e.a, n_pairs + e.b) += e.amplitude;
    spec.hopping(n_pairs + e.b, e.a) += std::conj(e.amplitude);
  }
  spec.sublattice.assign(n, Sublattice::B);
  for (int a = 0; a < n_pairs; ++a) spec.sublattice[a] = Sublattice::A;
  spec.diss_site_0 = 0;
  spec.diss_site_1 = n_pairs;
  spec.validate();
  return spec;
}

namespace {

// Sign vector of a diagonal chiral operator (-1 on A, +1 on B) via graph
// two-coloring of the hopping pattern. Empty when no such operator exists.
std::vector<int> chiral_signs(const Mat& h) {
  const int n = static_cast<int>(h.rows());
  const double scale = std::max(1e-300, h.cwiseAbs().maxCoeff());
  const double cut = 1e-14 * scale;
  for (int i = 0; i < n; ++i)
    if (std::abs(h(i, i)) > cut) return {};
  std::vector<int> color(n, 0);
  for (int start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    color[start] = -1;
    std::queue<int> q;
    q.push(start);
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      for (int j = 0; j < n; ++j) {
        if (j == i || std::abs(h(i, j)) <= cut) continue;
        if (color[j] == 0) {
          color[j] = -color[i];
          q.push(j);
        } else if (color[j] == color[i]) {
          return {};
        }
      }
    }
  }
  return color;
}

}  // namespace

ChiralReport verify_chiral(const LatticeSpec& spec) {
  spec.validate();
  ChiralReport rep;
  const int n = spec.n_sites();
  const double scale = std::max(1e-300, spec.hopping.cwiseAbs().maxCoeff());
  const double cut = 1e-14 * scale;

  bool labels_assigned = true;
  for (Sublattice s : spec.sublattice)
    if (s == Sublattice::Unassigned) labels_assigned = false;
  if (labels_assigned) {
    rep.is_bipartite_hopping = true;
    for (int i = 0; i < n && rep.is_bipartite_hopping; ++i)
      for (int j = 0; j < n; ++j) {
        if (std::abs(spec.hopping(i, j)) <= cut) continue;
        if (i == j || spec.sublattice[i] == spec.sublattice[j]) {
          rep.is_bipartite_hopping = false;
          break;
        }
      }
  }

  rep.chiral_ok = !chiral_signs(spec.hopping).empty();
  if (!rep.chiral_ok) return rep;

  EigenBasis basis;
  try {
    basis = chiral_paired_basis(spec);
  } catch (const ZeroModeError&) {
    rep.chiral_ok = false;
    return rep;
  }

  const int np = spec.n_pairs;
  const int s0 = spec.diss_site_0, s1 = spec.diss_site_1;
  rep.max_ratio_residual = 0.0;
  double n_max = 0.0;
  RVec overlap(np);
  for (int g = 0; g < np; ++g) {
    const cxd a0 = basis.wavefunctions(s0, g);
    const cxd b0 = basis.wavefunctions(s0, np + g);
    const cxd a1 = basis.wavefunctions(s1, g);
    const cxd b1 = basis.wavefunctions(s1, np + g);
    // ratio condition, cross-multiplied: psi_g[s0] psi_g^*[s1] must cancel
    // against psi_{-g}[s0] psi_{-g}^*[s1]
    const cxd lhs = a0 * std::conj(a1);
    const cxd rhs = b0 * std::conj(b1);
    const double mag = std::abs(lhs) + std::abs(rhs);
    const double res = mag > 1e-300 ? std::abs(lhs + rhs) / mag : 0.0;
    if (res >= rep.max_ratio_residual) {
      rep.max_ratio_residual = res;
      rep.worst_gamma = g + 1;
    }
    overlap(g) = std::sqrt(spec.u * spec.u * std::norm(a0) +
                           spec.v * spec.v * std::norm(b1));
    n_max = std::max(n_max, overlap(g));
  }
  rep.constraint_ok = rep.max_ratio_residual < 1e-8;
  rep.dark_threshold = tol::dark_mode_factor * n_max;
  rep.min_overlap = overlap.minCoeff();
  for (int g = 0; g < np; ++g)
    if (overlap(g) <= rep.dark_threshold) rep.dark_modes.push_back(g + 1);
  return rep;
}

PolarStructure polar_pairing(const LatticeSpec& spec) {
  spec.validate();
  PolarStructure out;
  for (int i = 0; i < spec.n_sites(); ++i) {
    if (spec.sublattice[i] == Sublattice::A) out.a_sites.push_back(i);
    else if (spec.sublattice[i] == Sublattice::B) out.b_sites.push_back(i);
    else throw Error("polar_pairing needs assigned sublattice labels");
  }
  // For chains, list each B site opposite the mirror image of its A partner;
  // a mirror-symmetric chain then has Hermitian V and U = 1 reads off the
  // site-to-site rainbow pairing.
  {
    const int n = spec.n_sites();
    const double cut = 1e-14 * std::max(1e-300, spec.hopping.cwiseAbs().maxCoeff());
    bool tridiagonal = true;
    for (int i = 0; i < n && tridiagonal; ++i)
      for (int j = 0; j < n; ++j)
        if (std::abs(i - j) != 1 && std::abs(spec.hopping(i, j)) > cut)
          tridiagonal = false;
    if (tridiagonal) {
      std::vector<int> mirrored;
      for (int a : out.a_sites) mirrored.push_back(n - 1 - a);
      bool ok = mirrored.size() == out.b_sites.size();
      for (int b : mirrored)
        if (ok && spec.sublattice[b] != Sublattice::B) ok = false;
      if (ok) out.b_sites = mirrored;
    }
  }
  const int np = static_cast<int>(out.a_sites.size());
  Mat v(np, np);
  for (int k = 0; k < np; ++k)
    for (int l = 0; l < np; ++l) v(k, l) = spec.hopping(out.a_sites[k], out.b_sites[l]);

  Eigen::JacobiSVD<Mat> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& sv = svd.singularValues();
  out.min_singular_value = sv(np - 1);
  out.singular = sv(np - 1) < 1e-12 * std::max(1e-300, sv(0));
  // sign completion: each singular direction takes sign(Re<p_k, q_k>), which
  // reproduces U = 1 for Hermitian V (W is then allowed to be indefinite)
  RVec signs(np);
  for (int k = 0; k < np; ++k) {
    const double d = std::real(svd.matrixU().col(k).dot(svd.matrixV().col(k)));
    signs(k) = d < 0.0 ? -1.0 : 1.0;
  }
  out.U = svd.matrixU() * signs.asDiagonal() * svd.matrixV().adjoint();
  out.W = svd.matrixU() * (sv.cwiseProduct(signs)).asDiagonal() *
          svd.matrixU().adjoint();
  return out;
}

LatticeSpec build_constrained_2d(const std::array<double, 4>& free_bonds) {
  // Two four-site rails joined by one vertical bond at column 1 (7 bonds on
  // 8 sites: a branched tree with four leaves, not a disguised chain). The
  // dissipator couples the central vertical pair (1,1)-(0,1). A-sites are
  // (1,1),(0,0),(0,2),(1,3); B-sites are (0,1),(0,3),(1,0),(1,2).
  const double j1 = free_bonds[0], j2 = free_bonds[1], j3 = free_bonds[2],
               j4 = free_bonds[3];
  auto make = [&](const Eigen::Vector3d& k) {
    std::vector<BipartiteEdge> edges = {
        {1, 0, j1},     // (0,0)-(0,1)
        {2, 0, j2},     // (0,1)-(0,2)
        {2, 1, j3},     // (0,2)-(0,3)
        {0, 0, j4},     // (0,1)-(1,1)  dissipator bond
        {0, 2, k(0)},   // (1,0)-(1,1)
        {0, 3, k(1)},   // (1,1)-(1,2)
        {3, 3, k(2)},   // (1,2)-(1,3)
    };
    return build_bipartite(edges, 4);
  };
  // Solve for the three dependent amplitudes so every eigenmode pair has
  // equal weight on the two dissipation sites (the fourth condition follows
  // from normalization). That makes all Bogoliubov occupations equal to v^2.
  auto objective = [&](const Eigen::Vector3d& k) {
    LatticeSpec s = make(k);
    EigenBasis basis = chiral_paired_basis(s);
    Eigen::Vector3d f;
    for (int g = 0; g < 3; ++g)
      f(g) = std::norm(basis.wavefunctions(s.diss_site_0, g)) -
             std::norm(basis.wavefunctions(s.diss_site_1, g));
    return f;
  };
  // damped Newton with numerical Jacobian, deterministic multi-start
  std::vector<Eigen::Vector3d> seeds;
  std::mt19937_64 rng(0x2d5eed);
  std::uniform_real_distribution<double> unif(0.35, 1.9);
  seeds.push_back(Eigen::Vector3d(j3 * 1.4, j1 * 0.6, j2 * 1.3));
  seeds.push_back(Eigen::Vector3d(j2 * 0.5, j3 * 1.5, j1 * 0.8));
  seeds.push_back(Eigen::Vector3d(j1, j2, j3));
  for (int t = 0; t < 24; ++t)
    seeds.push_back(Eigen::Vector3d(unif(rng), unif(rng), unif(rng)));

  Eigen::Vector3d best;
  double best_score = -1.0;
  for (const auto& seed : seeds) {
    Eigen::Vector3d k = seed;
    bool converged = false;
    for (int it = 0; it < 80; ++it) {
      Eigen::Vector3d f;
      try {
        f = objective(k);
      } catch (const Error&) {
        break;
      }
      if (f.norm() < 1e-13) {
        converged = true;
        break;
      }
      Eigen::Matrix3d jac;
      const double h = 1e-7;
      for (int c = 0; c < 3; ++c) {
        Eigen::Vector3d kp = k;
        kp(c) += h;
        jac.col(c) = (objective(kp) - f) / h;
      }
      Eigen::Vector3d step = jac.fullPivLu().solve(-f);
      if (!step.allFinite()) break;
      double lim = 0.5 + k.cwiseAbs().maxCoeff();
      if (step.norm() > lim) step *= lim / step.norm();
      k += step;
    }
    if (!converged) continue;
    const double weakest = k.cwiseAbs().minCoeff();
    if (weakest < 1e-3) continue;  // decoupled sites leave dark modes
    // prefer well-coupled solutions; all roots here are non-rainbow because
    // the graph has no automorphism exchanging the dissipation sites
    if (weakest > best_score) {
      best_score = weakest;
      best = k;
    }
  }
  if (best_score < 0)
    throw Error("build_constrained_2d: no solution of the overlap conditions");
  LatticeSpec spec = make(best);
  spec.validate();
  return spec;
}

}  // namespace dissipad
