#include "dissipad/jw.hpp"

#include <bit>
#include <cmath>

#include "dissipad/errors.hpp"
#include "dissipad/qops.hpp"

namespace dissipad {

namespace {

// Chain checks shared by the fermionization entry points.
void require_chain(const LatticeSpec& spec) {
  const int n = spec.n_sites();
  const double cut = 1e-14 * std::max(1e-300, spec.hopping.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(int(i) - int(j)) != 1 && std::abs(spec.hopping(i, j)) > cut)
        throw Error("fermionization handles nearest-neighbour chains only");
  if (!((spec.diss_site_0 == spec.n_pairs - 1 && spec.diss_site_1 == spec.n_pairs) ||
        (spec.diss_site_1 == spec.n_pairs - 1 && spec.diss_site_0 == spec.n_pairs)))
    throw Error("fermionization requires the dissipator on the two middle sites");
}

// String-transformed annihilation operator in the spin basis: strings are
// referenced to the middle of the chain (site 1), the convention that turns
// every string in the master equation into the global parity.
SpMat string_annihilation(int n_sites, int slot) {
  const int np = n_sites / 2;
  std::vector<bool> in_string(n_sites, false);
  if (slot >= np) {
    for (int k = np; k <= slot; ++k) in_string[k] = true;  // labels 1..i
  } else {
    for (int k = np; k < n_sites; ++k) in_string[k] = true;  // all positive labels
    for (int k = 0; k <= slot; ++k) in_string[k] = true;     // labels -N..i
  }
  const long dim = 1L << n_sites;
  std::vector<Triplet> trips;
  for (long s = 0; s < dim; ++s) {
    const int bit = n_sites - 1 - slot;
    if (!((s >> bit) & 1)) continue;
    double sign = 1.0;
    for (int k = 0; k < n_sites; ++k)
      if (in_string[k] && ((s >> (n_sites - 1 - k)) & 1)) sign = -sign;
    trips.emplace_back(s ^ (1L << bit), s, sign);
  }
  SpMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

Mat jw_unitary(const LatticeSpec& spec) {
  require_chain(spec);
  const int n = spec.n_sites();
  const long dim = 1L << n;
  std::vector<SpMat> create(n);
  for (int k = 0; k < n; ++k) create[k] = SpMat(string_annihilation(n, k).adjoint());

  Mat u = Mat::Zero(dim, dim);
  for (long occ = 0; occ < dim; ++occ) {
    // |occ>_fock = prod of standard creations, descending slot; build the
    // same product from the string operators and read off the signed ket
    Vec chi = Vec::Zero(dim);
    chi(0) = 1.0;
    for (int k = n - 1; k >= 0; --k)
      if ((occ >> k) & 1) chi = create[k] * chi;
    u.row(occ) = chi.adjoint();
  }
  return u;
}

JwOperators jw_fermionize(const LatticeSpec& spec) {
  spec.validate();
  require_chain(spec);
  const int n = spec.n_sites();
  JwOperators out;
  out.n_sites = n;

  // Direct Fock-basis assembly, matching the string-transformed spin model
  // as an exact operator identity (checked against jw_unitary conjugation in
  // the tests): plain bonds keep the overall minus sign of the spin
  // Hamiltonian, the middle bond flips it and picks up the parity dressing.
  SpMat par = fock_parity(n);
  std::vector<SpMat> c(n);
  for (int k = 0; k < n; ++k) c[k] = fock_annihilation(n, k);
  const long dim = 1L << n;
  SpMat h(dim, dim);
  const int mid = spec.n_pairs - 1;
  for (int p = 0; p + 1 < n; ++p) {
    const cxd j = spec.hopping(p, p + 1);
    if (j == cxd(0, 0)) continue;
    SpMat hop = SpMat(c[p].adjoint()) * c[p + 1];
    if (p == mid) hop = par * hop;
    const cxd coeff = (p == mid) ? j : -j;
    h += coeff * hop + std::conj(coeff) * SpMat(hop.adjoint());
  }
  h.makeCompressed();
  out.h_fock = h;

  const int s0 = spec.diss_site_0, s1 = spec.diss_site_1;
  out.beta_l_fock = spec.u * (c[s0] * par) - spec.v * SpMat(c[s1].adjoint());
  out.beta_l_fock.makeCompressed();
  return out;
}

ParityDecomposition parity_decompose(double u, double v) {
  if (std::abs(u * u + v * v - 1.0) > tol::normalization)
    throw Error("parity_decompose: u^2 + v^2 must equal 1");
  ParityDecomposition d;
  d.even_beta_a = 1.0;
  d.odd_beta_a = u * u - v * v;
  d.odd_beta_b_dag = 2.0 * u * v;
  return d;
}

SuperoperatorMatrix fock_liouvillian(const SpMat& h_fock,
                                     const std::vector<SpMat>& jumps,
                                     const std::vector<double>& rates) {
  const long dim = h_fock.rows();
  if (dim > 64)
    throw DimensionCapError("fock_liouvillian is an oracle for at most 6 sites");
  SuperoperatorMatrix out;
  out.n_sites = static_cast<int>(std::llround(std::log2(double(dim))));
  out.mat = liouvillian_matrix(h_fock, jumps, rates);
  out.dissipative = !jumps.empty();
  for (size_t k = 0; k < jumps.size(); ++k)
    out.jumps.push_back("fock_jump_" + std::to_string(k));
  return out;
}

SpMat fock_quadratic_hamiltonian(const Mat& hopping) {
  const int n = static_cast<int>(hopping.rows());
  const long dim = 1L << n;
  std::vector<SpMat> c(n);
  for (int k = 0; k < n; ++k) c[k] = fock_annihilation(n, k);
  SpMat h(dim, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (hopping(i, j) == cxd(0, 0)) continue;
      h += hopping(i, j) * (SpMat(c[i].adjoint()) * c[j]);
    }
  h.makeCompressed();
  return h;
}

SpMat fock_pair_jump(const LatticeSpec& spec) {
  const int n = spec.n_sites();
  SpMat c0 = fock_annihilation(n, spec.diss_site_0);
  SpMat c1 = fock_annihilation(n, spec.diss_site_1);
  SpMat j = spec.u * c0 -
            spec.v * std::exp(I_UNIT * spec.phi) * SpMat(c1.adjoint());
  j.makeCompressed();
  return j;
}

std::pair<SpMat, SpMat> bogoliubov_mode_operators(const LatticeSpec& spec,
                                                  const EigenBasis& basis,
                                                  const BogoliubovData& bog,
                                                  int g) {
  const int n = spec.n_sites();
  const int np = spec.n_pairs;
  std::vector<SpMat> c(n);
  for (int k = 0; k < n; ++k) c[k] = fock_annihilation(n, k);
  const long dim = 1L << n;
  SpMat beta_plus(dim, dim), beta_minus(dim, dim);
  for (int i = 0; i < n; ++i) {
    const cxd psi_p = basis.wavefunctions(i, g);
    const cxd psi_m = basis.wavefunctions(i, np + g);
    beta_plus += bog.u_alpha(g) * std::conj(psi_p) * c[i] -
                 bog.v_alpha(g) * psi_m * SpMat(c[i].adjoint());
    beta_minus += bog.u_alpha(g) * std::conj(psi_m) * c[i] +
                  bog.v_alpha(g) * psi_p * SpMat(c[i].adjoint());
  }
  beta_plus.makeCompressed();
  beta_minus.makeCompressed();
  return {beta_plus, beta_minus};
}

Mat bogoliubov_number_operator(const LatticeSpec& spec) {
  EigenBasis basis = eigenbasis(spec);
  BogoliubovData bog = bogoliubov(spec, basis);
  const long dim = 1L << spec.n_sites();
  Mat n_bog = Mat::Zero(dim, dim);
  for (int g = 0; g < spec.n_pairs; ++g) {
    auto [bp, bm] = bogoliubov_mode_operators(spec, basis, bog, g);
    n_bog += Mat(SpMat(bp.adjoint()) * bp) + Mat(SpMat(bm.adjoint()) * bm);
  }
  return n_bog;
}

TowerHistogram tower_histogram(const Mat& rho, const LatticeSpec& spec) {
  const int n = spec.n_sites();
  Mat n_bog = bogoliubov_number_operator(spec);
  Eigen::SelfAdjointEigenSolver<Mat> es(n_bog);
  TowerHistogram hist;
  hist.p.assign(n + 1, 0.0);
  hist.degeneracy.assign(n + 1, 0.0);
  for (int m = 0; m <= n; ++m) {
    double binom = 1;
    for (int i = 0; i < m; ++i) binom = binom * (n - i) / (i + 1);
    hist.degeneracy[m] = binom;
  }
  for (long k = 0; k < es.eigenvalues().size(); ++k) {
    const int m = static_cast<int>(std::llround(es.eigenvalues()(k)));
    const Vec v = es.eigenvectors().col(k);
    hist.p[m] += std::real(v.dot(rho * v));
  }
  return hist;
}

}  // namespace dissipad
