#include "dissipad/spin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "dissipad/errors.hpp"
#include "dissipad/linalg.hpp"
#include "dissipad/qops.hpp"

namespace dissipad {

void NoiseConfig::validate() const {
  if (gamma_phi < 0 || gamma_rel < 0) throw Error("noise rates must be >= 0");
}

SpMat spin_hamiltonian(const LatticeSpec& spec) {
  const int n = spec.n_sites();
  const long dim = 1L << n;
  SpMat h(dim, dim);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const cxd amp = spec.hopping(i, j);
      if (amp == cxd(0, 0)) continue;
      SpMat hop = spin_site_op(n, i, pauli::plus()) * spin_site_op(n, j, pauli::minus());
      h -= amp * hop + std::conj(amp) * SpMat(hop.adjoint());
    }
  h.makeCompressed();
  return h;
}

std::vector<SpMat> spin_jump_operators(const LatticeSpec& spec, DissipatorSet set) {
  const int n = spec.n_sites();
  auto pair_jump = [&](int lower_site, int raise_site) {
    SpMat j = spec.u * spin_site_op(n, lower_site, pauli::minus()) +
              spec.v * spin_site_op(n, raise_site, pauli::plus());
    j.makeCompressed();
    return j;
  };
  std::vector<SpMat> jumps;
  jumps.push_back(pair_jump(spec.diss_site_0, spec.diss_site_1));
  if (set == DissipatorSet::BetaAAndBetaB)
    jumps.push_back(pair_jump(spec.diss_site_1, spec.diss_site_0));
  return jumps;
}

SuperoperatorMatrix build_spin_liouvillian(const LatticeSpec& spec,
                                           const NoiseConfig& noise,
                                           DissipatorSet set) {
  spec.validate();
  noise.validate();
  const int n = spec.n_sites();
  if (n > SpinRegister::default_cap)
    throw DimensionCapError("spin register exceeds the configured cap");

  SuperoperatorMatrix out;
  out.n_sites = n;
  std::vector<SpMat> jumps;
  std::vector<double> rates;
  if (spec.gamma > 0) {
    for (auto& j : spin_jump_operators(spec, set)) {
      jumps.push_back(std::move(j));
      rates.push_back(spec.gamma);
      out.jumps.push_back(out.jumps.empty() ? "beta_A" : "beta_B");
    }
  }
  for (int i = 0; i < n && noise.gamma_phi > 0; ++i) {
    jumps.push_back(spin_site_op(n, i, pauli::z()));
    rates.push_back(noise.gamma_phi);
    out.jumps.push_back("dephase_" + std::to_string(i));
  }
  for (int i = 0; i < n && noise.gamma_rel > 0; ++i) {
    jumps.push_back(spin_site_op(n, i, pauli::minus()));
    rates.push_back(noise.gamma_rel);
    out.jumps.push_back("relax_" + std::to_string(i));
  }
  out.dissipative = !jumps.empty();
  out.mat = liouvillian_matrix(spin_hamiltonian(spec), jumps, rates);
  return out;
}

Vec rainbow_state(int n_pairs, double u, double v) {
  if (std::abs(u * u + v * v - 1.0) > tol::normalization)
    throw Error("rainbow_state: u^2 + v^2 must equal 1");
  const int n = 2 * n_pairs;
  const long dim = 1L << n;
  Vec psi = Vec::Zero(dim);
  // amplitude factorizes over pairs (i, -i); pair i contributes u on |00>
  // and (-1)^i v on |11>
  for (long s = 0; s < dim; ++s) {
    double amp = 1.0;
    for (int i = 1; i <= n_pairs && amp != 0.0; ++i) {
      const int slot_neg = n_pairs - i;      // site -i
      const int slot_pos = n_pairs + i - 1;  // site +i
      const int b0 = (s >> (n - 1 - slot_neg)) & 1;
      const int b1 = (s >> (n - 1 - slot_pos)) & 1;
      if (b0 != b1) amp = 0.0;
      else if (b0 == 1) amp *= (i % 2 ? -v : v);
      else amp *= u;
    }
    psi(s) = amp;
  }
  return psi;
}

double state_fidelity(const Mat& rho, const Vec& psi) {
  return std::real(psi.dot(rho * psi));
}

double concurrence(const Mat& rho, int n_sites, int site_a, int site_b) {
  Mat red = partial_trace_keep(rho, n_sites, {site_a, site_b});
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  // sigma_y (x) sigma_y in the two-site basis
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  Mat m = red * yy * red.conjugate() * yy;
  Vec ev = dense_eigenvalues(m);
  std::array<double, 4> lam;
  for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(0.0, ev(i).real()));
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

namespace {

// Index split of the vectorized state into parity-diagonal and coherence
// sectors (weak symmetry: the generator never couples the two).
struct SectorIndex {
  std::vector<long> diag;       // p(row) == p(col)
  std::vector<long> coh;
  std::vector<long> local_of;   // global -> position within its sector
  std::vector<bool> in_diag;
};

SectorIndex sector_split(int n_sites) {
  const long d = 1L << n_sites;
  SectorIndex s;
  s.local_of.resize(d * d);
  s.in_diag.resize(d * d);
  auto parity = [](long x) { return std::popcount(static_cast<unsigned long>(x)) & 1; };
  for (long c = 0; c < d; ++c)
    for (long r = 0; r < d; ++r) {
      const long g = c * d + r;
      if (parity(r) == parity(c)) {
        s.in_diag[g] = true;
        s.local_of[g] = static_cast<long>(s.diag.size());
        s.diag.push_back(g);
      } else {
        s.in_diag[g] = false;
        s.local_of[g] = static_cast<long>(s.coh.size());
        s.coh.push_back(g);
      }
    }
  return s;
}

SpMat submatrix(const SpMat& l, const std::vector<long>& idx,
                const std::vector<long>& local_of, const std::vector<bool>& in_diag,
                bool want_diag) {
  std::vector<Triplet> trips;
  for (long c : idx) {
    for (SpMat::InnerIterator it(l, c); it; ++it) {
      if (in_diag[it.row()] != want_diag) continue;  // cross terms vanish
      trips.emplace_back(local_of[it.row()], local_of[c], it.value());
    }
  }
  SpMat sub(idx.size(), idx.size());
  sub.setFromTriplets(trips.begin(), trips.end());
  return sub;
}

double operator_scale(const SpMat& l) {
  double s = 0;
  for (int c = 0; c < l.outerSize(); ++c)
    for (SpMat::InnerIterator it(l, c); it; ++it) s = std::max(s, std::abs(it.value()));
  return std::max(s, 1e-300);
}

Mat embed_diag_vector(const Vec& local, const std::vector<long>& idx, long d) {
  Vec full = Vec::Zero(d * d);
  for (size_t k = 0; k < idx.size(); ++k) full(idx[k]) = local(k);
  return unvectorize(full, d);
}

}  // namespace

SteadyStateSet steady_states(const SuperoperatorMatrix& op) {
  SteadyStateSet out;
  const long d = op.dim_rho();
  if (!op.dissipative) {
    // closed system: the generator -i[H, .] has eigenvalues -i(E_r - E_c),
    // so the kernel dimension is the full commutant dimension; report the
    // count only and flag the diagnostic mode
    out.non_dissipative = true;
    if (d * d > 4096)
      throw DimensionCapError("non-dissipative diagnostic limited to small registers");
    Vec ev = dense_eigenvalues(Mat(op.mat));
    double scale = ev.cwiseAbs().maxCoeff();
    int zeros = 0;
    for (long k = 0; k < ev.size(); ++k)
      if (std::abs(ev(k)) < tol::null_space_rel * std::max(scale, 1e-300)) ++zeros;
    out.count = zeros;
    return out;
  }

  SectorIndex sec = sector_split(op.n_sites);
  SpMat l_diag = submatrix(op.mat, sec.diag, sec.local_of, sec.in_diag, true);
  SpMat l_coh = submatrix(op.mat, sec.coh, sec.local_of, sec.in_diag, false);
  const double scale = operator_scale(op.mat);
  const double zero_cut = tol::null_space_rel * scale;

  const int want = std::min<long>(op.n_sites / 2 + 4, l_diag.rows());
  NearZeroResult diag_eigs = eigs_near_zero(l_diag, want);
  NearZeroResult coh_eigs = eigs_near_zero(l_coh, 2);
  for (const cxd& z : coh_eigs.eigenvalues)
    if (std::abs(z) < zero_cut)
      throw Error("steady coherence between parity sectors: unsupported structure");

  // Residual-verified kernel vectors of the diagonal sector.
  std::vector<Vec> kernel;
  for (size_t k = 0; k < diag_eigs.eigenvalues.size(); ++k) {
    Vec v = diag_eigs.vectors.col(k);
    if ((l_diag * v).norm() < tol::steady_residual * scale &&
        std::abs(diag_eigs.eigenvalues[k]) < zero_cut)
      kernel.push_back(v);
  }
  out.count = static_cast<int>(kernel.size());
  if (kernel.empty()) return out;

  // Hermitian orthonormal basis of the kernel (Hilbert-Schmidt inner product).
  std::vector<Mat> herm;
  auto add_candidate = [&](Mat b) {
    for (const Mat& e : herm) b -= e * (e.cwiseProduct(b.conjugate()).sum()).real();
    double nb = b.norm();
    if (nb > 1e-8) herm.push_back(b / nb);
  };
  for (const Vec& v : kernel) {
    Mat rho = embed_diag_vector(v, sec.diag, d);
    add_candidate((rho + rho.adjoint()) / 2.0);
    add_candidate((rho - rho.adjoint()) / (2.0 * I_UNIT));
    if (static_cast<int>(herm.size()) == out.count) break;
  }

  if (out.count == 1) {
    Mat rho = herm[0];
    double tr = rho.trace().real();
    if (tr < 0) rho = -rho;
    rho /= std::abs(tr) > 1e-12 ? std::abs(tr) : 1.0;
    out.states.push_back(rho);
  } else {
    // Conserved quantities (left kernel) are flat on the attractor supports;
    // a generic combination separates the supports by eigenvalue clustering.
    SpMat l_adj = SpMat(l_diag.adjoint());
    NearZeroResult left = eigs_near_zero(l_adj, want, 40, 13);
    std::vector<Mat> observables;
    for (size_t k = 0; k < left.eigenvalues.size(); ++k) {
      if (std::abs(left.eigenvalues[k]) > zero_cut) continue;
      Mat j = embed_diag_vector(left.vectors.col(k), sec.diag, d);
      observables.push_back((j + j.adjoint()) / 2.0);
    }
    std::mt19937_64 rng(0xc0de);
    std::normal_distribution<double> gauss;
    Mat z = Mat::Zero(d, d);
    for (const Mat& j : observables) z += gauss(rng) * j;
    Eigen::SelfAdjointEigenSolver<Mat> es(z);
    // cluster eigenvalues of the conserved observable
    std::vector<std::pair<double, int>> lam(d);
    for (long i = 0; i < d; ++i) lam[i] = {es.eigenvalues()(i), int(i)};
    std::sort(lam.begin(), lam.end());
    const double cluster_gap =
        1e-6 * std::max(1.0, std::abs(lam.back().first - lam.front().first));
    std::vector<std::vector<int>> clusters{{lam[0].second}};
    for (long i = 1; i < d; ++i) {
      if (lam[i].first - lam[i - 1].first > cluster_gap) clusters.emplace_back();
      clusters.back().push_back(lam[i].second);
    }
    Mat total = Mat::Zero(d, d);
    for (const Mat& b : herm) total += b;
    for (const auto& cl : clusters) {
      Mat q = Mat::Zero(d, d);
      for (int idx : cl) q += es.eigenvectors().col(idx) * es.eigenvectors().col(idx).adjoint();
      Mat candidate = q * total * q;
      double tr = candidate.trace().real();
      if (std::abs(tr) < 1e-10) continue;
      candidate /= tr;
      Vec res = op.mat * vectorize(candidate);
      if (res.norm() > tol::steady_residual * scale * 10) continue;
      out.states.push_back(candidate);
    }
    // fall back to the raw Hermitian basis when clustering failed to resolve
    if (static_cast<int>(out.states.size()) != out.count) {
      out.states.clear();
      for (Mat b : herm) {
        double tr = b.trace().real();
        if (std::abs(tr) > 1e-10) b /= tr;
        out.states.push_back(b);
      }
    }
  }
  SpMat par = spin_parity(op.n_sites);
  for (const Mat& rho : out.states)
    out.parity.push_back(std::real((par * rho).eval().trace()));
  return out;
}

std::vector<SpinObservables> evolve_density(const SuperoperatorMatrix& op,
                                            const LatticeSpec& spec,
                                            const Mat& rho0,
                                            const std::vector<double>& times) {
  const long d = op.dim_rho();
  const int n = op.n_sites;
  SpMat number = spin_excitation_number(n);
  SpMat par = spin_parity(n);
  Vec rainbow = rainbow_state(n / 2, spec.u, spec.v);

  std::vector<SpinObservables> out;
  Vec state = vectorize(rho0);
  double t_now = 0;
  for (double t : times) {
    if (t < t_now) throw Error("evolve_density: times must increase");
    if (t > t_now) state = krylov_expv(op.mat, state, t - t_now);
    t_now = t;
    Mat rho = unvectorize(state, d);
    rho = (rho + rho.adjoint()) / 2.0;
    SpinObservables o;
    o.t = t;
    o.trace_error = std::abs(rho.trace().real() - 1.0);
    o.excitation = std::real((number * rho).eval().trace());
    o.parity = std::real((par * rho).eval().trace());
    o.purity = std::real((rho * rho).trace());
    o.fidelity_rainbow = state_fidelity(rho, rainbow);
    for (int b = 1; b <= n / 2; ++b) {
      const int slot_neg = n / 2 - b;
      const int slot_pos = n / 2 + b - 1;
      o.bond_concurrence.push_back(concurrence(rho, n, slot_neg, slot_pos));
    }
    out.push_back(std::move(o));
  }
  return out;
}

BondOptimum optimize_bond_concurrence(const LatticeSpec& base, int bond,
                                      const NoiseConfig& noise,
                                      const std::vector<double>& v2_grid) {
  BondOptimum best;
  const int n = base.n_sites();
  const int slot_neg = n / 2 - bond;
  const int slot_pos = n / 2 + bond - 1;
  for (double v2 : v2_grid) {
    LatticeSpec spec = base;
    spec.set_v2(v2);
    SuperoperatorMatrix l =
        build_spin_liouvillian(spec, noise, DissipatorSet::BetaAAndBetaB);
    SteadyStateSet ss = steady_states(l);
    if (ss.count != 1) throw Error("optimize_bond_concurrence: steady state not unique");
    double c = concurrence(ss.states[0], n, slot_neg, slot_pos);
    best.grid_values.push_back(c);
    if (c >= best.concurrence_best) {
      best.concurrence_best = c;
      best.v2_best = v2;
    }
  }
  return best;
}

bool check_weak_parity_symmetry(const SuperoperatorMatrix& op, int n_trials,
                                unsigned seed) {
  const long d = op.dim_rho();
  SpMat par = spin_parity(op.n_sites);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const double scale = operator_scale(op.mat);
  for (int trial = 0; trial < n_trials; ++trial) {
    Mat rho(d, d);
    for (long c = 0; c < d; ++c)
      for (long r = 0; r < d; ++r) rho(r, c) = cxd(gauss(rng), gauss(rng));
    rho = (rho + rho.adjoint()) / 2.0;
    rho /= rho.norm();
    Mat prp = par * rho * par;
    Mat lhs = unvectorize(op.mat * vectorize(prp), d);
    Mat rhs_m = par * unvectorize(op.mat * vectorize(rho), d) * par;
    if ((lhs - rhs_m).norm() > tol::weak_symmetry * scale * std::sqrt(double(d)))
      return false;
  }
  return true;
}

PurityReport twoD_qubit_counterexample(const LatticeSpec& spec) {
  SuperoperatorMatrix l =
      build_spin_liouvillian(spec, NoiseConfig{}, DissipatorSet::SingleBetaL);
  SteadyStateSet ss = steady_states(l);
  PurityReport rep;
  rep.steady_count = ss.count;
  if (ss.states.empty()) throw Error("no physical steady state found");
  const Mat& rho = ss.states[0];
  rep.purity = std::real((rho * rho).trace());
  const int n = spec.n_sites();
  rep.normal_corr = Mat(n, n);
  rep.anomalous_corr = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      SpMat sp = spin_site_op(n, i, pauli::plus()) * spin_site_op(n, j, pauli::minus());
      SpMat sm = spin_site_op(n, i, pauli::minus()) * spin_site_op(n, j, pauli::minus());
      rep.normal_corr(i, j) = (Mat(sp) * rho).trace();
      rep.anomalous_corr(i, j) = (Mat(sm) * rho).trace();
    }
  return rep;
}

}  // namespace dissipad
