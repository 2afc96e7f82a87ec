#pragma once

#include <functional>
#include <vector>

#include "dissipad/lattice.hpp"
#include "dissipad/types.hpp"

namespace dissipad {

/// Chiral-paired single-particle eigenbasis. Columns 0..N-1 hold the positive
/// energy modes (ascending), column N+k holds the partner of column k with
/// energy -e_k. Every column is phase-fixed so its amplitude on the first
/// dissipation site (falling back to the first site with non-negligible
/// weight) is real and non-negative.
struct EigenBasis {
  RVec energies;      // 2N entries, [e_1..e_N, -e_1..-e_N]
  Mat wavefunctions;  // 2N x 2N, column per mode

  int n_pairs() const { return static_cast<int>(energies.size()) / 2; }
  int partner(int k) const { return k < n_pairs() ? k + n_pairs() : k - n_pairs(); }
};

/// Per-pair Bogoliubov coefficients of the dark-state construction.
struct BogoliubovData {
  Vec u_alpha;   // length N
  Vec v_alpha;   // length N
  RVec n_alpha;  // length N, dissipator overlap (sets the cooling rate)
  Vec x_gamma;   // length N, amplitude ratio psi_g[s0] / psi_{-g}[s0]
  double u = 1, v = 0, phi = 0;
};

/// Two-point functions of a fermionic Gaussian state.
struct PairCovariance {
  Mat normal;     // <c_i^dag c_j>
  Mat anomalous;  // <c_i c_j>

  int n_sites() const { return static_cast<int>(normal.rows()); }
  /// Throws when Hermiticity/antisymmetry/occupation bounds fail; with
  /// assert_pure also demands the Majorana covariance squares to -1.
  void validate(bool assert_pure = false) const;
};

/// Single-particle decay spectrum of the quadratic Lindbladian: the
/// eigenvalues of the Majorana drift matrix (4N values for 2N sites). The
/// full Liouvillian spectrum consists of all subset sums of these.
struct RapiditySpectrum {
  std::vector<cxd> rates;  // sorted lexicographically, real parts <= 0
  double gap = 0;          // -max over nonzero real parts
};

/// Pairing construction without the symmetry precondition; used internally by
/// verify_chiral. Throws when no diagonal sign chiral operator exists or a
/// zero mode breaks the pairing.
EigenBasis chiral_paired_basis(const LatticeSpec& spec);

/// Checked entry point: requires verify_chiral(spec).chiral_ok.
EigenBasis eigenbasis(const LatticeSpec& spec);

/// Coefficients of the Bogoliubov modes cooled by the jump operator.
/// Refuses (ConstraintError) when the placement condition fails.
BogoliubovData bogoliubov(const LatticeSpec& spec, const EigenBasis& basis);

/// Real-space correlators of the pure steady state. Refuses (DarkModeError)
/// when some mode decouples from the dissipator.
PairCovariance analytic_steady_correlators(const BogoliubovData& bog,
                                           const EigenBasis& basis);

/// Exact two-point dynamics under the quadratic Lindbladian, sampled at
/// `times` (increasing, times[0] >= 0 interpreted relative to state0).
std::vector<PairCovariance> evolve_covariance(const LatticeSpec& spec,
                                              const PairCovariance& state0,
                                              const std::vector<double>& times);

/// Fixed point of the covariance flow via a dense Lyapunov solve.
PairCovariance steady_covariance(const LatticeSpec& spec);

RapiditySpectrum rapidity_spectrum(const LatticeSpec& spec);

/// A:B entanglement log-negativity of the steady state.
double log_negativity(const BogoliubovData& bog);

struct GapTable {
  std::vector<int> n_values;
  std::vector<double> gaps;
  double slope = 0;      // fitted d log(gap) / d log(N)
  double residual = 0;   // rms residual of the fit
};
GapTable gap_scaling(const std::function<LatticeSpec(int)>& family,
                     const std::vector<int>& n_values);

// --- Gaussian-state utilities ------------------------------------------

PairCovariance vacuum_covariance(int n_sites);

/// Majorana covariance G_ab = (i/2) <[m_a, m_b]> with m_{2j} = c_j + c_j^dag,
/// m_{2j+1} = -i(c_j - c_j^dag).
RMat majorana_covariance(const PairCovariance& cov);
PairCovariance covariance_from_majorana(const RMat& gamma);

/// ||G^2 + 1||_max; zero for pure Gaussian states.
double majorana_purity_residual(const RMat& gamma);

/// <(-1)^{N}> of the Gaussian state (Pfaffian of the Majorana covariance).
double fermion_parity(const PairCovariance& cov);

/// <b^dag b> for b = sum_i (p_i c_i + q_i c_i^dag).
double mode_occupation(const PairCovariance& cov, const Vec& p, const Vec& q);

/// Energy expectation sum_ij H_ij <c_i^dag c_j>.
double energy_expectation(const Mat& hopping, const PairCovariance& cov);

/// Jump operator coefficient vectors: beta_L = sum_i p_i c_i + q_i c_i^dag.
void jump_vectors(const LatticeSpec& spec, Vec& p, Vec& q);

/// Drift matrix X and source Y of the Majorana covariance flow
/// dG/dt = X G + G X^T + Y.
void covariance_flow(const LatticeSpec& spec, RMat& drift, RMat& source);

}  // namespace dissipad
