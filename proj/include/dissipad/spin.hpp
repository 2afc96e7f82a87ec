#pragma once

#include <string>
#include <vector>

#include "dissipad/lattice.hpp"
#include "dissipad/types.hpp"

namespace dissipad {

/// Qubit register of 2N sites labeled (-N..-1, 1..N); site -N is the most
/// significant tensor factor. State dimension 2^{2N}, superoperator 4^{2N}.
struct SpinRegister {
  int n_sites = 0;
  static constexpr int default_cap = 12;
  long dim() const { return 1L << n_sites; }
  long superop_dim() const { return 1L << (2 * n_sites); }
};

struct NoiseConfig {
  double gamma_phi = 0;  // per-site dephasing rate
  double gamma_rel = 0;  // per-site relaxation rate
  void validate() const;
};

enum class DissipatorSet { SingleBetaL, BetaAAndBetaB };

struct SuperoperatorMatrix {
  SpMat mat;
  int n_sites = 0;
  std::vector<std::string> jumps;  // human-readable list of included jumps
  bool dissipative = true;         // false for the Gamma = 0 diagnostic mode

  long dim_rho() const { return 1L << n_sites; }
};

/// Vectorized Liouvillian: spin Hamiltonian (note the overall minus sign on
/// the hopping and the parity-free middle bond), the engineered pairing
/// dissipator(s) at strength Gamma, plus local dephasing/relaxation.
SuperoperatorMatrix build_spin_liouvillian(const LatticeSpec& spec,
                                           const NoiseConfig& noise,
                                           DissipatorSet set);

struct SpinObservables {
  double t = 0;
  double excitation = 0;  // <sum (1+sigma^z)/2>
  double parity = 0;      // <prod (-sigma^z)>
  double purity = 0;      // tr rho^2
  double fidelity_rainbow = 0;
  std::vector<double> bond_concurrence;  // pairs (i,-i), innermost first
  double trace_error = 0;
};

/// Propagate rho0 and record observables at `times` (increasing, >= 0).
/// The rainbow fidelity column uses the (u,v) stored in `spec`.
std::vector<SpinObservables> evolve_density(const SuperoperatorMatrix& op,
                                            const LatticeSpec& spec,
                                            const Mat& rho0,
                                            const std::vector<double>& times);

struct SteadyStateSet {
  int count = 0;
  std::vector<Mat> states;        // Hermitian, unit trace, PSD
  std::vector<double> parity;     // <P> per state
  bool non_dissipative = false;   // Gamma = 0 diagnostic mode
};

/// Kernel of the Liouvillian, resolved into physical (PSD) states. Uses the
/// weak parity symmetry to search the diagonal sectors and verifies the
/// coherence sectors are gapped.
SteadyStateSet steady_states(const SuperoperatorMatrix& op);

/// prod_i (u + (-1)^i v sigma^+_i sigma^+_{-i}) |0>, normalized.
Vec rainbow_state(int n_pairs, double u, double v);

/// Wootters concurrence of the reduced state on (site_a, site_b); sites are
/// register slots 0..2N-1.
double concurrence(const Mat& rho, int n_sites, int site_a, int site_b);

struct BondOptimum {
  double v2_best = 0;
  double concurrence_best = 0;
  std::vector<double> grid_values;  // concurrence per grid point
};

/// Steady-state concurrence on pair (bond, -bond) maximized over a v^2 grid;
/// the robustness variant with both pairing dissipators is used.
BondOptimum optimize_bond_concurrence(const LatticeSpec& base, int bond,
                                      const NoiseConfig& noise,
                                      const std::vector<double>& v2_grid);

/// Checks L(P rho P) = P L(rho) P on random test matrices.
bool check_weak_parity_symmetry(const SuperoperatorMatrix& op, int n_trials = 8,
                                unsigned seed = 11);

struct PurityReport {
  double purity = 0;
  int steady_count = 0;
  Mat normal_corr;     // <sigma^+_i sigma^-_j>
  Mat anomalous_corr;  // <sigma^-_i sigma^-_j>
};

/// Steady state of the spin master equation on an arbitrary (e.g. 2D)
/// bipartite lattice; demonstrates the loss of purity away from chains.
PurityReport twoD_qubit_counterexample(const LatticeSpec& spec);

/// <psi| rho |psi> for a pure reference.
double state_fidelity(const Mat& rho, const Vec& psi);

/// Build the spin Hamiltonian matrix of a spec (shared with the JW tests).
SpMat spin_hamiltonian(const LatticeSpec& spec);

/// Engineered jump operators for the spec: {beta_L} or {beta_A, beta_B}.
std::vector<SpMat> spin_jump_operators(const LatticeSpec& spec, DissipatorSet set);

}  // namespace dissipad
