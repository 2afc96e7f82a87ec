#pragma once

#include <vector>

#include "dissipad/gaussian.hpp"
#include "dissipad/lattice.hpp"
#include "dissipad/spin.hpp"
#include "dissipad/types.hpp"

namespace dissipad {

/// Fermionized chain operators in the Fock basis (little-endian occupation
/// integers). The middle bond and the jump operator carry the total-parity
/// dressing that survives the string transformation.
struct JwOperators {
  SpMat h_fock;
  SpMat beta_l_fock;
  int n_sites = 0;
};

/// Fermionization of a nearest-neighbour chain with the dissipator on the
/// two middle sites; refuses anything else (outside the validity domain).
JwOperators jw_fermionize(const LatticeSpec& spec);

/// Jump operator split by number parity: on even states it acts as
/// bar_beta_A = u c_{-1} - v c_1^dag; on odd states as
/// -[(u^2 - v^2) bar_beta_A + 2uv bar_beta_B^dag].
struct ParityDecomposition {
  double even_beta_a = 1.0;   // coefficient of bar_beta_A on the even sector
  double odd_beta_a = 0.0;    // u^2 - v^2
  double odd_beta_b_dag = 0.0;  // 2uv
};
ParityDecomposition parity_decompose(double u, double v);

/// Exact Fock-space Liouvillian (oracle scale: at most 6 sites).
SuperoperatorMatrix fock_liouvillian(const SpMat& h_fock,
                                     const std::vector<SpMat>& jumps,
                                     const std::vector<double>& rates);

/// Occupation distribution over the total Bogoliubov excitation number.
struct TowerHistogram {
  std::vector<double> p;           // p_m, m = 0..2N
  std::vector<double> degeneracy;  // binomial(2N, m)
};
TowerHistogram tower_histogram(const Mat& rho, const LatticeSpec& spec);

// --- building blocks (also used by tests) -------------------------------

/// Quadratic fermion Hamiltonian sum H_ij c_i^dag c_j in the Fock basis.
SpMat fock_quadratic_hamiltonian(const Mat& hopping);

/// Pairing jump operator u c_{s0} - v e^{i phi} c_{s1}^dag in the Fock basis.
SpMat fock_pair_jump(const LatticeSpec& spec);

/// Bogoliubov annihilation operators beta_{+g}, beta_{-g} as Fock matrices.
std::pair<SpMat, SpMat> bogoliubov_mode_operators(const LatticeSpec& spec,
                                                  const EigenBasis& basis,
                                                  const BogoliubovData& bog,
                                                  int g);

/// Total Bogoliubov number operator sum_g (n_{+g} + n_{-g}).
Mat bogoliubov_number_operator(const LatticeSpec& spec);

/// Explicit unitary relating the spin register (site -N most significant)
/// to the Fock register (little-endian): a bit-reversal permutation with
/// string signs. U O_spin U^dag reproduces the fermionized operators.
Mat jw_unitary(const LatticeSpec& spec);

}  // namespace dissipad
