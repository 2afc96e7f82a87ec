#pragma once

#include <array>
#include <vector>

#include "dissipad/types.hpp"

namespace dissipad {

enum class Sublattice { A, B, Unassigned };

/// Lattice plus localized pairing dissipator. Sites are indexed 0..2N-1
/// internally; chain builders map the labels (-N..-1, 1..N) onto that range
/// in order, so there is no 0th site.
struct LatticeSpec {
  int n_pairs = 0;                      // N; the lattice has 2N sites
  Mat hopping;                          // 2N x 2N Hermitian single-particle matrix
  std::vector<Sublattice> sublattice;   // per-site label
  int diss_site_0 = 0;                  // annihilation side of the pairing jump
  int diss_site_1 = 1;                  // creation side
  double u = 1.0, v = 0.0;              // u^2 + v^2 = 1, both in [0,1]
  double phi = 0.0;                     // pairing phase
  double gamma = 1.0;                   // dissipation strength

  int n_sites() const { return 2 * n_pairs; }
  void set_v2(double v2);               // sets v = sqrt(v2), u = sqrt(1-v2)
  void validate() const;                // throws Error on any broken invariant

  /// Chain label (-N..-1, 1..N) to internal index.
  static int chain_index(int label, int n_pairs);
  /// Internal index back to chain label.
  static int chain_label(int index, int n_pairs);
};

/// Result of the symmetry checks that guarantee a pure steady state.
struct ChiralReport {
  bool is_bipartite_hopping = false;  // assigned labels, H couples only A<->B
  bool chiral_ok = false;             // a diagonal sign operator C with CHC = -H exists
  bool constraint_ok = false;         // pairing ratio condition at the dissipation sites
  std::vector<int> dark_modes;        // 1-based pair indices with negligible overlap
  double max_ratio_residual = 0.0;
  int worst_gamma = 0;                // 1-based, where the residual peaks
  double min_overlap = 0.0;           // min over pairs of the dissipator overlap N_g
  double dark_threshold = 0.0;

  bool ok() const {
    return chiral_ok && constraint_ok && dark_modes.empty();
  }
};

/// Right polar factorization V = W U of the A->B hopping block. U maps
/// A-eigenmodes onto their B partners; W is Hermitian (possibly indefinite)
/// and carries the spectrum. Sign completion is deterministic: each singular
/// direction takes the sign of Re<p_k, q_k>, so Hermitian V returns U = 1.
struct PolarStructure {
  Mat U;
  Mat W;
  bool singular = false;
  double min_singular_value = 0.0;
  std::vector<int> a_sites, b_sites;  // row/column site order used for V
};

/// Open nearest-neighbour chain with 2N sites. couplings holds the 2N-1 bond
/// values left to right; with mirror=true only N values are supplied,
/// [middle bond, then outward], and the remaining bonds are reflected.
LatticeSpec build_chain(int n_pairs, const std::vector<double>& couplings, bool mirror);

struct BipartiteEdge {
  int a;  // index within sublattice A (0..N-1)
  int b;  // index within sublattice B (0..N-1)
  cxd amplitude;
};

/// Block Hamiltonian [[0, V], [V^dag, 0]]: A sites come first (0..N-1),
/// B sites after (N..2N-1). Dissipator defaults to (A0, B0).
LatticeSpec build_bipartite(const std::vector<BipartiteEdge>& edges, int n_pairs);

/// 8-site two-dimensional branched lattice with 7 bonds: four amplitudes are
/// free, the remaining three are solved numerically so every eigenmode pair
/// couples to the two dissipation sites with equal weight. The steady state
/// is then pure with uniform density v^2 but non-rainbow pairing.
LatticeSpec build_constrained_2d(const std::array<double, 4>& free_bonds);

ChiralReport verify_chiral(const LatticeSpec& spec);
PolarStructure polar_pairing(const LatticeSpec& spec);

}  // namespace dissipad
