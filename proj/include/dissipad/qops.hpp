#pragma once

#include <vector>

#include "dissipad/types.hpp"

namespace dissipad {

// Sparse many-body operators on a register of two-level sites.
//
// Spin picture: tensor (Kronecker) construction, slot 0 is the most
// significant factor, so the basis integer of a product state reads the
// site occupations left to right.
//
// Fock picture: occupation-number basis ordered by site index with a
// little-endian integer encoding (bit k = occupation of slot k); the
// fermionic sign of c_k counts the occupied slots below k.

namespace pauli {
Eigen::Matrix2cd x();
Eigen::Matrix2cd y();
Eigen::Matrix2cd z();
Eigen::Matrix2cd plus();   // |1><0|
Eigen::Matrix2cd minus();  // |0><1|
}  // namespace pauli

/// Embed a single-site operator at slot k (spin picture).
SpMat spin_site_op(int n_sites, int k, const Eigen::Matrix2cd& op);

/// prod_i (-sigma^z_i), the total excitation-number parity.
SpMat spin_parity(int n_sites);

/// sum_i (1 + sigma^z_i)/2.
SpMat spin_excitation_number(int n_sites);

/// Fermionic annihilation operator for slot k (Fock picture).
SpMat fock_annihilation(int n_sites, int k);

/// (-1)^{N} in the Fock picture (diagonal signs).
SpMat fock_parity(int n_sites);

/// Vectorized Lindblad generator, column-stacking convention:
/// L = -i(I (x) H - H^T (x) I) + sum_k r_k [conj(J_k) (x) J_k
///     - 1/2 I (x) J_k^dag J_k - 1/2 (J_k^dag J_k)^T (x) I].
SpMat liouvillian_matrix(const SpMat& h, const std::vector<SpMat>& jumps,
                         const std::vector<double>& rates);

/// ||vec(1)^dag L||, zero for trace-preserving generators.
double trace_preservation_residual(const SpMat& liouvillian);

/// Reduced density matrix over `keep` (slot indices, first entry becomes the
/// most significant factor of the reduced register).
Mat partial_trace_keep(const Mat& rho, int n_sites, const std::vector<int>& keep);

/// Matrix <-> column-stacked vector.
Vec vectorize(const Mat& rho);
Mat unvectorize(const Vec& v, int dim);

}  // namespace dissipad
