#include "dissipad/qops.hpp"

#include <bit>

#include <unsupported/Eigen/KroneckerProduct>

#include "dissipad/errors.hpp"

namespace dissipad {

namespace pauli {
Eigen::Matrix2cd x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
Eigen::Matrix2cd y() {
  Eigen::Matrix2cd m;
  m << 0, cxd(0, -1), cxd(0, 1), 0;
  return m;
}
Eigen::Matrix2cd z() {
  Eigen::Matrix2cd m;
  m << -1, 0, 0, 1;  // basis |0>, |1>; sigma^z = 2n - 1
  return m;
}
Eigen::Matrix2cd plus() {
  Eigen::Matrix2cd m;
  m << 0, 0, 1, 0;
  return m;
}
Eigen::Matrix2cd minus() {
  Eigen::Matrix2cd m;
  m << 0, 1, 0, 0;
  return m;
}
}  // namespace pauli

SpMat spin_site_op(int n_sites, int k, const Eigen::Matrix2cd& op) {
  const long dim = 1L << n_sites;
  const int bit = n_sites - 1 - k;  // slot 0 = most significant
  std::vector<Triplet> trips;
  trips.reserve(2 * dim);
  for (long col = 0; col < dim; ++col) {
    const int b = (col >> bit) & 1;
    for (int a = 0; a < 2; ++a) {
      const cxd val = op(a, b);
      if (val == cxd(0, 0)) continue;
      const long row = (col & ~(1L << bit)) | (long(a) << bit);
      trips.emplace_back(row, col, val);
    }
  }
  SpMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SpMat spin_parity(int n_sites) {
  const long dim = 1L << n_sites;
  std::vector<Triplet> trips;
  trips.reserve(dim);
  for (long s = 0; s < dim; ++s)
    trips.emplace_back(s, s, std::popcount(static_cast<unsigned long>(s)) % 2 ? -1.0 : 1.0);
  SpMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SpMat spin_excitation_number(int n_sites) {
  const long dim = 1L << n_sites;
  std::vector<Triplet> trips;
  trips.reserve(dim);
  for (long s = 0; s < dim; ++s)
    trips.emplace_back(s, s, double(std::popcount(static_cast<unsigned long>(s))));
  SpMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SpMat fock_annihilation(int n_sites, int k) {
  const long dim = 1L << n_sites;
  std::vector<Triplet> trips;
  trips.reserve(dim / 2);
  const long mask_below = (1L << k) - 1;
  for (long s = 0; s < dim; ++s) {
    if (!((s >> k) & 1)) continue;
    const int swaps = std::popcount(static_cast<unsigned long>(s & mask_below));
    trips.emplace_back(s ^ (1L << k), s, swaps % 2 ? -1.0 : 1.0);
  }
  SpMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SpMat fock_parity(int n_sites) {
  const long dim = 1L << n_sites;
  std::vector<Triplet> trips;
  trips.reserve(dim);
  for (long s = 0; s < dim; ++s)
    trips.emplace_back(s, s, std::popcount(static_cast<unsigned long>(s)) % 2 ? -1.0 : 1.0);
  SpMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

SpMat liouvillian_matrix(const SpMat& h, const std::vector<SpMat>& jumps,
                         const std::vector<double>& rates) {
  if (jumps.size() != rates.size())
    throw Error("liouvillian_matrix: jumps/rates length mismatch");
  const long d = h.rows();
  SpMat ident(d, d);
  ident.setIdentity();
  SpMat ht = SpMat(h.transpose());
  SpMat l =
      SpMat(Eigen::kroneckerProduct(ident, h)) * cxd(0, -1) +
      SpMat(Eigen::kroneckerProduct(ht, ident)) * cxd(0, 1);
  for (size_t k = 0; k < jumps.size(); ++k) {
    const SpMat& j = jumps[k];
    SpMat jdj = SpMat(j.adjoint()) * j;
    SpMat jc = j.conjugate();
    SpMat jdjt = SpMat(jdj.transpose());
    l += rates[k] * SpMat(Eigen::kroneckerProduct(jc, j));
    l -= (0.5 * rates[k]) * SpMat(Eigen::kroneckerProduct(ident, jdj));
    l -= (0.5 * rates[k]) * SpMat(Eigen::kroneckerProduct(jdjt, ident));
  }
  l.makeCompressed();
  return l;
}

double trace_preservation_residual(const SpMat& liouvillian) {
  const long d2 = liouvillian.rows();
  const long d = static_cast<long>(std::llround(std::sqrt(double(d2))));
  Vec id_vec = Vec::Zero(d2);
  for (long i = 0; i < d; ++i) id_vec(i * d + i) = 1.0;
  Vec row = liouvillian.adjoint() * id_vec;
  return row.norm();
}

Mat partial_trace_keep(const Mat& rho, int n_sites, const std::vector<int>& keep) {
  const int nk = static_cast<int>(keep.size());
  const long dk = 1L << nk;
  const int nt = n_sites - nk;
  const long dt = 1L << nt;
  std::vector<int> traced;
  for (int s = 0; s < n_sites; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);

  auto full_index = [&](long kbits, long tbits) {
    long idx = 0;
    for (int a = 0; a < nk; ++a)
      if ((kbits >> (nk - 1 - a)) & 1) idx |= 1L << (n_sites - 1 - keep[a]);
    for (int a = 0; a < nt; ++a)
      if ((tbits >> (nt - 1 - a)) & 1) idx |= 1L << (n_sites - 1 - traced[a]);
    return idx;
  };

  Mat red = Mat::Zero(dk, dk);
  for (long r = 0; r < dk; ++r)
    for (long c = 0; c < dk; ++c) {
      cxd acc = 0;
      for (long t = 0; t < dt; ++t) acc += rho(full_index(r, t), full_index(c, t));
      red(r, c) = acc;
    }
  return red;
}

Vec vectorize(const Mat& rho) {
  return Eigen::Map<const Vec>(rho.data(), rho.size());
}

Mat unvectorize(const Vec& v, int dim) {
  return Eigen::Map<const Mat>(v.data(), dim, dim);
}

}  // namespace dissipad
