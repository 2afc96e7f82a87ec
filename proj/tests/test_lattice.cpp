#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dissipad/errors.hpp"
#include "dissipad/gaussian.hpp"
#include "dissipad/lattice.hpp"

using namespace dissipad;

namespace {
std::vector<double> random_couplings(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> j(n);
  for (double& x : j) x = u(rng);
  return j;
}
}  // namespace

TEST_CASE("two-site chain") {
  LatticeSpec spec = build_chain(1, {1.7}, true);
  CHECK(spec.n_sites() == 2);
  CHECK(spec.hopping(0, 1).real() == doctest::Approx(1.7));
  CHECK(spec.hopping(1, 0).real() == doctest::Approx(1.7));
  CHECK(spec.hopping(0, 0) == cxd(0, 0));
  CHECK(spec.sublattice[0] == Sublattice::A);
  CHECK(spec.sublattice[1] == Sublattice::B);
  CHECK(spec.diss_site_0 == 0);
  CHECK(spec.diss_site_1 == 1);
}

TEST_CASE("eight-site uniform mirror chain") {
  LatticeSpec spec = build_chain(4, {1.0, 1.0, 1.0, 1.0}, true);
  CHECK(spec.n_sites() == 8);
  for (int p = 0; p + 1 < 8; ++p)
    CHECK(spec.hopping(p, p + 1).real() == doctest::Approx(1.0));
  CHECK(spec.diss_site_0 == LatticeSpec::chain_index(-1, 4));
  CHECK(spec.diss_site_1 == LatticeSpec::chain_index(+1, 4));
  ChiralReport rep = verify_chiral(spec);
  CHECK(rep.is_bipartite_hopping);
  CHECK(rep.chiral_ok);
  CHECK(rep.constraint_ok);
  CHECK(rep.dark_modes.empty());
}

TEST_CASE("random mirror chains satisfy the placement condition") {
  for (unsigned seed : {3u, 4u, 5u}) {
    LatticeSpec spec = build_chain(3, random_couplings(3, seed), true);
    spec.set_v2(0.35);
    ChiralReport rep = verify_chiral(spec);
    CHECK(rep.constraint_ok);
    CHECK(rep.dark_modes.empty());
  }
}

TEST_CASE("builder argument validation") {
  CHECK_THROWS_AS(build_chain(0, {}, true), Error);
  CHECK_THROWS_AS(build_chain(2, {1.0}, true), Error);
  CHECK_THROWS_AS(build_chain(2, {1.0, 1.0}, false), Error);
  CHECK_THROWS_AS(build_bipartite({{0, 2, 1.0}}, 2), Error);
}

TEST_CASE("single bipartite edge equals the two-site chain") {
  LatticeSpec bi = build_bipartite({{0, 0, 1.7}}, 1);
  LatticeSpec chain = build_chain(1, {1.7}, true);
  CHECK((bi.hopping - chain.hopping).norm() < 1e-15);
  CHECK(bi.diss_site_0 == 0);
  CHECK(bi.diss_site_1 == 1);
}

TEST_CASE("ladder with only cross edges is bipartite") {
  std::vector<BipartiteEdge> edges = {{0, 0, 1.0}, {0, 1, 0.8}, {1, 0, 0.6}, {1, 1, 1.2}};
  LatticeSpec spec = build_bipartite(edges, 2);
  ChiralReport rep = verify_chiral(spec);
  CHECK(rep.is_bipartite_hopping);
  CHECK(rep.chiral_ok);
  CHECK(rep.constraint_ok);
}

TEST_CASE("same-sublattice dissipation breaks the placement condition") {
  LatticeSpec spec = build_chain(3, random_couplings(3, 7u), true);
  spec.diss_site_1 = spec.diss_site_0 - 2;  // two steps away: same sublattice
  ChiralReport rep = verify_chiral(spec);
  CHECK(rep.chiral_ok);
  CHECK_FALSE(rep.constraint_ok);
  CHECK(rep.worst_gamma >= 1);
  CHECK(rep.max_ratio_residual > 1e-3);
}

TEST_CASE("a same-sublattice bond kills bipartiteness and chirality") {
  LatticeSpec spec = build_chain(2, {1.0, 1.0}, true);
  spec.hopping(0, 2) = 0.5;  // A-A bond closes an odd loop
  spec.hopping(2, 0) = 0.5;
  ChiralReport rep = verify_chiral(spec);
  CHECK_FALSE(rep.is_bipartite_hopping);
  CHECK_FALSE(rep.chiral_ok);
}

TEST_CASE("chiral spectra are symmetric about zero") {
  for (unsigned seed : {11u, 12u}) {
    LatticeSpec spec = build_chain(4, random_couplings(4, seed), true);
    Eigen::SelfAdjointEigenSolver<Mat> es(spec.hopping);
    const RVec& w = es.eigenvalues();
    for (int k = 0; k < w.size(); ++k)
      CHECK(w(k) == doctest::Approx(-w(w.size() - 1 - k)).epsilon(1e-10));
  }
}

TEST_CASE("placement verdict is gauge invariant") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> phase(0, 6.28);
  for (bool break_placement : {false, true}) {
    LatticeSpec spec = build_chain(3, random_couplings(3, 17u), true);
    if (break_placement) spec.diss_site_1 = spec.diss_site_0 - 2;
    const bool verdict = verify_chiral(spec).constraint_ok;
    for (int trial = 0; trial < 4; ++trial) {
      Vec g(spec.n_sites());
      for (int i = 0; i < spec.n_sites(); ++i)
        g(i) = std::exp(I_UNIT * phase(rng));
      LatticeSpec rotated = spec;
      rotated.hopping = g.asDiagonal() * spec.hopping * g.asDiagonal().inverse();
      CHECK(verify_chiral(rotated).constraint_ok == verdict);
    }
  }
}

TEST_CASE("polar factorization: positive diagonal block") {
  std::vector<BipartiteEdge> edges = {{0, 0, 1.0}, {1, 1, 2.0}};
  PolarStructure ps = polar_pairing(build_bipartite(edges, 2));
  CHECK((ps.U - Mat::Identity(2, 2)).norm() < 1e-12);
  CHECK(ps.W(0, 0).real() == doctest::Approx(1.0));
  CHECK(ps.W(1, 1).real() == doctest::Approx(2.0));
  CHECK_FALSE(ps.singular);
}

TEST_CASE("polar factorization: mirror chain reads off the identity pairing") {
  LatticeSpec spec = build_chain(3, {0.9, 1.4, 0.7}, true);
  PolarStructure ps = polar_pairing(spec);
  CHECK((ps.U - Mat::Identity(3, 3)).norm() < 1e-10);
  // V itself is Hermitian in the mirror ordering, so W = V
  Mat v(3, 3);
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      v(k, l) = spec.hopping(ps.a_sites[k], ps.b_sites[l]);
  CHECK((v - v.adjoint()).norm() < 1e-14);
  CHECK((ps.W - v).norm() < 1e-10);
}

TEST_CASE("polar factorization: random block reconstructs") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  std::vector<BipartiteEdge> edges;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) edges.push_back({a, b, cxd(g(rng), g(rng))});
  LatticeSpec spec = build_bipartite(edges, 3);
  PolarStructure ps = polar_pairing(spec);
  Mat v(3, 3);
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      v(k, l) = spec.hopping(ps.a_sites[k], ps.b_sites[l]);
  CHECK((ps.U * ps.U.adjoint() - Mat::Identity(3, 3)).norm() < 1e-10);
  CHECK((ps.W - ps.W.adjoint()).norm() < 1e-10);
  CHECK((ps.W * ps.U - v).norm() < 1e-10 * v.norm());
}

TEST_CASE("constrained 2d lattice satisfies the uniform-overlap condition") {
  LatticeSpec spec = build_constrained_2d({1.0, 0.8, 1.3, 0.9});
  spec.set_v2(0.4);
  ChiralReport rep = verify_chiral(spec);
  CHECK(rep.is_bipartite_hopping);
  CHECK(rep.chiral_ok);
  CHECK(rep.constraint_ok);
  CHECK(rep.dark_modes.empty());
  EigenBasis basis = chiral_paired_basis(spec);
  for (int g = 0; g < 4; ++g) {
    const double w0 = std::abs(basis.wavefunctions(spec.diss_site_0, g));
    const double w1 = std::abs(basis.wavefunctions(spec.diss_site_1, g));
    CHECK(w0 == doctest::Approx(w1).epsilon(1e-8));
  }
}

TEST_CASE("invalid specs are rejected") {
  LatticeSpec spec = build_chain(2, {1.0, 1.0}, true);
  spec.u = 0.9;  // breaks normalization
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = build_chain(2, {1.0, 1.0}, true);
  spec.hopping(0, 1) = cxd(1.0, 0.5);  // not Hermitian against (1,0)
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = build_chain(2, {1.0, 1.0}, true);
  spec.diss_site_1 = spec.diss_site_0;
  CHECK_THROWS_AS(spec.validate(), Error);
}
