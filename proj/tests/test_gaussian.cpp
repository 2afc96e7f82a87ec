#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dissipad/errors.hpp"
#include "dissipad/gaussian.hpp"
#include "dissipad/jw.hpp"
#include "dissipad/linalg.hpp"
#include "support.hpp"

using namespace dissipad;
using namespace dissipad::testing;

namespace {
LatticeSpec mirror_chain(int n_pairs, unsigned seed, double v2, double gamma = 1.0) {
  LatticeSpec spec = build_chain(n_pairs, random_couplings(n_pairs, seed), true);
  spec.set_v2(v2);
  spec.gamma = gamma;
  return spec;
}
}  // namespace

TEST_CASE("two-site eigenbasis") {
  LatticeSpec spec = build_chain(1, {1.3}, true);
  EigenBasis basis = eigenbasis(spec);
  CHECK(basis.energies(0) == doctest::Approx(1.3));
  CHECK(basis.energies(1) == doctest::Approx(-1.3));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(basis.wavefunctions(0, 0)) == doctest::Approx(r));
  CHECK(std::abs(basis.wavefunctions(1, 0)) == doctest::Approx(r));
  // gauge: real non-negative amplitude on the first dissipation site
  CHECK(basis.wavefunctions(0, 0).real() == doctest::Approx(r));
  CHECK(basis.wavefunctions(0, 1).real() == doctest::Approx(r));
}

TEST_CASE("eigenbasis invariants on random mirror chains") {
  for (unsigned seed : {2u, 3u}) {
    LatticeSpec spec = mirror_chain(4, seed, 0.3);
    EigenBasis basis = eigenbasis(spec);
    const int n = spec.n_sites();
    CHECK((basis.wavefunctions.adjoint() * basis.wavefunctions -
           Mat::Identity(n, n)).norm() < tol::orthonormal);
    for (int k = 0; k < 4; ++k)
      CHECK(basis.energies(k) == doctest::Approx(-basis.energies(4 + k)).epsilon(1e-10));
    for (int k = 0; k < n; ++k) {
      Vec res = spec.hopping * basis.wavefunctions.col(k) -
                basis.energies(k) * basis.wavefunctions.col(k);
      CHECK(res.norm() < tol::eig_residual);
    }
  }
}

TEST_CASE("dimerized chain keeps a gapped paired spectrum") {
  // alternating weak/strong bonds ending on strong ones: no edge modes
  LatticeSpec spec = build_chain(4, {0.5, 1.5, 0.5, 1.5}, true);
  EigenBasis basis = eigenbasis(spec);
  CHECK(basis.energies.head(4).minCoeff() > 0.1);
  CHECK(verify_chiral(spec).constraint_ok);
}

TEST_CASE("uniform chains keep mirror coefficients") {
  LatticeSpec spec = mirror_chain(3, 5u, 0.4);
  EigenBasis basis = eigenbasis(spec);
  BogoliubovData bog = bogoliubov(spec, basis);
  for (int g = 0; g < 3; ++g) {
    CHECK(bog.u_alpha(g).real() == doctest::Approx(spec.u).epsilon(1e-12));
    CHECK(std::abs(bog.u_alpha(g).imag()) < 1e-12);
    CHECK(std::abs(bog.v_alpha(g)) == doctest::Approx(spec.v).epsilon(1e-12));
    CHECK(bog.x_gamma(g).real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::norm(bog.u_alpha(g)) + std::norm(bog.v_alpha(g)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    const cxd a0 = basis.wavefunctions(spec.diss_site_0, g);
    const cxd b1 = basis.wavefunctions(spec.diss_site_1, 3 + g);
    CHECK(bog.n_alpha(g) ==
          doctest::Approx(std::sqrt(spec.u * spec.u * std::norm(a0) +
                                    spec.v * spec.v * std::norm(b1)))
              .epsilon(1e-12));
  }
}

TEST_CASE("no pairing means trivial coefficients") {
  LatticeSpec spec = mirror_chain(3, 6u, 0.0);
  BogoliubovData bog = bogoliubov(spec, eigenbasis(spec));
  for (int g = 0; g < 3; ++g) {
    CHECK(std::abs(bog.v_alpha(g)) < 1e-14);
    CHECK(std::abs(bog.u_alpha(g)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("jump operator expands over the Bogoliubov modes") {
  // beta_L = sum_g N_g (beta_g + x_g^{-1} beta_{-g}), checked on the
  // single-particle coefficient vectors
  for (unsigned seed : {8u, 9u}) {
    LatticeSpec spec = mirror_chain(4, seed, 0.45);
    spec.phi = 0.7;
    EigenBasis basis = eigenbasis(spec);
    BogoliubovData bog = bogoliubov(spec, basis);
    const int n = spec.n_sites();
    Vec p_sum = Vec::Zero(n), q_sum = Vec::Zero(n);
    for (int g = 0; g < 4; ++g) {
      const cxd xinv = 1.0 / bog.x_gamma(g);
      // beta_{+g}: p += u_g conj(psi_g), q += -v_g psi_{-g}
      p_sum += bog.n_alpha(g) * bog.u_alpha(g) * basis.wavefunctions.col(g).conjugate();
      q_sum -= bog.n_alpha(g) * bog.v_alpha(g) * basis.wavefunctions.col(4 + g);
      // beta_{-g}: p += u_g conj(psi_{-g}), q += +v_g psi_g, weighted by 1/x_g
      p_sum += bog.n_alpha(g) * xinv * bog.u_alpha(g) *
               basis.wavefunctions.col(4 + g).conjugate();
      q_sum += bog.n_alpha(g) * xinv * bog.v_alpha(g) * basis.wavefunctions.col(g);
    }
    Vec p, q;
    jump_vectors(spec, p, q);
    CHECK((p - p_sum).norm() < 1e-10);
    CHECK((q - q_sum).norm() < 1e-10);
  }
}

TEST_CASE("constraint violation refuses with a diagnostic") {
  LatticeSpec spec = mirror_chain(3, 10u, 0.4);
  spec.diss_site_1 = spec.diss_site_0 - 2;
  EigenBasis basis = chiral_paired_basis(spec);
  CHECK_THROWS_AS(bogoliubov(spec, basis), ConstraintError);
  try {
    bogoliubov(spec, basis);
  } catch (const ConstraintError& e) {
    CHECK(e.worst_gamma >= 1);
    CHECK(e.residual > 1e-3);
  }
}

TEST_CASE("steady correlators in the trivial limits") {
  LatticeSpec spec = mirror_chain(3, 11u, 0.0);
  PairCovariance vac = analytic_steady_correlators(bogoliubov(spec, eigenbasis(spec)),
                                                   eigenbasis(spec));
  CHECK(vac.normal.norm() < 1e-12);
  CHECK(vac.anomalous.norm() < 1e-12);

  spec.set_v2(1.0);
  EigenBasis basis = eigenbasis(spec);
  PairCovariance full = analytic_steady_correlators(bogoliubov(spec, basis), basis);
  CHECK((full.normal - Mat::Identity(6, 6)).norm() < 1e-12);
  CHECK(full.anomalous.norm() < 1e-12);
}

TEST_CASE("uniform mirror chain has flat density v^2") {
  LatticeSpec spec = build_chain(4, {1.0, 1.0, 1.0, 1.0}, true);
  spec.set_v2(0.4);
  EigenBasis basis = eigenbasis(spec);
  PairCovariance cov = analytic_steady_correlators(bogoliubov(spec, basis), basis);
  CHECK((cov.normal - 0.4 * Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
  cov.validate(true);  // pure Gaussian state
  CHECK(std::abs(energy_expectation(spec.hopping, cov)) <
        1e-10 * spec.hopping.norm());
  Vec p, q;
  jump_vectors(spec, p, q);
  CHECK(mode_occupation(cov, p, q) < 1e-12);
  CHECK(fermion_parity(cov) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fock oracle: the paired state matches the analytic correlators") {
  for (double v2 : {0.25, 0.5, 0.7}) {
    LatticeSpec spec = mirror_chain(2, 13u, v2);
    spec.phi = 0.3;
    EigenBasis basis = eigenbasis(spec);
    BogoliubovData bog = bogoliubov(spec, basis);
    Vec psi = paired_state_fock(spec, basis, bog);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // annihilated by the jump operator
    CHECK((fock_pair_jump(spec) * psi).norm() < 1e-12);
    PairCovariance from_fock = covariance_from_state(psi, 4);
    PairCovariance analytic = analytic_steady_correlators(bog, basis);
    CHECK(max_abs_diff(from_fock.normal, analytic.normal) < 1e-12);
    CHECK(max_abs_diff(from_fock.anomalous, analytic.anomalous) < 1e-12);
  }
}

TEST_CASE("fock oracle: Liouvillian steady state matches the analytic state") {
  LatticeSpec spec = mirror_chain(2, 14u, 0.4, 0.8);
  SpMat h = fock_quadratic_hamiltonian(spec.hopping);
  SuperoperatorMatrix l = fock_liouvillian(h, {fock_pair_jump(spec)}, {spec.gamma});
  Mat rho = dense_steady_state(l.mat, 16);
  PairCovariance from_fock = covariance_from_density(rho, 4);
  EigenBasis basis = eigenbasis(spec);
  PairCovariance analytic = analytic_steady_correlators(bogoliubov(spec, basis), basis);
  CHECK(max_abs_diff(from_fock.normal, analytic.normal) < 1e-9);
  CHECK(max_abs_diff(from_fock.anomalous, analytic.anomalous) < 1e-9);
}

TEST_CASE("covariance flow matches the exact Fock evolution") {
  LatticeSpec spec = mirror_chain(2, 15u, 0.35, 1.2);
  SpMat h = fock_quadratic_hamiltonian(spec.hopping);
  SuperoperatorMatrix l = fock_liouvillian(h, {fock_pair_jump(spec)}, {spec.gamma});
  for (unsigned seed : {1u, 2u}) {
    Mat rho;
    PairCovariance cov;
    random_product_state(4, seed, rho, cov);
    std::vector<double> times = {0.0, 0.3, 1.1, 2.7, 6.5};
    auto traj = evolve_covariance(spec, cov, times);
    Vec state = vectorize(rho);
    double t_now = 0;
    for (size_t k = 0; k < times.size(); ++k) {
      if (times[k] > t_now) state = krylov_expv(l.mat, state, times[k] - t_now, 1e-11);
      t_now = times[k];
      PairCovariance exact = covariance_from_density(unvectorize(state, 16), 4);
      CHECK(max_abs_diff(exact.normal, traj[k].normal) < 1e-8);
      CHECK(max_abs_diff(exact.anomalous, traj[k].anomalous) < 1e-8);
      traj[k].validate();
    }
  }
}

TEST_CASE("rapidity subset sums reproduce the full Liouvillian spectrum") {
  LatticeSpec spec = mirror_chain(2, 16u, 0.3, 0.7);
  RapiditySpectrum rs = rapidity_spectrum(spec);
  CHECK(rs.rates.size() == 8);
  for (const cxd& r : rs.rates) CHECK(r.real() <= 1e-12);
  std::vector<cxd> sums{cxd(0, 0)};
  for (const cxd& r : rs.rates) {
    const size_t n = sums.size();
    for (size_t k = 0; k < n; ++k) sums.push_back(sums[k] + r);
  }
  SpMat h = fock_quadratic_hamiltonian(spec.hopping);
  SuperoperatorMatrix l = fock_liouvillian(h, {fock_pair_jump(spec)}, {spec.gamma});
  Vec ev = dense_eigenvalues(Mat(l.mat));
  std::vector<cxd> exact(ev.data(), ev.data() + ev.size());
  REQUIRE(sums.size() == exact.size());
  CHECK(spectra_distance(sums, exact, 1e-6) < 1e-8);
}

TEST_CASE("rapidities are independent of the pairing weight") {
  LatticeSpec spec = build_chain(3, {1.0, 1.0, 1.0}, true);
  spec.gamma = 1.0;  // Gamma = J
  spec.set_v2(0.1);
  RapiditySpectrum a = rapidity_spectrum(spec);
  spec.set_v2(0.4);
  RapiditySpectrum b = rapidity_spectrum(spec);
  REQUIRE(a.rates.size() == b.rates.size());
  for (size_t k = 0; k < a.rates.size(); ++k)
    CHECK(std::abs(a.rates[k] - b.rates[k]) < 1e-10);
  CHECK(a.gap > 0);
}

TEST_CASE("decoupled dissipated pair rates") {
  LatticeSpec spec = build_chain(1, {0.0}, true);
  spec.set_v2(0.4);
  spec.gamma = 1.3;
  RapiditySpectrum rs = rapidity_spectrum(spec);
  // two cooled directions at -Gamma/2, two dark zeros
  int at_half = 0, zeros = 0;
  for (const cxd& r : rs.rates) {
    if (std::abs(r - cxd(-0.65, 0)) < 1e-10) ++at_half;
    if (std::abs(r) < 1e-12) ++zeros;
  }
  CHECK(at_half == 2);
  CHECK(zeros == 2);
}

TEST_CASE("closed system rapidities are purely imaginary") {
  LatticeSpec spec = mirror_chain(3, 18u, 0.4);
  spec.gamma = 0.0;
  RapiditySpectrum rs = rapidity_spectrum(spec);
  for (const cxd& r : rs.rates) CHECK(std::abs(r.real()) < 1e-12);
  CHECK(rs.gap == 0.0);
}

TEST_CASE("steady covariance equals the analytic correlators") {
  for (unsigned seed : {21u, 22u, 23u}) {
    LatticeSpec spec = mirror_chain(5, seed, 0.45, 1.1);
    PairCovariance fixed = steady_covariance(spec);
    EigenBasis basis = eigenbasis(spec);
    PairCovariance analytic =
        analytic_steady_correlators(bogoliubov(spec, basis), basis);
    CHECK(max_abs_diff(fixed.normal, analytic.normal) < 1e-10);
    CHECK(max_abs_diff(fixed.anomalous, analytic.anomalous) < 1e-10);
  }
}

TEST_CASE("vacuum pairing weight gives the vacuum fixed point") {
  LatticeSpec spec = mirror_chain(3, 24u, 0.0);
  PairCovariance fixed = steady_covariance(spec);
  CHECK(fixed.normal.norm() < 1e-10);
  CHECK(fixed.anomalous.norm() < 1e-10);
}

TEST_CASE("dark modes refuse the steady-state constructions") {
  // two disconnected dimers: the second pair never sees the dissipator
  std::vector<BipartiteEdge> edges = {{0, 0, 1.0}, {1, 1, 0.9}};
  LatticeSpec spec = build_bipartite(edges, 2);
  spec.set_v2(0.4);
  ChiralReport rep = verify_chiral(spec);
  // the second dimer's pair sits at energy 0.9, i.e. pair index 1 after the
  // ascending sort
  CHECK(rep.dark_modes == std::vector<int>{1});
  EigenBasis basis = chiral_paired_basis(spec);
  CHECK_THROWS_AS(
      analytic_steady_correlators(bogoliubov(spec, basis), basis), DarkModeError);
  CHECK_THROWS_AS(steady_covariance(spec), DarkModeError);
}

TEST_CASE("closed-system evolution conserves the occupation spectrum") {
  LatticeSpec spec = mirror_chain(3, 26u, 0.4);
  spec.gamma = 0.0;
  Mat rho;
  PairCovariance cov;
  random_product_state(6, 3u, rho, cov);
  auto traj = evolve_covariance(spec, cov, {0.0, 2.0, 5.0});
  Eigen::SelfAdjointEigenSolver<Mat> before(traj.front().normal);
  Eigen::SelfAdjointEigenSolver<Mat> after(traj.back().normal);
  CHECK((before.eigenvalues() - after.eigenvalues()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("vacuum start converges to the steady correlators") {
  // the single mirror pair relaxes at Gamma/4, so the horizon 50/Gamma
  // spans ~12 decay times of the slowest covariance pair
  LatticeSpec spec = build_chain(1, {1.0}, true);
  spec.set_v2(0.4);
  spec.gamma = 1.0;
  const double t_final = 50.0 / spec.gamma;
  auto traj = evolve_covariance(spec, vacuum_covariance(2), {t_final});
  EigenBasis basis = eigenbasis(spec);
  PairCovariance target = analytic_steady_correlators(bogoliubov(spec, basis), basis);
  CHECK(covariance_distance(traj.back(), target) < 1e-6);
}

TEST_CASE("log negativity") {
  LatticeSpec spec = build_chain(4, {1.0, 1.0, 1.0, 1.0}, true);
  spec.set_v2(0.0);
  CHECK(log_negativity(bogoliubov(spec, eigenbasis(spec))) == doctest::Approx(0.0));
  spec.set_v2(0.3);
  const double expected = 4.0 * std::log2(1.0 + 2.0 * spec.u * spec.v);
  CHECK(log_negativity(bogoliubov(spec, eigenbasis(spec))) ==
        doctest::Approx(expected).epsilon(1e-12));
  spec.set_v2(0.5);
  CHECK(log_negativity(bogoliubov(spec, eigenbasis(spec))) ==
        doctest::Approx(4.0).epsilon(1e-12));
  // linear growth: per-pair contribution is size independent
  LatticeSpec spec6 = build_chain(6, std::vector<double>(6, 1.0), true);
  spec6.set_v2(0.3);
  CHECK(log_negativity(bogoliubov(spec6, eigenbasis(spec6))) / 6.0 ==
        doctest::Approx(expected / 4.0).epsilon(1e-12));
}

TEST_CASE("gap scaling of the uniform chain family") {
  auto family = [](int n) {
    LatticeSpec spec = build_chain(n, std::vector<double>(n, 1.0), true);
    spec.set_v2(0.4);
    return spec;
  };
  GapTable table = gap_scaling(family, {2, 3, 4, 5, 6, 7, 8});
  for (size_t k = 1; k < table.gaps.size(); ++k)
    CHECK(table.gaps[k] < table.gaps[k - 1]);
  CHECK(table.slope <= -1.5);
  CHECK(table.residual < 0.5);
  CHECK(table.gaps.front() == doctest::Approx(rapidity_spectrum(family(2)).gap));
}

TEST_CASE("majorana covariance roundtrip") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 3; ++trial) {
    LatticeSpec spec = mirror_chain(3, 40u + trial, 0.55);
    EigenBasis basis = eigenbasis(spec);
    PairCovariance cov = analytic_steady_correlators(bogoliubov(spec, basis), basis);
    PairCovariance back = covariance_from_majorana(majorana_covariance(cov));
    CHECK(max_abs_diff(back.normal, cov.normal) < 1e-13);
    CHECK(max_abs_diff(back.anomalous, cov.anomalous) < 1e-13);
  }
  (void)g;
}

TEST_CASE("constrained 2d lattice: pure steady state with flat density") {
  LatticeSpec spec = build_constrained_2d({1.0, 0.8, 1.3, 0.9});
  spec.set_v2(0.4);
  PairCovariance cov = steady_covariance(spec);
  CHECK(majorana_purity_residual(majorana_covariance(cov)) < 1e-8);
  CHECK((cov.normal - 0.4 * Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-8);
  // generalized rainbow on the branched lattice: every site pairs with its
  // reflected partner across the rows, at the maximal pair amplitude u*v
  const double uv = spec.u * spec.v;
  // site order: A = (1,1),(0,0),(0,2),(1,3); B = (0,1),(0,3),(1,0),(1,2);
  // the row-swap reflection pairs (a0,b0),(a1,b2),(a2,b3),(a3,b1)
  const std::array<std::pair<int, int>, 4> pairs = {{{0, 4}, {1, 6}, {2, 7}, {3, 5}}};
  for (auto [i, j] : pairs)
    CHECK(std::abs(cov.anomalous(i, j)) == doctest::Approx(uv).epsilon(1e-8));
  double off = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      bool is_pair = false;
      for (auto [a, b] : pairs)
        if ((i == a && j == b) || (i == b && j == a)) is_pair = true;
      if (!is_pair) off = std::max(off, std::abs(cov.anomalous(i, j)));
    }
  CHECK(off < 1e-8);
}
