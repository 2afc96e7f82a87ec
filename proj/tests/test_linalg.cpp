#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dissipad/linalg.hpp"

using namespace dissipad;

namespace {
RMat random_real(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  RMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m;
}
}  // namespace

TEST_CASE("lyapunov solve reproduces the residual equation") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const int n = 12;
    RMat x = random_real(n, seed) - 6.0 * RMat::Identity(n, n);
    RMat c0 = random_real(n, seed + 100);
    RMat c = c0 - c0.transpose();  // antisymmetric source
    RMat s = lyapunov_solve(x, c);
    CHECK((x * s + s * x.transpose() - c).norm() < 1e-9 * std::max(1.0, s.norm()));
  }
}

TEST_CASE("pfaffian on canonical blocks and the determinant identity") {
  RMat a(2, 2);
  a << 0, 3, -3, 0;
  CHECK(pfaffian(a) == doctest::Approx(3.0));
  RMat b = RMat::Zero(4, 4);
  b(0, 1) = 2;
  b(1, 0) = -2;
  b(2, 3) = -5;
  b(3, 2) = 5;
  CHECK(pfaffian(b) == doctest::Approx(-10.0));
  for (unsigned seed : {5u, 6u}) {
    RMat r = random_real(6, seed);
    RMat anti = r - r.transpose();
    const double pf = pfaffian(anti);
    CHECK(pf * pf == doctest::Approx(anti.determinant()).epsilon(1e-8));
  }
}

TEST_CASE("krylov propagation matches the dense exponential") {
  const int n = 48;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::vector<Triplet> trips;
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, i, cxd(-std::abs(g(rng)) - 0.2, g(rng)));
    for (int k = 0; k < 4; ++k) {
      int j = static_cast<int>(rng() % n);
      trips.emplace_back(i, j, 0.3 * cxd(g(rng), g(rng)));
    }
  }
  SpMat a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = cxd(g(rng), g(rng));
  for (double t : {0.1, 1.0, 4.0}) {
    Vec dense = dense_expm(t * Mat(a)) * v;
    Vec kry = krylov_expv(a, v, t, 1e-11, 24);
    CHECK((dense - kry).norm() < 1e-8 * dense.norm());
  }
}

TEST_CASE("near-zero subspace finds the kernel of a sparse operator") {
  const int n = 200;
  std::vector<Triplet> trips;
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  // two exact zeros, everything else shifted left
  for (int i = 0; i < n; ++i) {
    cxd diag = (i < 2) ? cxd(0, 0) : cxd(-0.05 - 0.5 * std::abs(g(rng)), 0.3 * g(rng));
    trips.emplace_back(i, i, diag);
    if (i + 1 < n && i >= 2) trips.emplace_back(i, i + 1, cxd(0.1 * g(rng), 0));
  }
  SpMat a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  NearZeroResult res = eigs_near_zero(a, 5);
  int zeros = 0;
  for (const cxd& z : res.eigenvalues)
    if (std::abs(z) < 1e-10) ++zeros;
  CHECK(zeros == 2);
  CHECK((a * res.vectors.col(0)).norm() < 1e-9);
  CHECK((a * res.vectors.col(1)).norm() < 1e-9);
}

TEST_CASE("line fit recovers slope and intercept") {
  std::vector<double> x, y;
  for (int k = 0; k < 12; ++k) {
    x.push_back(0.5 * k);
    y.push_back(2.0 - 3.0 * 0.5 * k);
  }
  LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.residual < 1e-12);
}

TEST_CASE("spectrum sort is deterministic under rounding") {
  std::vector<cxd> v = {{1e-15, 1.0}, {0.0, -1.0}, {-2.0, 0.0}};
  sort_spectrum(v);
  CHECK(v[0].real() == doctest::Approx(-2.0));
  CHECK(v[1].imag() == doctest::Approx(-1.0));
  CHECK(v[2].imag() == doctest::Approx(1.0));
}
