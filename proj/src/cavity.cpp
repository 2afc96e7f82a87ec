#include "dissipad/cavity.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "dissipad/errors.hpp"
#include "dissipad/linalg.hpp"
#include "dissipad/qops.hpp"

namespace dissipad {

void DrivenCavityParams::validate() const {
  if (kappa <= 0) throw Error("cavity decay rate must be positive");
  if (n_max < 2) throw Error("cavity truncation needs at least 3 Fock levels");
  if (g_1 < 0 || g_2 < 0) throw Error("couplings must be non-negative");
}

double bessel_j(int n, double x) {
  if (n < 0) return (n % 2 ? -1.0 : 1.0) * bessel_j(-n, x);
  if (x < 0) return (n % 2 ? -1.0 : 1.0) * bessel_j(n, -x);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  // downward recurrence (Miller), normalized by J_0 + 2 sum J_{2k} = 1
  const int start = 2 * ((std::max(n, int(x)) + 26 + int(1.5 * std::sqrt(x))) / 2);
  std::vector<double> vals(start + 2, 0.0);
  vals[start] = 1e-30;
  for (int k = start; k >= 1; --k)
    vals[k - 1] = (2.0 * k / x) * vals[k] - vals[k + 1];
  double norm = vals[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * vals[k];
  return (n <= start ? vals[n] : 0.0) / norm;
}

EffectiveModel effective_model(const DrivenCavityParams& params) {
  params.validate();
  EffectiveModel eff;
  eff.g1_eff = bessel_j(-1, params.xi_1) * params.g_1;
  eff.g2_eff = bessel_j(-1, params.xi_2) * params.g_2;
  eff.g = std::hypot(eff.g1_eff, eff.g2_eff);
  if (eff.g < 1e-14 * std::max({params.g_1, params.g_2, 1e-300})) {
    eff.degenerate = true;
    return eff;
  }
  eff.u = eff.g1_eff / eff.g;
  eff.v = eff.g2_eff / eff.g;
  eff.rate = 4.0 * eff.g * eff.g / params.kappa;
  return eff;
}

namespace {

struct CavityOps {
  int dim_c;  // n_max + 1
  long dim;   // 4 * dim_c
  SpMat a;            // cavity annihilation
  SpMat s1m, s2m;     // qubit lowering operators
  SpMat n1, n2, nc;   // number operators
  SpMat top;          // projector on the top Fock level
};

// Tensor order (qubit1, qubit2, cavity); cavity index least significant.
CavityOps make_ops(const DrivenCavityParams& p) {
  CavityOps ops;
  ops.dim_c = p.n_max + 1;
  ops.dim = 4L * ops.dim_c;
  const int dc = ops.dim_c;
  auto idx = [dc](int q1, int q2, int n) { return (q1 * 2 + q2) * dc + n; };
  std::vector<Triplet> ta, t1, t2, tn1, tn2, tnc, ttop;
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int n = 0; n < dc; ++n) {
        const long col = idx(q1, q2, n);
        if (n > 0) ta.emplace_back(idx(q1, q2, n - 1), col, std::sqrt(double(n)));
        if (q1 == 1) t1.emplace_back(idx(0, q2, n), col, 1.0);
        if (q2 == 1) t2.emplace_back(idx(q1, 0, n), col, 1.0);
        if (q1 == 1) tn1.emplace_back(col, col, 1.0);
        if (q2 == 1) tn2.emplace_back(col, col, 1.0);
        if (n > 0) tnc.emplace_back(col, col, double(n));
        if (n == dc - 1) ttop.emplace_back(col, col, 1.0);
      }
  auto build = [&](std::vector<Triplet>& t) {
    SpMat m(ops.dim, ops.dim);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  };
  ops.a = build(ta);
  ops.s1m = build(t1);
  ops.s2m = build(t2);
  ops.n1 = build(tn1);
  ops.n2 = build(tn2);
  ops.nc = build(tnc);
  ops.top = build(ttop);
  return ops;
}

struct DriveTerm {
  SpMat commutator_sop;      // superoperator of rho -> [T, rho]
  SpMat commutator_sop_hc;   // superoperator of rho -> [T^dag, rho]
  cxd amplitude;
  double freq;               // term enters as amplitude * exp(-i freq t)
};

SpMat commutator_superop(const SpMat& t) {
  const long d = t.rows();
  SpMat ident(d, d);
  ident.setIdentity();
  SpMat tt = SpMat(t.transpose());
  return SpMat(Eigen::kroneckerProduct(ident, t)) -
         SpMat(Eigen::kroneckerProduct(tt, ident));
}

Mat reduced_qubits(const Mat& rho, int dim_c) {
  Mat red = Mat::Zero(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int n = 0; n < dim_c; ++n) red(r, c) += rho(r * dim_c + n, c * dim_c + n);
  return red;
}

}  // namespace

std::vector<CavityTrajectoryPoint> simulate_rotating_frame(
    const DrivenCavityParams& params, bool keep_counterrotating,
    const std::vector<double>& times, const Mat* rho0_qubits, int harmonic_cutoff) {
  params.validate();
  CavityOps ops = make_ops(params);
  const long d = ops.dim;

  // static resonant part: a^dag (g1' s1^- + g2' s2^+) + h.c.
  EffectiveModel eff = effective_model(params);
  SpMat h_static = eff.g1_eff * (SpMat(ops.a.adjoint()) * ops.s1m) +
                   eff.g2_eff * (SpMat(ops.a.adjoint()) * SpMat(ops.s2m.adjoint()));
  h_static = h_static + SpMat(h_static.adjoint());
  SpMat l_static =
      liouvillian_matrix(h_static, {ops.a}, {params.kappa});

  // oscillating sideband terms, T exp(-i freq t) + h.c.
  std::vector<DriveTerm> drive;
  double freq_max = 0;
  if (keep_counterrotating) {
    struct Q {
      double g, xi, omega, mod;
      SpMat lower;
    };
    std::vector<Q> qs = {{params.g_1, params.xi_1, params.omega_1, params.omega_r(), ops.s1m},
                         {params.g_2, params.xi_2, params.omega_2, params.omega_b(), ops.s2m}};
    for (const Q& q : qs)
      for (int n = -harmonic_cutoff; n <= harmonic_cutoff; ++n) {
        const double amp = q.g * bessel_j(n, q.xi);
        if (std::abs(amp) < 1e-14 * std::max(params.g_1, params.g_2)) continue;
        for (int quad = 0; quad < 2; ++quad) {  // 0: a sigma^-, 1: a^dag sigma^-
          const double freq =
              q.omega + n * q.mod + (quad == 0 ? params.omega_c : -params.omega_c);
          if (std::abs(freq) < 1e-9 * std::max(1.0, params.omega_c)) continue;  // in h_static
          SpMat t = (quad == 0 ? ops.a : SpMat(ops.a.adjoint())) * q.lower;
          DriveTerm term;
          term.commutator_sop = commutator_superop(t);
          term.commutator_sop_hc = commutator_superop(SpMat(t.adjoint()));
          term.amplitude = amp;
          term.freq = freq;
          freq_max = std::max(freq_max, std::abs(freq));
          drive.push_back(std::move(term));
        }
      }
  }

  Mat rho_q = rho0_qubits ? *rho0_qubits : [] {
    Vec q(4);
    q << 1.0, 1.0, 1.0, 0.0;  // generic unentangled superposition
    q.normalize();
    return Mat(q * q.adjoint());
  }();
  Mat rho = Mat::Zero(d, d);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) rho(r * ops.dim_c, c * ops.dim_c) = rho_q(r, c);

  std::vector<CavityTrajectoryPoint> out;
  Vec state = vectorize(rho);
  double t_now = 0;

  auto record = [&](double t) {
    Mat r = unvectorize(state, d);
    r = (r + r.adjoint()) / 2.0;
    CavityTrajectoryPoint pt;
    pt.t = t;
    pt.trace_error = std::abs(r.trace().real() - 1.0);
    pt.qubit1_excitation = std::real((ops.n1 * r).eval().trace());
    pt.qubit2_excitation = std::real((ops.n2 * r).eval().trace());
    pt.cavity_n = std::real((ops.nc * r).eval().trace());
    pt.leakage = std::real((ops.top * r).eval().trace());
    pt.reduced_qubits = reduced_qubits(r, ops.dim_c);
    if (pt.leakage > 1e-4)
      throw TruncationError("cavity truncation leaked population", params.n_max + 2);
    out.push_back(std::move(pt));
  };

  if (drive.empty()) {
    for (double t : times) {
      if (t > t_now) state = krylov_expv(l_static, state, t - t_now);
      t_now = t;
      record(t);
    }
    return out;
  }

  // piecewise-constant steps resolved well below the fastest drive period,
  // exponential applied through a 4th-order truncation
  const double dt_res = (2.0 * M_PI / freq_max) / 50.0;
  auto apply_l = [&](double t, const Vec& y) {
    Vec r = l_static * y;
    for (const DriveTerm& term : drive) {
      const cxd phase = term.amplitude * std::exp(-I_UNIT * term.freq * t);
      r += -I_UNIT * phase * (term.commutator_sop * y);
      r += -I_UNIT * std::conj(phase) * (term.commutator_sop_hc * y);
    }
    return r;
  };
  for (double t : times) {
    while (t_now < t - 1e-15 * std::max(1.0, t)) {
      const double dt = std::min(dt_res, t - t_now);
      const double tm = t_now + dt / 2.0;
      Vec k = state;
      Vec acc = state;
      for (int order = 1; order <= 4; ++order) {
        k = apply_l(tm, k) * (dt / order);
        acc += k;
      }
      state = acc;
      t_now += dt;
    }
    t_now = t;
    record(t);
  }
  return out;
}

std::vector<Mat> evolve_effective_model(const EffectiveModel& eff,
                                        const Mat& rho0_qubits,
                                        const std::vector<double>& times) {
  SpMat s1m(4, 4), s2p(4, 4);
  std::vector<Triplet> t1, t2;
  // basis |q1 q2>, q1 most significant
  t1.emplace_back(0, 2, 1.0);
  t1.emplace_back(1, 3, 1.0);
  t2.emplace_back(1, 0, 1.0);
  t2.emplace_back(3, 2, 1.0);
  s1m.setFromTriplets(t1.begin(), t1.end());
  s2p.setFromTriplets(t2.begin(), t2.end());
  SpMat jump = eff.u * s1m + eff.v * s2p;
  SpMat h(4, 4);
  SpMat l = liouvillian_matrix(h, {jump}, {eff.rate});
  std::vector<Mat> out;
  Vec state = vectorize(rho0_qubits);
  double t_now = 0;
  for (double t : times) {
    if (t > t_now) state = krylov_expv(l, state, t - t_now);
    t_now = t;
    Mat r = unvectorize(state, 4);
    out.push_back((r + r.adjoint()) / 2.0);
  }
  return out;
}

EliminationReport verify_elimination(const DrivenCavityParams& params,
                                     const std::vector<double>& times,
                                     const Mat* rho0_qubits) {
  EffectiveModel eff = effective_model(params);
  if (eff.degenerate) throw Error("verify_elimination: effective couplings vanish");
  const double gp = std::max(std::abs(eff.g1_eff), std::abs(eff.g2_eff));
  if (params.kappa < 10.0 * gp)
    throw Error("verify_elimination requires kappa >= 10 g'");

  Mat rho_q = rho0_qubits ? *rho0_qubits : [] {
    Vec q(4);
    q << 1.0, 1.0, 1.0, 0.0;
    q.normalize();
    return Mat(q * q.adjoint());
  }();

  auto full = simulate_rotating_frame(params, false, times, &rho_q);
  auto effective = evolve_effective_model(eff, rho_q, times);

  EliminationReport rep;
  rep.predicted_rate = eff.rate;
  rep.times = times;
  for (size_t k = 0; k < times.size(); ++k) {
    const double dist = trace_distance(full[k].reduced_qubits, effective[k]);
    rep.distances.push_back(dist);
    rep.max_trace_distance = std::max(rep.max_trace_distance, dist);
  }

  // relaxation-rate fit on the qubit-1 population, residual window [1e-6, 1e-1]
  const double n1_ss = effective.back()(2, 2).real() + effective.back()(3, 3).real();
  std::vector<double> tx, ly;
  for (size_t k = 0; k < times.size(); ++k) {
    const double resid = std::abs(full[k].qubit1_excitation - n1_ss);
    if (resid > 1e-6 && resid < 1e-1) {
      tx.push_back(times[k]);
      ly.push_back(std::log(resid));
    }
  }
  LineFit fit = fit_line(tx, ly);
  rep.fitted_rate = -fit.slope;
  return rep;
}

}  // namespace dissipad
