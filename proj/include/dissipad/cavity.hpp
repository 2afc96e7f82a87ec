#pragma once

#include <vector>

#include "dissipad/types.hpp"

namespace dissipad {

/// Two frequency-modulated qubits coupled to one lossy cavity mode. All
/// frequencies are angular; the sideband resonances are fixed by
/// construction: the red drive sits at omega_1 - omega_c, the blue drive at
/// omega_2 + omega_c.
struct DrivenCavityParams {
  double omega_c = 0, omega_1 = 0, omega_2 = 0;
  double g_1 = 0, g_2 = 0;
  double xi_1 = 0, xi_2 = 0;  // dimensionless modulation depths
  double kappa = 0;
  int n_max = 6;  // cavity Fock truncation

  double omega_r() const { return omega_1 - omega_c; }
  double omega_b() const { return omega_2 + omega_c; }
  void validate() const;
};

/// Bessel-weighted sideband couplings and the eliminated-cavity dissipator.
struct EffectiveModel {
  double g1_eff = 0;  // J_{-1}(xi_1) g_1
  double g2_eff = 0;  // J_{-1}(xi_2) g_2
  double g = 0;       // sqrt(g1_eff^2 + g2_eff^2)
  double u = 0, v = 0;
  double rate = 0;    // 4 g^2 / kappa
  bool degenerate = false;  // both effective couplings vanish
};
EffectiveModel effective_model(const DrivenCavityParams& params);

/// Bessel function of integer order (recurrence-based, ~1e-12 accuracy).
double bessel_j(int n, double x);

struct CavityTrajectoryPoint {
  double t = 0;
  double qubit1_excitation = 0;
  double qubit2_excitation = 0;
  double cavity_n = 0;
  double leakage = 0;      // population of the top Fock level
  double trace_error = 0;
  Mat reduced_qubits;      // 4x4 state of the qubit pair
};

/// Master equation of the qubit pair + cavity in the rotating frame, with
/// cavity loss kappa. keep_counterrotating retains the oscillating sideband
/// terms up to |n| <= harmonic_cutoff; otherwise only the resonant static
/// part is kept. Throws TruncationError when the top Fock level fills.
std::vector<CavityTrajectoryPoint> simulate_rotating_frame(
    const DrivenCavityParams& params, bool keep_counterrotating,
    const std::vector<double>& times, const Mat* rho0_qubits = nullptr,
    int harmonic_cutoff = 5);

struct EliminationReport {
  double max_trace_distance = 0;
  double fitted_rate = 0;     // from the full model's qubit relaxation
  double predicted_rate = 0;  // 4 g^2 / kappa
  std::vector<double> times;
  std::vector<double> distances;
};

/// Full cavity model vs the eliminated two-qubit Lindblad evolution from the
/// same initial qubit state (cavity in vacuum).
EliminationReport verify_elimination(const DrivenCavityParams& params,
                                     const std::vector<double>& times,
                                     const Mat* rho0_qubits = nullptr);

/// Two-qubit trajectory of the eliminated model rate * D[u s1^- + v s2^+].
std::vector<Mat> evolve_effective_model(const EffectiveModel& eff,
                                        const Mat& rho0_qubits,
                                        const std::vector<double>& times);

}  // namespace dissipad
