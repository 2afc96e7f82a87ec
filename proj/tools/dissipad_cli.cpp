// Command-line front end: parse model configs, run the solvers, emit
// deterministic CSV/JSON artifacts. Exit codes: 0 pass, 1 domain failure,
// 2 usage/parse error.
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dissipad/cavity.hpp"
#include "dissipad/config.hpp"
#include "dissipad/errors.hpp"
#include "dissipad/gaussian.hpp"
#include "dissipad/io.hpp"
#include "dissipad/jw.hpp"
#include "dissipad/linalg.hpp"
#include "dissipad/qops.hpp"
#include "dissipad/spin.hpp"

namespace fs = std::filesystem;
using namespace dissipad;

namespace {

constexpr const char* kVersion = "dissipad 0.1.0";

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

RunManifest make_manifest(const std::string& command, const std::string& config) {
  RunManifest m;
  m.command = command;
  m.config_path = config;
  m.config_hash = content_hash(config);
  m.config_snapshot = slurp_file(config);
  m.version = kVersion;
  return m;
}

std::vector<double> log_grid(double t0, double t1, int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k)
    t[k] = t0 * std::pow(t1 / t0, double(k) / (n - 1));
  return t;
}

int worker_threads() {
  if (const char* env = std::getenv("DISSIPAD_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// Bounded parallel map with deterministic result order.
template <typename F>
void parallel_for(int n_tasks, F&& body) {
  const int workers = std::min(worker_threads(), n_tasks);
  if (workers <= 1) {
    for (int k = 0; k < n_tasks; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int k = next.fetch_add(1); k < n_tasks; k = next.fetch_add(1)) body(k);
    });
  for (auto& th : pool) th.join();
}

int cmd_verify(const std::string& config, const std::string& out_dir) {
  Timer timer;
  LatticeSpec spec = parse_lattice_config(config);
  ChiralReport rep = verify_chiral(spec);
  nlohmann::json j;
  j["is_bipartite_hopping"] = rep.is_bipartite_hopping;
  j["chiral_ok"] = rep.chiral_ok;
  j["constraint_ok"] = rep.constraint_ok;
  j["dark_modes"] = rep.dark_modes;
  j["max_ratio_residual"] = rep.max_ratio_residual;
  j["worst_gamma"] = rep.worst_gamma;
  j["min_overlap"] = rep.min_overlap;
  j["pass"] = rep.ok();
  if (!rep.ok()) {
    std::string reason;
    if (!rep.chiral_ok) reason = "no sign-flip chiral symmetry";
    else if (!rep.constraint_ok)
      reason = "dissipator placement violates the pairing ratio condition";
    else reason = "dark modes present";
    j["reason"] = reason;
  }
  fs::create_directories(out_dir);
  const std::string report_path = out_dir + "/verify.json";
  {
    std::ofstream f(report_path, std::ios::binary);
    f << j.dump(2) << "\n";
  }
  std::cout << j.dump(2) << std::endl;
  RunManifest m = make_manifest("verify", config);
  m.outputs = {report_path};
  m.wall_time_s = timer.seconds();
  write_manifest(out_dir + "/verify.manifest.json", m);
  return rep.ok() ? 0 : 1;
}

std::vector<cxd> low_lying(std::vector<cxd> values, int k) {
  std::sort(values.begin(), values.end(), [](const cxd& a, const cxd& b) {
    if (std::abs(a.real()) != std::abs(b.real()))
      return std::abs(a.real()) < std::abs(b.real());
    return a.imag() < b.imag();
  });
  if (static_cast<int>(values.size()) > k) values.resize(k);
  return values;
}

// All subset sums of the rapidities = the full quadratic-model spectrum.
std::vector<cxd> subset_sums(const std::vector<cxd>& rates) {
  std::vector<cxd> sums{cxd(0, 0)};
  for (const cxd& r : rates) {
    const size_t n = sums.size();
    sums.reserve(2 * n);
    for (size_t k = 0; k < n; ++k) sums.push_back(sums[k] + r);
  }
  return sums;
}

int cmd_spectrum(const std::string& config, const std::string& out_dir,
                 const std::string& system, std::vector<double> v2_list, int k) {
  Timer timer;
  LatticeSpec base = parse_lattice_config(config);
  if (v2_list.empty()) v2_list = {base.v * base.v};
  fs::create_directories(out_dir);
  std::vector<std::string> outputs;
  std::vector<std::vector<cxd>> per_v2(v2_list.size());

  parallel_for(static_cast<int>(v2_list.size()), [&](int idx) {
    LatticeSpec spec = base;
    spec.set_v2(v2_list[idx]);
    if (system == "fermion") {
      RapiditySpectrum rs = rapidity_spectrum(spec);
      if (spec.n_sites() > 12)
        throw DimensionCapError("spectrum enumeration capped at 12 sites");
      per_v2[idx] = low_lying(subset_sums(rs.rates), k);
    } else {
      if (spec.n_sites() > 6)
        throw DimensionCapError("dense spin Liouvillian spectra capped at 6 sites");
      SuperoperatorMatrix l =
          build_spin_liouvillian(spec, NoiseConfig{}, DissipatorSet::SingleBetaL);
      Vec ev = dense_eigenvalues(Mat(l.mat));
      std::vector<cxd> values(ev.data(), ev.data() + ev.size());
      per_v2[idx] = low_lying(values, k);
    }
  });

  for (size_t idx = 0; idx < v2_list.size(); ++idx) {
    std::vector<cxd> values = per_v2[idx];
    sort_spectrum(values);
    char name[64];
    std::snprintf(name, sizeof name, "spectrum_v2_%g.csv", v2_list[idx]);
    const std::string path = out_dir + "/" + name;
    write_spectrum_csv(path, values);
    outputs.push_back(path);
  }
  RunManifest m = make_manifest("spectrum", config);
  m.outputs = outputs;
  m.wall_time_s = timer.seconds();
  write_manifest(out_dir + "/spectrum.manifest.json", m);
  return 0;
}

int cmd_evolve(const std::string& config, const std::string& out_dir,
               const std::string& system, double tmax, int n_times, unsigned seed,
               bool dump_correlators) {
  Timer timer;
  LatticeSpec spec = parse_lattice_config(config);
  std::vector<double> times = log_grid(1e-2 / std::max(spec.gamma, 1e-12),
                                       tmax, n_times);
  fs::create_directories(out_dir);
  std::vector<TrajectorySample> samples;
  std::vector<std::string> outputs;
  (void)seed;

  if (system == "fermion") {
    PairCovariance state = vacuum_covariance(spec.n_sites());
    auto traj = evolve_covariance(spec, state, times);
    for (size_t k = 0; k < times.size(); ++k) {
      samples.push_back({times[k], "excitation",
                         traj[k].normal.trace().real()});
      samples.push_back({times[k], "parity", fermion_parity(traj[k])});
      samples.push_back({times[k], "energy",
                         energy_expectation(spec.hopping, traj[k])});
    }
    if (dump_correlators) {
      const std::string cpath = out_dir + "/correlators.csv";
      write_correlators_csv(cpath, traj.back().normal, traj.back().anomalous);
      outputs.push_back(cpath);
    }
  } else {
    SuperoperatorMatrix l =
        build_spin_liouvillian(spec, NoiseConfig{}, DissipatorSet::SingleBetaL);
    const long d = l.dim_rho();
    Mat rho0 = Mat::Zero(d, d);
    rho0(0, 0) = 1.0;  // vacuum start
    auto traj = evolve_density(l, spec, rho0, times);
    for (const auto& o : traj) {
      samples.push_back({o.t, "excitation", o.excitation});
      samples.push_back({o.t, "parity", o.parity});
      samples.push_back({o.t, "purity", o.purity});
      samples.push_back({o.t, "fidelity_rainbow", o.fidelity_rainbow});
      for (size_t b = 0; b < o.bond_concurrence.size(); ++b)
        samples.push_back({o.t, "concurrence_bond_" + std::to_string(b + 1),
                           o.bond_concurrence[b]});
    }
  }
  const std::string path = out_dir + "/trajectory.csv";
  write_trajectory_csv(path, samples);
  outputs.push_back(path);
  RunManifest m = make_manifest("evolve", config);
  m.outputs = outputs;
  m.wall_time_s = timer.seconds();
  write_manifest(out_dir + "/evolve.manifest.json", m);
  return 0;
}

int cmd_robustness(const std::string& config, const std::string& out_dir,
                   std::vector<double> noise_grid, std::vector<double> v2_grid) {
  Timer timer;
  LatticeSpec base = parse_lattice_config(config);
  if (noise_grid.empty()) noise_grid = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  if (v2_grid.empty()) v2_grid = {0.30, 0.40, 0.45, 0.50, 0.55, 0.60};
  const int n_bonds = base.n_pairs;
  fs::create_directories(out_dir);
  std::vector<CsvRow> rows;
  struct Cell {
    double v2, c;
  };
  std::vector<std::vector<Cell>> table(noise_grid.size() * n_bonds);
  parallel_for(static_cast<int>(noise_grid.size()), [&](int gi) {
    NoiseConfig noise;
    noise.gamma_phi = noise_grid[gi] * base.gamma;
    for (int b = 1; b <= n_bonds; ++b) {
      BondOptimum opt = optimize_bond_concurrence(base, b, noise, v2_grid);
      table[gi * n_bonds + (b - 1)] = {{opt.v2_best, opt.concurrence_best}};
    }
  });
  for (size_t gi = 0; gi < noise_grid.size(); ++gi)
    for (int b = 1; b <= n_bonds; ++b) {
      const Cell& cell = table[gi * n_bonds + (b - 1)][0];
      rows.push_back({{format_double(noise_grid[gi]), std::to_string(b),
                       format_double(cell.v2), format_double(cell.c)}});
    }
  const std::string path = out_dir + "/robustness.csv";
  write_csv(path, {"gamma_phi_over_gamma", "bond", "v2_best", "concurrence"}, rows);
  RunManifest m = make_manifest("robustness", config);
  m.outputs = {path};
  m.wall_time_s = timer.seconds();
  write_manifest(out_dir + "/robustness.manifest.json", m);
  return 0;
}

int cmd_cavity(const std::string& preset, const std::string& out_dir) {
  Timer timer;
  DrivenCavityParams params = parse_cavity_preset(preset);
  EffectiveModel eff = effective_model(params);
  nlohmann::json j;
  j["g1_eff"] = eff.g1_eff;
  j["g2_eff"] = eff.g2_eff;
  j["g"] = eff.g;
  j["u"] = eff.u;
  j["v"] = eff.v;
  j["rate"] = eff.rate;
  j["degenerate"] = eff.degenerate;
  if (!eff.degenerate) {
    const double gp = std::max(std::abs(eff.g1_eff), std::abs(eff.g2_eff));
    if (params.kappa >= 10.0 * gp) {
      const double horizon = 10.0 / eff.rate;
      auto times = log_grid(horizon * 1e-3, horizon, 120);
      EliminationReport rep = verify_elimination(params, times);
      j["max_trace_distance"] = rep.max_trace_distance;
      j["fitted_rate"] = rep.fitted_rate;
      j["predicted_rate"] = rep.predicted_rate;
    } else {
      j["note"] = "kappa/g' below 10: elimination check skipped";
    }
  }
  fs::create_directories(out_dir);
  const std::string path = out_dir + "/cavity.json";
  {
    std::ofstream f(path, std::ios::binary);
    f << j.dump(2) << "\n";
  }
  std::cout << j.dump(2) << std::endl;
  RunManifest m = make_manifest("cavity", preset);
  m.outputs = {path};
  m.wall_time_s = timer.seconds();
  write_manifest(out_dir + "/cavity.manifest.json", m);
  return eff.degenerate ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dissipative stabilization of paired lattice states"};
  app.require_subcommand(1);

  std::string config, out_dir = ".", system = "spin", preset;
  std::vector<double> v2_list, noise_grid, v2_grid;
  double tmax = 1e4;
  int k = 64, n_times = 200;
  unsigned seed = 0;
  bool dump_correlators = false;

  auto* verify = app.add_subcommand("verify", "symmetry checks for a lattice config");
  verify->add_option("--config", config)->required();
  verify->add_option("--out-dir", out_dir);

  auto* spectrum = app.add_subcommand("spectrum", "low-lying decay spectrum");
  spectrum->add_option("--config", config)->required();
  spectrum->add_option("--out-dir", out_dir);
  spectrum->add_option("--system", system)->check(CLI::IsMember({"spin", "fermion"}));
  spectrum->add_option("--v2", v2_list);
  spectrum->add_option("--k", k);

  auto* evolve = app.add_subcommand("evolve", "time evolution from the vacuum");
  evolve->add_option("--config", config)->required();
  evolve->add_option("--out-dir", out_dir);
  evolve->add_option("--system", system)->check(CLI::IsMember({"spin", "fermion"}));
  evolve->add_option("--tmax", tmax);
  evolve->add_option("--n-times", n_times);
  evolve->add_option("--seed", seed);
  evolve->add_flag("--dump-correlators", dump_correlators);

  auto* robustness = app.add_subcommand("robustness", "steady-state concurrence sweep");
  robustness->add_option("--config", config)->required();
  robustness->add_option("--out-dir", out_dir);
  robustness->add_option("--noise-grid", noise_grid);
  robustness->add_option("--v2", v2_grid);

  auto* cavity = app.add_subcommand("cavity", "sideband model and elimination check");
  cavity->add_option("--preset", preset)->required();
  cavity->add_option("--out-dir", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(verify)) return cmd_verify(config, out_dir);
    if (app.got_subcommand(spectrum))
      return cmd_spectrum(config, out_dir, system, v2_list, k);
    if (app.got_subcommand(evolve))
      return cmd_evolve(config, out_dir, system, tmax, n_times, seed,
                        dump_correlators);
    if (app.got_subcommand(robustness))
      return cmd_robustness(config, out_dir, noise_grid, v2_grid);
    if (app.got_subcommand(cavity)) return cmd_cavity(preset, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.what() << std::endl;
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}
