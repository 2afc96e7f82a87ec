#include "dissipad/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "dissipad/errors.hpp"

namespace dissipad {

std::string slurp_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

namespace {

struct Edge {
  int i, j;
  cxd amp;
  int line;
};

struct RawConfig {
  std::map<std::string, std::pair<std::string, int>> keys;  // value, line
  std::vector<Edge> edges;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

RawConfig parse_sections(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  RawConfig raw;
  std::string line, section;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section header", lineno);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    if (section == "hopping") {
      std::istringstream ss(line);
      Edge e;
      double re, im;
      if (!(ss >> e.i >> e.j >> re >> im))
        throw ConfigError("hopping edge needs 'i j re im'", lineno);
      e.amp = cxd(re, im);
      e.line = lineno;
      raw.edges.push_back(e);
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", lineno);
    const std::string key = section + "." + trim(line.substr(0, eq));
    raw.keys[key] = {trim(line.substr(eq + 1)), lineno};
  }
  return raw;
}

double to_double(const RawConfig& raw, const std::string& key) {
  auto it = raw.keys.find(key);
  if (it == raw.keys.end()) throw ConfigError("missing key: " + key);
  try {
    size_t used = 0;
    double v = std::stod(it->second.first, &used);
    if (used != it->second.first.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("not a number for key " + key, it->second.second);
  }
}

int to_int(const RawConfig& raw, const std::string& key) {
  const double v = to_double(raw, key);
  if (v != std::floor(v)) throw ConfigError("expected integer for key: " + key);
  return static_cast<int>(v);
}

bool has(const RawConfig& raw, const std::string& key) {
  return raw.keys.count(key) > 0;
}

std::string str_of(const RawConfig& raw, const std::string& key) {
  auto it = raw.keys.find(key);
  if (it == raw.keys.end()) throw ConfigError("missing key: " + key);
  return it->second.first;
}

std::vector<Sublattice> two_color(const Mat& h, int anchor) {
  const int n = static_cast<int>(h.rows());
  const double cut = 1e-14 * std::max(1e-300, h.cwiseAbs().maxCoeff());
  std::vector<int> color(n, 0);
  color[anchor] = -1;  // anchor on A
  std::queue<int> q;
  q.push(anchor);
  while (!q.empty()) {
    int i = q.front();
    q.pop();
    for (int j = 0; j < n; ++j) {
      if (j == i || std::abs(h(i, j)) <= cut) continue;
      if (color[j] == 0) {
        color[j] = -color[i];
        q.push(j);
      } else if (color[j] == color[i]) {
        return std::vector<Sublattice>(n, Sublattice::Unassigned);
      }
    }
  }
  // color any disconnected leftovers alternately
  for (int i = 0; i < n; ++i)
    if (color[i] == 0) color[i] = (i % 2 == 0) ? -1 : 1;
  std::vector<Sublattice> labels(n);
  for (int i = 0; i < n; ++i)
    labels[i] = color[i] < 0 ? Sublattice::A : Sublattice::B;
  int na = 0;
  for (auto s : labels)
    if (s == Sublattice::A) ++na;
  if (2 * na != n) return std::vector<Sublattice>(n, Sublattice::Unassigned);
  return labels;
}

}  // namespace

LatticeSpec parse_lattice_config(const std::string& path) {
  RawConfig raw = parse_sections(path);
  LatticeSpec spec;
  spec.n_pairs = to_int(raw, "lattice.n_pairs");
  if (spec.n_pairs < 1) throw ConfigError("lattice.n_pairs must be >= 1");
  const std::string type = str_of(raw, "lattice.type");
  if (type != "chain" && type != "bipartite" && type != "custom")
    throw ConfigError("lattice.type must be chain, bipartite or custom");
  const int n = spec.n_sites();
  spec.hopping = Mat::Zero(n, n);

  auto site_index = [&](int label, int line) {
    if (type == "chain") {
      try {
        return LatticeSpec::chain_index(label, spec.n_pairs);
      } catch (const Error& e) {
        throw ConfigError(e.what(), line);
      }
    }
    if (label < 0 || label >= n)
      throw ConfigError("site index out of range", line);
    return label;
  };

  for (const auto& e : raw.edges) {
    const int i = site_index(e.i, e.line);
    const int j = site_index(e.j, e.line);
    if (i == j) throw ConfigError("self-loop in hopping list", e.line);
    spec.hopping(i, j) += e.amp;
    spec.hopping(j, i) += std::conj(e.amp);
  }

  spec.diss_site_0 = site_index(to_int(raw, "dissipator.site0"), 0);
  spec.diss_site_1 = site_index(to_int(raw, "dissipator.site1"), 0);

  const bool has_v2 = has(raw, "dissipator.v2");
  const bool has_u2 = has(raw, "dissipator.u2");
  if (!has_v2 && !has_u2)
    throw ConfigError("dissipator needs v2 (or u2)");
  double v2 = has_v2 ? to_double(raw, "dissipator.v2")
                     : 1.0 - to_double(raw, "dissipator.u2");
  if (has_v2 && has_u2 &&
      std::abs(to_double(raw, "dissipator.u2") + v2 - 1.0) > 1e-12)
    throw ConfigError("dissipator.u2 and dissipator.v2 are inconsistent");
  if (v2 < 0 || v2 > 1) throw ConfigError("pairing weight must lie in [0,1]");
  spec.set_v2(v2);
  spec.phi = has(raw, "dissipator.phi") ? to_double(raw, "dissipator.phi") : 0.0;
  spec.gamma = has(raw, "dissipator.gamma") ? to_double(raw, "dissipator.gamma") : 1.0;

  if (type == "bipartite") {
    spec.sublattice.assign(n, Sublattice::B);
    for (int a = 0; a < spec.n_pairs; ++a) spec.sublattice[a] = Sublattice::A;
  } else {
    spec.sublattice = two_color(spec.hopping, spec.diss_site_0);
  }
  spec.validate();
  return spec;
}

DrivenCavityParams parse_cavity_preset(const std::string& path) {
  RawConfig raw = parse_sections(path);
  DrivenCavityParams p;
  p.omega_c = to_double(raw, "cavity.omega_c");
  p.omega_1 = to_double(raw, "cavity.omega_1");
  p.omega_2 = to_double(raw, "cavity.omega_2");
  p.g_1 = to_double(raw, "cavity.g_1");
  p.g_2 = to_double(raw, "cavity.g_2");
  p.xi_1 = to_double(raw, "cavity.xi_1");
  p.xi_2 = to_double(raw, "cavity.xi_2");
  p.kappa = to_double(raw, "cavity.kappa");
  if (has(raw, "cavity.n_max")) p.n_max = to_int(raw, "cavity.n_max");
  p.validate();
  return p;
}

}  // namespace dissipad
