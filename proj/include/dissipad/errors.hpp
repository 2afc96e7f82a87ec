#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dissipad {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file; line is 1-based, 0 when not attributable to a line.
struct ConfigError : Error {
  int line;
  ConfigError(const std::string& msg, int line_ = 0) : Error(msg), line(line_) {}
};

// The dissipator placement breaks the chiral pairing ratio condition.
struct ConstraintError : Error {
  int worst_gamma;      // 1-based pair index with the largest residual
  double residual;
  ConstraintError(const std::string& msg, int gamma, double res)
      : Error(msg), worst_gamma(gamma), residual(res) {}
};

// Eigenmodes with no overlap on the dissipation sites; steady state not unique.
struct DarkModeError : Error {
  std::vector<int> dark_modes;  // 1-based pair indices
  DarkModeError(const std::string& msg, std::vector<int> modes)
      : Error(msg), dark_modes(std::move(modes)) {}
};

struct DimensionCapError : Error {
  using Error::Error;
};

struct IntegratorError : Error {
  double t;
  IntegratorError(const std::string& msg, double t_) : Error(msg), t(t_) {}
};

// Single-particle zero modes break the +/- pairing construction.
struct ZeroModeError : Error {
  using Error::Error;
};

// Cavity Fock truncation leaked more population than allowed.
struct TruncationError : Error {
  int suggested_n_max;
  TruncationError(const std::string& msg, int n) : Error(msg), suggested_n_max(n) {}
};

}  // namespace dissipad
