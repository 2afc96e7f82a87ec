#pragma once

#include <string>
#include <vector>

#include "dissipad/types.hpp"

namespace dissipad {

/// Shortest-roundtrip style float formatting used by every CSV writer
/// (17 significant digits, deterministic).
std::string format_double(double x);

struct CsvRow {
  std::vector<std::string> cells;
};

/// Write a CSV file with a fixed header; all doubles must already be
/// formatted by the caller (format_double).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows);

void write_spectrum_csv(const std::string& path, const std::vector<cxd>& values);

struct TrajectorySample {
  double t;
  std::string observable;
  double value;
};
void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& samples);

void write_correlators_csv(const std::string& path, const Mat& normal,
                           const Mat& anomalous);

/// Binary density-matrix dump: 16-byte header (magic "DMAT", uint32 rows,
/// uint32 cols, 4 zero bytes), then row-major complex128.
void write_dmat(const std::string& path, const Mat& rho);
Mat read_dmat(const std::string& path);

/// FNV-1a 64-bit content hash, hex-encoded.
std::string content_hash(const std::string& path);

struct RunManifest {
  std::string command;
  std::string config_path;
  std::string config_hash;
  std::vector<std::string> outputs;
  std::string config_snapshot;  // raw resolved configuration text
  double wall_time_s = 0;
  std::string version;
};

/// Serialize the manifest as JSON next to the outputs.
void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace dissipad
