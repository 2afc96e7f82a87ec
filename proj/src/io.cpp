#include "dissipad/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "dissipad/errors.hpp"

namespace dissipad {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i)
    f << (i ? "," : "") << header[i];
  f << "\n";
  for (const CsvRow& row : rows) {
    for (size_t i = 0; i < row.cells.size(); ++i)
      f << (i ? "," : "") << row.cells[i];
    f << "\n";
  }
}

void write_spectrum_csv(const std::string& path, const std::vector<cxd>& values) {
  std::vector<CsvRow> rows;
  for (size_t k = 0; k < values.size(); ++k)
    rows.push_back({{std::to_string(k), format_double(values[k].real()),
                     format_double(values[k].imag())}});
  write_csv(path, {"index", "re", "im"}, rows);
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& samples) {
  std::vector<CsvRow> rows;
  for (const auto& s : samples)
    rows.push_back({{format_double(s.t), s.observable, format_double(s.value)}});
  write_csv(path, {"t", "observable", "value"}, rows);
}

void write_correlators_csv(const std::string& path, const Mat& normal,
                           const Mat& anomalous) {
  std::vector<CsvRow> rows;
  for (long i = 0; i < normal.rows(); ++i)
    for (long j = 0; j < normal.cols(); ++j)
      rows.push_back({{std::to_string(i), std::to_string(j),
                       format_double(normal(i, j).real()),
                       format_double(normal(i, j).imag()),
                       format_double(anomalous(i, j).real()),
                       format_double(anomalous(i, j).imag())}});
  write_csv(path, {"i", "j", "re_normal", "im_normal", "re_anom", "im_anom"}, rows);
}

void write_dmat(const std::string& path, const Mat& rho) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  const char magic[4] = {'D', 'M', 'A', 'T'};
  const uint32_t rows = static_cast<uint32_t>(rho.rows());
  const uint32_t cols = static_cast<uint32_t>(rho.cols());
  const uint32_t pad = 0;
  f.write(magic, 4);
  f.write(reinterpret_cast<const char*>(&rows), 4);
  f.write(reinterpret_cast<const char*>(&cols), 4);
  f.write(reinterpret_cast<const char*>(&pad), 4);
  for (uint32_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c) {
      const cxd z = rho(r, c);
      const double re = z.real(), im = z.imag();
      f.write(reinterpret_cast<const char*>(&re), 8);
      f.write(reinterpret_cast<const char*>(&im), 8);
    }
}

Mat read_dmat(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open: " + path);
  char magic[4];
  uint32_t rows = 0, cols = 0, pad = 0;
  f.read(magic, 4);
  if (std::string(magic, 4) != "DMAT") throw Error("bad magic in " + path);
  f.read(reinterpret_cast<char*>(&rows), 4);
  f.read(reinterpret_cast<char*>(&cols), 4);
  f.read(reinterpret_cast<char*>(&pad), 4);
  Mat rho(rows, cols);
  for (uint32_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c) {
      double re, im;
      f.read(reinterpret_cast<char*>(&re), 8);
      f.read(reinterpret_cast<char*>(&im), 8);
      rho(r, c) = cxd(re, im);
    }
  if (!f) throw Error("truncated file: " + path);
  return rho;
}

std::string content_hash(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open: " + path);
  uint64_t h = 1469598103934665603ULL;
  char c;
  while (f.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["config_path"] = manifest.config_path;
  j["config_hash"] = manifest.config_hash;
  j["outputs"] = manifest.outputs;
  j["config_snapshot"] = manifest.config_snapshot;
  j["wall_time_s"] = manifest.wall_time_s;
  j["version"] = manifest.version;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << j.dump(2) << "\n";
}

}  // namespace dissipad
