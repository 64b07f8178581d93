#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace monfermi::io {

// Stable 64-bit content hash (FNV-1a) used to stamp result files and to
// match checkpoints against their config.
std::string fnv1a_hex(const std::string& data);

struct CurveFile {
  std::string name;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<long> n_samples;
  std::string config_json;  // header echo; empty if absent
  std::string version;
  std::string content_hash;
};

// Self-describing CSV: '#'-prefixed header (config echo, code version,
// content hash of the data block), then "abscissa,mean,stderr,n_samples".
void write_curve_csv(const std::string& path, const CurveFile& curve);
CurveFile read_curve_csv(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

// write-temp-then-rename so concurrent readers never observe a torn file
void atomic_write(const std::string& path, const std::string& payload);

}  // namespace monfermi::io
