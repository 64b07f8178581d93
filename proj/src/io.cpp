#include "monfermi/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "monfermi/version.hpp"

namespace monfermi::io {

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void atomic_write(const std::string& path, const std::string& payload) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << payload;
  }
  std::filesystem::rename(tmp, path);
}

void write_curve_csv(const std::string& path, const CurveFile& curve) {
  std::ostringstream body;
  body.precision(17);
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    body << curve.x[i] << ',' << curve.mean[i] << ',' << curve.stderr_[i] << ','
         << curve.n_samples[i] << '\n';
  }
  const std::string data = body.str();
  std::ostringstream out;
  out << "# monfermi curve: " << curve.name << '\n';
  out << "# version: " << kVersion << '\n';
  out << "# units: J = 1 fixes the time and energy scale; times in 1/J, rates in J\n";
  if (!curve.config_json.empty()) out << "# config: " << curve.config_json << '\n';
  out << "# content_hash: " << fnv1a_hex(data) << '\n';
  out << "abscissa,mean,stderr,n_samples\n";
  out << data;
  atomic_write(path, out.str());
}

CurveFile read_curve_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  CurveFile c;
  std::string line;
  std::string data_block;
  bool header_done = false;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto tag = [&](const std::string& key) -> std::string {
        const std::string prefix = "# " + key + ": ";
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
        return {};
      };
      if (auto v = tag("monfermi curve"); !v.empty()) c.name = v;
      if (auto v = tag("version"); !v.empty()) c.version = v;
      if (auto v = tag("config"); !v.empty()) c.config_json = v;
      if (auto v = tag("content_hash"); !v.empty()) c.content_hash = v;
      continue;
    }
    if (!header_done) {  // column header line
      header_done = true;
      continue;
    }
    data_block += line;
    data_block += '\n';
    std::istringstream ls(line);
    double x, m, s;
    long n;
    char comma;
    ls >> x >> comma >> m >> comma >> s >> comma >> n;
    if (!ls) throw std::runtime_error("malformed curve row in " + path);
    c.x.push_back(x);
    c.mean.push_back(m);
    c.stderr_.push_back(s);
    c.n_samples.push_back(n);
  }
  if (!c.content_hash.empty() && c.content_hash != fnv1a_hex(data_block))
    throw std::runtime_error("content hash mismatch in " + path);
  return c;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  atomic_write(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  f >> j;
  return j;
}

}  // namespace monfermi::io
