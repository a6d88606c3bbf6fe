#pragma once
// CSV readers and writers for samples, step sizes and feature rows.
//
// Every file starts with one provenance comment line
//   # config-hash=<hex>,seed=<n>,version=<v>
// followed by a header row. Readers skip any line starting with '#'.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hcela/error.hpp"
#include "hcela/sample.hpp"

namespace hcela {

inline constexpr const char* kVersion = "0.1.0";

struct Provenance {
  std::string config_hash = "0000000000000000";
  std::uint64_t seed = 0;
  std::string version = kVersion;
};

// FNV-1a, used to fingerprint a serialised configuration.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline void write_provenance(std::ostream& os, const Provenance& p) {
  os << "# config-hash=" << p.config_hash << ",seed=" << p.seed << ",version=" << p.version << '\n';
}

// Shortest representation that round-trips a double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    std::string_view cell = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.remove_suffix(1);
    while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
    out.emplace_back(cell);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw DomainError("csv: cannot parse number '" + s + "'");
  return v;
}

// Non-comment, non-empty lines, header first.
inline std::vector<std::vector<std::string>> read_csv_rows(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

inline void write_sample_csv(std::ostream& os, const OrderedSample& sample, const Provenance& prov) {
  sample.validate();
  write_provenance(os, prov);
  for (std::size_t i = 0; i < sample.dim(); ++i) os << (i ? "," : "") << 'x' << i;
  if (sample.fitness) os << ",y";
  os << '\n';
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const auto row = sample.points[k];
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    if (sample.fitness) os << ',' << format_double((*sample.fitness)[k]);
    os << '\n';
  }
}

// Reads `x0..x{d-1}[,y]`. The returned sample is marked ordered: row order is sample order.
inline OrderedSample read_sample_csv(std::istream& is) {
  const auto rows = read_csv_rows(is);
  if (rows.empty()) throw DomainError("sample csv: missing header");
  const auto& header = rows.front();
  std::size_t dim = 0;
  while (dim < header.size() && header[dim] == "x" + std::to_string(dim)) ++dim;
  const bool has_y = dim + 1 == header.size() && header[dim] == "y";
  if (dim == 0 || (dim != header.size() && !has_y)) throw DomainError("sample csv: header must be x0..x{d-1}[,y]");
  OrderedSample s{PointSet(dim), std::nullopt, true};
  std::vector<double> y;
  std::vector<double> x(dim);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) throw DomainError("sample csv: row " + std::to_string(r) + " has wrong width");
    for (std::size_t i = 0; i < dim; ++i) x[i] = parse_double(rows[r][i]);
    s.points.push_back(x);
    if (has_y) y.push_back(parse_double(rows[r][dim]));
  }
  if (has_y) s.fitness = std::move(y);
  return s;
}

inline void write_steps_csv(std::ostream& os, const std::vector<double>& steps, const Provenance& prov) {
  write_provenance(os, prov);
  os << "step_index,distance\n";
  for (std::size_t i = 0; i < steps.size(); ++i) os << i << ',' << format_double(steps[i]) << '\n';
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
  return is;
}

}  // namespace hcela
