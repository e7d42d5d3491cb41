#include "htsl/ensemble.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace htsl {

PathEnsemble PathEnsemble::allocate(std::size_t paths, std::size_t points,
                                    double grid_step) {
  if (paths == 0 || points == 0) {
    throw std::invalid_argument("PathEnsemble: paths and points must be >= 1");
  }
  if (!(grid_step > 0.0)) {
    throw std::invalid_argument("PathEnsemble: grid_step must be positive");
  }
  PathEnsemble e;
  e.paths = paths;
  e.points = points;
  e.grid_step = grid_step;
  e.data.assign(paths * points, 0.0);
  return e;
}

double partial_sum(std::span<const double> xi, std::size_t m, std::size_t n) {
  if (m >= xi.size() || n >= xi.size() || m + n >= xi.size()) {
    throw std::out_of_range("partial_sum: index range outside the row");
  }
  double s = 0.0;
  for (std::size_t k = m; k <= m + n; ++k) {
    s += xi[k];
  }
  return s;
}

double running_max(std::span<const double> xi, std::size_t m, std::size_t n) {
  if (m >= xi.size() || n >= xi.size() || m + n >= xi.size()) {
    throw std::out_of_range("running_max: index range outside the row");
  }
  double s = 0.0;
  double best = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    s += xi[m + k];
    best = std::max(best, std::abs(s));
  }
  return best;
}

namespace {

void format_value(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

} // namespace

void write_csv(const PathEnsemble& ens, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) {
    throw std::runtime_error("write_csv: cannot open " + file.string());
  }
  std::string line;
  for (std::size_t p = 0; p < ens.paths; ++p) {
    line.clear();
    auto r = ens.row(p);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += ',';
      format_value(line, r[i]);
    }
    line += '\n';
    os << line;
  }
}

PathEnsemble read_csv(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) {
    throw std::runtime_error("read_csv: cannot open " + file.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("read_csv: ragged rows in " + file.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::runtime_error("read_csv: no data in " + file.string());
  }
  PathEnsemble e = PathEnsemble::allocate(rows.size(), rows.front().size());
  for (std::size_t p = 0; p < rows.size(); ++p) {
    std::copy(rows[p].begin(), rows[p].end(), e.row(p).begin());
  }
  return e;
}

namespace {
constexpr char kMagic[4] = {'H', 'T', 'S', 'L'};
constexpr std::uint32_t kVersion = 1;
} // namespace

void write_binary(const PathEnsemble& ens, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) {
    throw std::runtime_error("write_binary: cannot open " + file.string());
  }
  char header[32] = {};
  std::memcpy(header, kMagic, 4);
  std::memcpy(header + 4, &kVersion, 4);
  std::uint64_t p = ens.paths, n = ens.points;
  std::memcpy(header + 8, &p, 8);
  std::memcpy(header + 16, &n, 8);
  std::memcpy(header + 24, &ens.grid_step, 8);
  os.write(header, sizeof header);
  os.write(reinterpret_cast<const char*>(ens.data.data()),
           static_cast<std::streamsize>(ens.data.size() * sizeof(double)));
}

PathEnsemble read_binary(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) {
    throw std::runtime_error("read_binary: cannot open " + file.string());
  }
  char header[32];
  is.read(header, sizeof header);
  if (!is || std::memcmp(header, kMagic, 4) != 0) {
    throw std::runtime_error("read_binary: bad magic in " + file.string());
  }
  std::uint32_t version;
  std::memcpy(&version, header + 4, 4);
  if (version != kVersion) {
    throw std::runtime_error("read_binary: unsupported version");
  }
  std::uint64_t p, n;
  double step;
  std::memcpy(&p, header + 8, 8);
  std::memcpy(&n, header + 16, 8);
  std::memcpy(&step, header + 24, 8);
  PathEnsemble e = PathEnsemble::allocate(p, n, step);
  is.read(reinterpret_cast<char*>(e.data.data()),
          static_cast<std::streamsize>(e.data.size() * sizeof(double)));
  if (!is) {
    throw std::runtime_error("read_binary: truncated file " + file.string());
  }
  return e;
}

IncrementSource ensemble_source(const PathEnsemble& ens) {
  IncrementSource s;
  s.paths = ens.paths;
  s.length = ens.points;
  s.fill = [&ens](std::size_t p, std::span<double> out) {
    auto r = ens.row(p);
    std::copy(r.begin(), r.end(), out.begin());
  };
  return s;
}

} // namespace htsl
