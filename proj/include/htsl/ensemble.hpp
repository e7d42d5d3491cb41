#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"

namespace htsl {

/// Matrix of independent sample paths on a common index grid. Row p is
/// generated from stream_id = p, so ensembles are reproducible row by row.
/// Rows hold either increments (xi_0, xi_1, ...) or process values
/// (X(0), X(grid_step), ...), recorded in meta["kind"].
struct PathEnsemble {
  std::size_t paths = 0;
  std::size_t points = 0;
  double grid_step = 1.0;
  std::vector<double> data; // row-major, paths x points
  nlohmann::json meta;

  std::span<const double> row(std::size_t p) const {
    return {data.data() + p * points, points};
  }
  std::span<double> row(std::size_t p) {
    return {data.data() + p * points, points};
  }

  static PathEnsemble allocate(std::size_t paths, std::size_t points,
                               double grid_step = 1.0);
};

/// S_{m,n} = sum_{k=m}^{m+n} xi_k  (n+1 terms, both endpoints included).
double partial_sum(std::span<const double> xi, std::size_t m, std::size_t n);

/// M_{m,n} = max_{k <= n} |S_{m,k}|.
double running_max(std::span<const double> xi, std::size_t m, std::size_t n);

/// CSV: one row per path, values formatted with 17 significant digits.
void write_csv(const PathEnsemble& ens, const std::filesystem::path& file);
PathEnsemble read_csv(const std::filesystem::path& file);

/// Compact binary layout: 32-byte header (magic "HTSL", version u32,
/// paths u64, points u64, grid_step f64), then little-endian row-major
/// 64-bit floats.
void write_binary(const PathEnsemble& ens, const std::filesystem::path& file);
PathEnsemble read_binary(const std::filesystem::path& file);

/// Streaming view over path rows: fill(p, out) writes row p into out.
/// Lets diagnostics walk ensembles far too large to materialize.
struct IncrementSource {
  std::size_t paths = 0;
  std::size_t length = 0;
  std::function<void(std::size_t, std::span<double>)> fill;
};

IncrementSource ensemble_source(const PathEnsemble& ens);

} // namespace htsl
