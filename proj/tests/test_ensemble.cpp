#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "htsl/ensemble.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

} // namespace

TEST_CASE("partial sum is inclusive in both endpoints") {
  const std::vector<double> xi{1, 2, 3, 4};
  CHECK(htsl::partial_sum(xi, 0, 2) == 6.0); // 1 + 2 + 3
  CHECK(htsl::partial_sum(xi, 1, 0) == 2.0); // single term
  const std::vector<double> xi2{1, -3, 2, 5};
  CHECK(htsl::partial_sum(xi2, 1, 2) == 4.0); // -3 + 2 + 5
  CHECK_THROWS_AS(htsl::partial_sum(xi, 2, 2), std::out_of_range);
}

TEST_CASE("running max") {
  const std::vector<double> xi{1, -3, 2};
  CHECK(htsl::running_max(xi, 0, 1) == 2.0); // max(|1|, |1-3|)
  CHECK(htsl::running_max(xi, 1, 0) == 3.0); // |xi_1|
  CHECK(htsl::running_max(xi, 0, 2) == 2.0); // max(1, 2, 0)
  CHECK_THROWS_AS(htsl::running_max(xi, 1, 2), std::out_of_range);
}

TEST_CASE("csv round trip") {
  auto e = htsl::PathEnsemble::allocate(2, 3, 1.0);
  e.data = {1.0, -2.5, 3.25, 0.1, 1e-17, -4.0};
  const fs::path f = fs::temp_directory_path() / "htsl_test_rt.csv";
  htsl::write_csv(e, f);
  const auto back = htsl::read_csv(f);
  CHECK(back.paths == 2);
  CHECK(back.points == 3);
  CHECK(back.data == e.data);

  // rewriting produces identical bytes
  const fs::path g = fs::temp_directory_path() / "htsl_test_rt2.csv";
  htsl::write_csv(e, g);
  CHECK(slurp(f) == slurp(g));
  fs::remove(f);
  fs::remove(g);
}

TEST_CASE("binary round trip and header") {
  auto e = htsl::PathEnsemble::allocate(3, 5, 0.25);
  for (std::size_t i = 0; i < e.data.size(); ++i) {
    e.data[i] = 0.5 * static_cast<double>(i) - 3.0;
  }
  const fs::path f = fs::temp_directory_path() / "htsl_test_rt.bin";
  htsl::write_binary(e, f);
  CHECK(fs::file_size(f) == 32 + e.data.size() * 8);
  CHECK(slurp(f).substr(0, 4) == "HTSL");
  const auto back = htsl::read_binary(f);
  CHECK(back.paths == 3);
  CHECK(back.points == 5);
  CHECK(back.grid_step == 0.25);
  CHECK(back.data == e.data);
  fs::remove(f);
}

TEST_CASE("ensemble source streams rows") {
  auto e = htsl::PathEnsemble::allocate(2, 4, 1.0);
  e.data = {1, 2, 3, 4, 5, 6, 7, 8};
  const auto src = htsl::ensemble_source(e);
  std::vector<double> row(4);
  src.fill(1, row);
  CHECK(row == std::vector<double>{5, 6, 7, 8});
}
