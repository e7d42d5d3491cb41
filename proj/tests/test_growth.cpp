#include <cmath>

#include "doctest.h"

#include "htsl/errors.hpp"
#include "htsl/growth.hpp"

using htsl::GrowthFunction;

TEST_CASE("growth evaluation") {
  const double e = std::exp(1.0);
  const double ee = std::exp(e);

  CHECK(GrowthFunction::power(1.0)(8.0) == doctest::Approx(8.0).epsilon(1e-15));

  const auto phi = GrowthFunction::power_log(0.5, 2.0);
  CHECK(phi(e * e) == doctest::Approx(e * 4.0).epsilon(1e-14));

  const auto clamped = GrowthFunction::power(1.0, ee);
  CHECK(clamped(e) == doctest::Approx(ee).epsilon(1e-15));
  CHECK(clamped(2.0 * ee) == doctest::Approx(2.0 * ee).epsilon(1e-15));
}

TEST_CASE("growth validation") {
  CHECK_THROWS_AS(GrowthFunction::power(0.0), std::invalid_argument);
  CHECK_THROWS_AS(GrowthFunction::power_log(1.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(GrowthFunction::power_log(1.0, -1.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(GrowthFunction::iterated_log(0.5, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(GrowthFunction::iterated_log(-0.1), std::invalid_argument);
}

TEST_CASE("growth json round trip") {
  const auto phi = GrowthFunction::power_log(0.5, 1.5);
  const auto back = GrowthFunction::from_json(phi.to_json());
  CHECK(back(100.0) == phi(100.0));

  const auto il = GrowthFunction::iterated_log(0.75);
  const auto il_back = GrowthFunction::from_json(il.to_json());
  CHECK(il_back(1e6) == il(1e6));
}

TEST_CASE("doubling bounds: constant-ratio families") {
  const auto half = htsl::doubling_bounds(GrowthFunction::power(0.5), 1e9);
  CHECK(half.c1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(half.c2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const auto lin = htsl::doubling_bounds(GrowthFunction::power(1.0), 1e12);
  CHECK(lin.c1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lin.c2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("doubling bounds: sqrt-log endpoints") {
  const double ee = std::exp(std::exp(1.0));
  const double x_max = std::pow(2.0, 40.0);
  const auto b = htsl::doubling_bounds(
      GrowthFunction::power_log(0.5, 1.0, ee), x_max);
  // ratio(x) = sqrt(2) * (1 + log 2 / log x), decreasing, so the
  // endpoint values are the bounds
  const double l2 = std::log(2.0);
  const double expect_c1 = std::sqrt(2.0) * (1.0 + l2 / std::log(x_max));
  const double expect_c2 = std::sqrt(2.0) * (1.0 + l2 / std::exp(1.0));
  CHECK(b.c1 == doctest::Approx(expect_c1).epsilon(1e-10));
  CHECK(b.c2 == doctest::Approx(expect_c2).epsilon(1e-10));
  CHECK(b.c1 > 1.0);
  CHECK(b.c1 <= b.c2);
}

TEST_CASE("doubling bounds guard: ratio must exceed 1") {
  // q = 0.01 with beta = -5 drives the ratio below 1 near x0
  const double ee = std::exp(std::exp(1.0));
  CHECK_THROWS_AS(
      htsl::doubling_bounds(GrowthFunction::power_log(0.01, -5.0, ee), 1e6),
      htsl::guard_error);
}

TEST_CASE("contraction constant") {
  CHECK(htsl::contraction_constant(2.0, 2.0, 2) ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK(htsl::contraction_constant(0.5, 2.0, 4) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(htsl::contraction_constant(3.0, 2.0, 2) ==
        doctest::Approx(0.625).epsilon(1e-15));
  // only floor(log2 a) enters: a = 5, 6, 7 behave like a = 4
  CHECK(htsl::contraction_constant(2.0, 2.0, 5) ==
        htsl::contraction_constant(2.0, 2.0, 4));
}

TEST_CASE("block base scan") {
  const auto b1 = htsl::block_base(2.0, 2.0);
  CHECK(b1.a == 2);
  CHECK(b1.c == doctest::Approx(0.75).epsilon(1e-12));

  const auto b2 = htsl::block_base(1.0, 2.0);
  CHECK(b2.a == 4); // a = 2 gives c = 1, rejected
  CHECK(b2.c == doctest::Approx(0.5).epsilon(1e-12));

  const auto b3 = htsl::block_base(0.5, 2.0);
  CHECK(b3.a == 8); // a = 4 gives c = 1, rejected
  CHECK(b3.c == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-12));
}
