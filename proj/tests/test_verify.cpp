#include <cmath>
#include <vector>

#include "doctest.h"

#include "htsl/errors.hpp"
#include "htsl/processes.hpp"
#include "htsl/rng.hpp"
#include "htsl/verify.hpp"

using htsl::GrowthFunction;
using htsl::StableLaw;
using htsl::Verdict;

TEST_CASE("decay diagnostic: all-zero increments give all-zero statistics") {
  const auto e = htsl::PathEnsemble::allocate(8, 70, 1.0);
  const auto rep =
      htsl::decay_diagnostic(e, GrowthFunction::power(1.0), 2, 5);
  for (const auto& s : rep.levels) {
    CHECK(s.sum_q50 == 0.0);
    CHECK(s.max_q90 == 0.0);
  }
  CHECK(rep.decay_score == 0.0);
}

TEST_CASE("decay diagnostic: LLN decays, CLT scaling does not") {
  const StableLaw normal(2.0, 0.0, 1.0 / std::sqrt(2.0), 0.0);
  const std::size_t levels = 10;
  const auto src = htsl::iid_source(normal, (2u << levels) + 2, 800, 211);
  const std::vector<GrowthFunction> phis{GrowthFunction::power(1.0),
                                         GrowthFunction::power(0.5)};
  const auto reps = htsl::decay_diagnostic(src, phis, 2, levels);
  REQUIRE(reps.size() == 2);
  // phi(x) = x: strong law scaling, the median must fall
  CHECK(reps[0].levels.back().sum_q50 < reps[0].levels[3].sum_q50);
  CHECK(reps[0].decay_score > 0.8);
  // phi(x) = sqrt(x): the statistic is Theta(1)
  CHECK(reps[1].decay_score > 0.3);
  CHECK(reps[1].decay_score < 0.7);
}

TEST_CASE("decay diagnostic length guard") {
  const auto e = htsl::PathEnsemble::allocate(2, 10, 1.0);
  CHECK_THROWS_AS(htsl::decay_diagnostic(e, GrowthFunction::power(1.0), 2, 4),
                  std::invalid_argument);
}

TEST_CASE("tail exponent: exact Pareto oracle") {
  htsl::CounterRng rng(htsl::SeedStream{219, 0});
  std::vector<double> x(10000);
  for (double& v : x) {
    v = std::pow(rng.next_unit(), -1.0 / 1.5);
  }
  const auto fit = htsl::tail_exponent(std::move(x));
  CHECK(fit.slope == doctest::Approx(-1.5).epsilon(0.1 / 1.5));
  CHECK(fit.points >= 5);
}

TEST_CASE("tail exponent: sup of Cauchy Levy motion") {
  const auto e = htsl::simulate_stable_levy(1.0, 64, 1.0 / 64.0, 10000, 223);
  std::vector<double> sups(e.paths);
  for (std::size_t p = 0; p < e.paths; ++p) {
    double m = 0.0;
    for (double v : e.row(p)) {
      m = std::max(m, std::abs(v));
    }
    sups[p] = m;
  }
  const auto fit = htsl::tail_exponent(std::move(sups));
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(0.15));
}

TEST_CASE("tail exponent input guards") {
  CHECK_THROWS_AS(htsl::tail_exponent(std::vector<double>(10, 1.0)),
                  std::invalid_argument);
  // constant positive samples: no tail to fit
  CHECK_THROWS_AS(htsl::tail_exponent(std::vector<double>(2000, 1.0)),
                  std::invalid_argument);
  std::vector<double> with_zero(2000, 1.0);
  with_zero[5] = 0.0;
  CHECK_THROWS_AS(htsl::tail_exponent(std::move(with_zero)),
                  std::invalid_argument);
}

TEST_CASE("borel-cantelli budget") {
  const auto b = htsl::borel_cantelli_budget(1.0, 2.0, 100);
  CHECK(b.partial_sum == doctest::Approx(1.6350).epsilon(0.0001 / 1.635));
  CHECK(b.verdict == Verdict::satisfied);
  REQUIRE(b.tail_bound.has_value());
  CHECK(b.partial_sum + *b.tail_bound >= std::pow(3.14159265358979, 2) / 6.0 - 1e-6);

  CHECK(htsl::borel_cantelli_budget(1.0, 1.0, 50).verdict == Verdict::violated);

  const auto z = htsl::borel_cantelli_budget(0.0, 2.0, 10);
  for (double v : z.bounds) {
    CHECK(v == 0.0);
  }
  CHECK(z.verdict == Verdict::satisfied);
}

TEST_CASE("bridge check: deterministic power path closed form") {
  const double H = 0.7;
  const std::size_t pts = (1u << 13) + 1;
  auto e = htsl::PathEnsemble::allocate(1, pts, 1.0);
  for (std::size_t i = 0; i < pts; ++i) {
    e.row(0)[i] = std::pow(static_cast<double>(i), H);
  }
  const auto rep = htsl::bridge_check(e, 2, H, 2.0, 0.5, 12, 6);
  for (const auto& s : rep.levels) {
    // sup over [2^n, 2^(n+1)] of t^H - 2^(nH) is 2^(nH) (2^H - 1), attained
    // at the right endpoint, which lies on the grid
    const double expect =
        (std::pow(2.0, H) - 1.0) /
        std::log(std::pow(2.0, static_cast<double>(s.level)));
    CHECK(s.sum_q50 == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("bridge check: zero process") {
  const auto e = htsl::PathEnsemble::allocate(4, (1u << 13) + 1, 1.0);
  const auto rep = htsl::bridge_check(e, 2, 0.5, 2.0, 0.5, 12, 6);
  for (const auto& s : rep.levels) {
    CHECK(s.sum_q50 == 0.0);
  }
}

TEST_CASE("bridge check: Brownian sup decays under the log-corrected norm") {
  const double step = 0.25;
  const std::size_t pts = 4 * 4096 + 1;
  const auto e = htsl::simulate_stable_levy(2.0, pts - 1, step, 500, 227);
  const auto rep = htsl::bridge_check(e, 2, 0.5, 2.0, 0.5, 11, 4);
  CHECK(rep.levels.back().sum_q50 < rep.levels.front().sum_q50);
  CHECK(rep.decay_score > 0.6);
}

TEST_CASE("bridge check guards") {
  const auto coarse = htsl::PathEnsemble::allocate(2, (1u << 13) + 1, 1.0);
  CHECK_THROWS_AS(htsl::bridge_check(coarse, 2, 0.5, 2.0, 0.5, 12, 2),
                  htsl::guard_error);
  const auto tiny = htsl::PathEnsemble::allocate(2, 100, 1.0);
  CHECK_THROWS_AS(htsl::bridge_check(tiny, 2, 0.5, 2.0, 0.5, 12, 6),
                  std::invalid_argument);
}
