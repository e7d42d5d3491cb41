#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace htsl {

/// Admissible normalizing function for the block SLLN criterion.
///
/// Two parametric families share the interface:
///   - power-log:      phi(x) = x^q (log x)^beta
///   - iterated-log:   phi(x) = sqrt(x * log x * (log log x)^(1+eps))
///
/// Evaluation is clamped below x0 (phi(x) = phi(x0) for x < x0), which keeps
/// phi positive and nondecreasing on all of [0, inf) without touching the
/// asymptotics. x0 defaults to the smallest scale at which the chosen family
/// is positive and increasing: 1 for pure powers, e for beta > 0, e^e for
/// beta < 0, and slightly above e for the iterated-log family.
class GrowthFunction {
public:
  enum class Kind { power_log, iterated_log };

  static GrowthFunction power(double q, double x0 = 1.0);
  static GrowthFunction power_log(double q, double beta, double x0 = -1.0);
  static GrowthFunction iterated_log(double eps, double x0 = 3.2);

  double operator()(double x) const;

  Kind kind() const { return kind_; }
  double q() const { return q_; }
  double beta() const { return beta_; }
  double eps() const { return eps_; }
  double x0() const { return x0_; }

  nlohmann::json to_json() const;
  static GrowthFunction from_json(const nlohmann::json& j);

private:
  GrowthFunction(Kind kind, double q, double beta, double eps, double x0);

  double eval_raw(double x) const; // no clamping, x >= x0 assumed

  Kind kind_;
  double q_ = 0.0;
  double beta_ = 0.0;
  double eps_ = 0.0;
  double x0_ = 1.0;
};

/// Certified doubling bounds c1 <= phi(2x)/phi(x) <= c2 over a probed
/// interval, with 1 < c1 <= c2.
struct DoublingBounds {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Computes doubling bounds of phi over [x0, x_max]. The ratio
/// x -> phi(2x)/phi(x) is monotone for both supported families, so the
/// endpoint values are exact bounds; a dense grid scan re-checks this.
/// Throws guard_error when the infimum of the ratio is <= 1.
DoublingBounds doubling_bounds(const GrowthFunction& phi, double x_max);

/// Geometric contraction factor of the proof recursion:
///   (1 + 2^(p-1)) / c1^(p * floor(log2 a))   for p > 1
///   2 / c1^(p * floor(log2 a))               for 0 < p <= 1
/// The value may be >= 1; the caller decides admissibility.
double contraction_constant(double p, double c1, std::uint64_t a);

struct BlockBase {
  std::uint64_t a = 0;
  double c = 0.0;
};

/// Smallest power-of-two block base a >= 2 whose contraction constant is
/// strictly below 1. Only floor(log2 a) enters the constants, so scanning
/// powers of two is exhaustive. Strict contraction (c < 1 - 1e-12) is
/// required; the equality case c = 1 breaks the geometric summation.
BlockBase block_base(double p, double c1);

} // namespace htsl
