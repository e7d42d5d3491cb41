#include "htsl/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "htsl/errors.hpp"

namespace htsl {

namespace {
const double kEE = std::exp(std::exp(1.0)); // e^e
const double kE = std::exp(1.0);
} // namespace

GrowthFunction::GrowthFunction(Kind kind, double q, double beta, double eps,
                               double x0)
    : kind_(kind), q_(q), beta_(beta), eps_(eps), x0_(x0) {}

GrowthFunction GrowthFunction::power(double q, double x0) {
  return power_log(q, 0.0, x0);
}

GrowthFunction GrowthFunction::power_log(double q, double beta, double x0) {
  if (!(q > 0.0)) {
    throw std::invalid_argument("GrowthFunction: q must be positive");
  }
  if (x0 < 0.0) {
    x0 = (beta == 0.0) ? 1.0 : (beta > 0.0 ? kE : kEE);
  }
  if (beta == 0.0) {
    if (!(x0 >= 1.0)) {
      throw std::invalid_argument("GrowthFunction: x0 must be >= 1");
    }
  } else if (beta > 0.0) {
    if (!(x0 > 1.0)) {
      // log x must be positive for the log factor to contribute
      throw std::invalid_argument("GrowthFunction: x0 must exceed 1 when beta > 0");
    }
  } else if (!(x0 >= kEE)) {
    // log x >= 1 on the domain keeps x^q (log x)^beta increasing for
    // negative beta as long as q log x + beta >= 0 there
    throw std::invalid_argument("GrowthFunction: x0 must be >= e^e when beta < 0");
  }
  return GrowthFunction(Kind::power_log, q, beta, 0.0, x0);
}

GrowthFunction GrowthFunction::iterated_log(double eps, double x0) {
  if (!(eps >= 0.0)) {
    throw std::invalid_argument("GrowthFunction: eps must be >= 0");
  }
  if (!(x0 > kE)) {
    throw std::invalid_argument("GrowthFunction: x0 must exceed e for the iterated-log family");
  }
  return GrowthFunction(Kind::iterated_log, 0.5, 0.0, eps, x0);
}

double GrowthFunction::eval_raw(double x) const {
  if (kind_ == Kind::power_log) {
    double v = std::pow(x, q_);
    if (beta_ != 0.0) {
      v *= std::pow(std::log(x), beta_);
    }
    return v;
  }
  const double lx = std::log(x);
  return std::sqrt(x * lx * std::pow(std::log(lx), 1.0 + eps_));
}

double GrowthFunction::operator()(double x) const {
  if (!(x >= 0.0)) {
    throw std::invalid_argument("GrowthFunction: x must be >= 0");
  }
  return eval_raw(std::max(x, x0_));
}

nlohmann::json GrowthFunction::to_json() const {
  if (kind_ == Kind::power_log) {
    return {{"q", q_}, {"beta", beta_}, {"x0", x0_}};
  }
  return {{"variant", "iterated-log"}, {"eps", eps_}, {"x0", x0_}};
}

GrowthFunction GrowthFunction::from_json(const nlohmann::json& j) {
  if (j.contains("variant") && j.at("variant") == "iterated-log") {
    return iterated_log(j.at("eps").get<double>(),
                        j.value("x0", 3.2));
  }
  return power_log(j.at("q").get<double>(), j.value("beta", 0.0),
                   j.value("x0", -1.0));
}

DoublingBounds doubling_bounds(const GrowthFunction& phi, double x_max) {
  const double x0 = phi.x0();
  if (!(x_max > 2.0 * x0)) {
    throw std::invalid_argument("doubling_bounds: x_max must exceed 2*x0");
  }
  // The ratio is monotone in x for both families, so the endpoints are the
  // extremes; the scan re-verifies that to 1e-12 relative and widens the
  // bounds if a grid point falls outside (it should not).
  const int kGrid = 10000;
  const double lo = std::log(x0);
  const double hi = std::log(x_max);
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = std::exp(lo + (hi - lo) * i / kGrid);
    const double r = phi(2.0 * x) / phi(x);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  const double r_lo = phi(2.0 * x0) / phi(x0);
  const double r_hi = phi(2.0 * x_max) / phi(x_max);
  DoublingBounds b;
  b.c1 = std::min({rmin, r_lo, r_hi});
  b.c2 = std::max({rmax, r_lo, r_hi});
  if (!(b.c1 > 1.0)) {
    throw guard_error("doubling_bounds: phi(2x)/phi(x) dips to " +
                      std::to_string(b.c1) +
                      " <= 1; phi is not admissible on this domain");
  }
  return b;
}

double contraction_constant(double p, double c1, std::uint64_t a) {
  if (!(p > 0.0)) {
    throw std::invalid_argument("contraction_constant: p must be positive");
  }
  if (!(c1 > 1.0)) {
    throw std::invalid_argument("contraction_constant: c1 must exceed 1");
  }
  if (a < 2) {
    throw std::invalid_argument("contraction_constant: a must be >= 2");
  }
  int floor_log2 = 0;
  for (std::uint64_t v = a; v > 1; v >>= 1) {
    ++floor_log2;
  }
  const double denom = std::pow(c1, p * floor_log2);
  const double numer = (p > 1.0) ? 1.0 + std::pow(2.0, p - 1.0) : 2.0;
  return numer / denom;
}

BlockBase block_base(double p, double c1) {
  for (std::uint64_t a = 2; a != 0; a <<= 1) {
    const double c = contraction_constant(p, c1, a);
    if (c < 1.0 - 1e-12) {
      return BlockBase{a, c};
    }
  }
  throw std::invalid_argument("block_base: no admissible power-of-two base");
}

} // namespace htsl
