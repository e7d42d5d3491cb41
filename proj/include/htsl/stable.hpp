#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"

#include "htsl/rng.hpp"

namespace htsl {

/// Stable law in the parameterization that is continuous in alpha (Nolan's
/// S0), so alpha -> 1 is not a singular limit. alpha = 2 is the Gaussian
/// case: standard deviation scale * sqrt(2), skew ignored.
struct StableLaw {
  double alpha = 2.0;
  double skew = 0.0;
  double scale = 1.0;
  double shift = 0.0;

  StableLaw() = default;
  StableLaw(double alpha, double skew, double scale = 1.0, double shift = 0.0);

  nlohmann::json to_json() const;
};

/// Chambers-Mallows-Stuck sampler over one seed stream. The alpha = 1 and
/// alpha = 2 cases take dedicated branches (the generic formula is singular
/// at alpha = 1).
class StableSampler {
public:
  StableSampler(StableLaw law, SeedStream stream);

  double next();

private:
  StableLaw law_;
  CounterRng rng_;
  double zeta_ = 0.0;      // -skew * tan(pi*alpha/2)
  double b_ = 0.0;         // atan(-zeta)/alpha
  double scale_factor_ = 1.0;
  double cached_ = 0.0;    // second variate of a Gaussian pair
  bool have_cached_ = false;
};

/// n i.i.d. variates from the given law and stream.
std::vector<double> sample_stable(const StableLaw& law, SeedStream stream,
                                  std::size_t n);

} // namespace htsl
