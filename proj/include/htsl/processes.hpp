#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "htsl/ensemble.hpp"
#include "htsl/stable.hpp"

namespace htsl {

/// Gaussian moving-average spec: xi_k = sum_j c_j Z_{k+j} with i.i.d.
/// standard normal Z. The covariance bound f(m) = sum_j |c_j c_{j+m}| is
/// exact for nonnegative coefficients; the geometric factory carries the
/// closed form f(m) = rho^m / (1 - rho^2) and a certified tail ratio.
struct QuasiStationarySpec {
  std::vector<double> ma_coefficients;
  std::optional<double> geometric_rho; // set by geometric()

  static QuasiStationarySpec finite(std::vector<double> coeffs);
  static QuasiStationarySpec geometric(double rho, double truncation_tol = 1e-16);

  double f_bound(std::size_t m) const;
  // Ratio certifying f(m+1)/f(m) <= r < 1 eventually, when available.
  std::optional<double> f_tail_ratio() const { return geometric_rho; }
};

/// Linear fractional stable motion parameters. hurst == 1/alpha routes to
/// the plain stable Levy simulator exactly (not approximately); otherwise
/// the kernel (t-s)_+^(H-1/alpha) - (-s)_+^(H-1/alpha) is discretized on a
/// uniform grid with `mesh` sub-steps per unit time, truncated at
/// s = -kernel_cutoff.
struct LfsmSpec {
  double alpha = 2.0;
  double hurst = 0.5;
  std::uint64_t mesh = 16;
  double kernel_cutoff = 0.0; // 0 = default 16 * horizon

  LfsmSpec(double alpha, double hurst, std::uint64_t mesh = 16,
           double kernel_cutoff = 0.0);
};

/// P x n ensemble of i.i.d. increments drawn from `law`, row p from
/// stream_id = p.
PathEnsemble simulate_iid(const StableLaw& law, std::size_t n,
                          std::size_t paths, std::uint64_t seed);

/// Streaming variant of simulate_iid for ensembles too large to hold.
IncrementSource iid_source(const StableLaw& law, std::size_t n,
                           std::size_t paths, std::uint64_t seed);

struct QuasiStationaryResult {
  PathEnsemble ensemble;
  std::vector<double> f_table; // f(0..m_max)
};

QuasiStationaryResult simulate_quasi_stationary(const QuasiStationarySpec& spec,
                                                std::size_t n, std::size_t paths,
                                                std::uint64_t seed,
                                                std::size_t f_table_len = 21);

/// Strictly stable Levy motion sampled on a grid of n steps of length
/// grid_step: X(0) = 0, increments i.i.d. stable with scale grid_step^(1/alpha).
/// Scale convention: unit scale per unit time for alpha < 2; for alpha = 2
/// the per-unit-time scale is 1/sqrt(2) so that Var X(1) = 1 (standard
/// Brownian motion).
PathEnsemble simulate_stable_levy(double alpha, std::size_t n, double grid_step,
                                  std::size_t paths, std::uint64_t seed,
                                  double skew = 0.0);

/// LFSM values on the integer grid 0..n via Riemann discretization of the
/// moving-average integral, evaluated by FFT convolution (O(G log G) for G
/// grid points). Throws guard_error when the truncated kernel tail holds
/// more than 10% of the alpha-norm.
PathEnsemble simulate_lfsm(const LfsmSpec& spec, std::size_t n,
                           std::size_t paths, std::uint64_t seed);

} // namespace htsl
