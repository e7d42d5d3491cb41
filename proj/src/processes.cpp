#include "htsl/processes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "htsl/errors.hpp"
#include "htsl/parallel.hpp"

namespace htsl {

namespace {

double levy_step_scale(double alpha, double dt) {
  // Unit scale per unit time; alpha = 2 calibrated so Var X(1) = 1.
  if (alpha == 2.0) return std::sqrt(dt / 2.0);
  return std::pow(dt, 1.0 / alpha);
}

} // namespace

QuasiStationarySpec QuasiStationarySpec::finite(std::vector<double> coeffs) {
  if (coeffs.empty()) {
    throw std::invalid_argument("QuasiStationarySpec: empty coefficient list");
  }
  double abs_sum = 0.0;
  for (double c : coeffs) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("QuasiStationarySpec: non-finite coefficient");
    }
    abs_sum += std::abs(c);
  }
  if (!std::isfinite(abs_sum)) {
    throw std::invalid_argument("QuasiStationarySpec: divergent absolute sum");
  }
  QuasiStationarySpec s;
  s.ma_coefficients = std::move(coeffs);
  return s;
}

QuasiStationarySpec QuasiStationarySpec::geometric(double rho,
                                                   double truncation_tol) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("QuasiStationarySpec: rho must be in (0, 1)");
  }
  std::vector<double> coeffs;
  double c = 1.0;
  while (c > truncation_tol) {
    coeffs.push_back(c);
    c *= rho;
  }
  QuasiStationarySpec s = finite(std::move(coeffs));
  s.geometric_rho = rho;
  return s;
}

double QuasiStationarySpec::f_bound(std::size_t m) const {
  if (geometric_rho) {
    // Closed form sum_j rho^j rho^(j+m); valid bound for the truncated
    // simulation as well (truncation only removes nonnegative terms).
    const double rho = *geometric_rho;
    return std::pow(rho, static_cast<double>(m)) / (1.0 - rho * rho);
  }
  const auto& c = ma_coefficients;
  if (m >= c.size()) return 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j + m < c.size(); ++j) {
    s += std::abs(c[j] * c[j + m]);
  }
  return s;
}

PathEnsemble simulate_iid(const StableLaw& law, std::size_t n,
                          std::size_t paths, std::uint64_t seed) {
  PathEnsemble e = PathEnsemble::allocate(paths, n, 1.0);
  e.meta = {{"family", "iid"},
            {"kind", "increments"},
            {"stationary", true},
            {"law", law.to_json()},
            {"seed", seed}};
  parallel_for(paths, [&](std::size_t p) {
    StableSampler s(law, SeedStream{seed, p});
    for (double& x : e.row(p)) {
      x = s.next();
    }
  });
  return e;
}

IncrementSource iid_source(const StableLaw& law, std::size_t n,
                           std::size_t paths, std::uint64_t seed) {
  IncrementSource src;
  src.paths = paths;
  src.length = n;
  src.fill = [law, seed](std::size_t p, std::span<double> out) {
    StableSampler s(law, SeedStream{seed, p});
    for (double& x : out) {
      x = s.next();
    }
  };
  return src;
}

QuasiStationaryResult simulate_quasi_stationary(const QuasiStationarySpec& spec,
                                                std::size_t n, std::size_t paths,
                                                std::uint64_t seed,
                                                std::size_t f_table_len) {
  if (spec.ma_coefficients.empty()) {
    throw std::invalid_argument("simulate_quasi_stationary: empty spec");
  }
  const auto& c = spec.ma_coefficients;
  const std::size_t J = c.size();
  QuasiStationaryResult res;
  res.ensemble = PathEnsemble::allocate(paths, n, 1.0);
  res.ensemble.meta = {{"family", "quasi-stationary-ma"},
                       {"kind", "increments"},
                       {"stationary", true},
                       {"seed", seed},
                       {"n_coefficients", J}};
  const StableLaw normal(2.0, 0.0, 1.0 / std::sqrt(2.0), 0.0); // N(0,1)
  parallel_for(paths, [&](std::size_t p) {
    StableSampler s(normal, SeedStream{seed, p});
    std::vector<double> z(n + J - 1);
    for (double& v : z) {
      v = s.next();
    }
    auto row = res.ensemble.row(p);
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < J; ++j) {
        acc += c[j] * z[k + j];
      }
      row[k] = acc;
    }
  });
  res.f_table.resize(f_table_len);
  for (std::size_t m = 0; m < f_table_len; ++m) {
    res.f_table[m] = spec.f_bound(m);
  }
  return res;
}

PathEnsemble simulate_stable_levy(double alpha, std::size_t n, double grid_step,
                                  std::size_t paths, std::uint64_t seed,
                                  double skew) {
  if (n == 0) {
    throw std::invalid_argument("simulate_stable_levy: n must be >= 1");
  }
  if (!(grid_step > 0.0)) {
    throw std::invalid_argument("simulate_stable_levy: grid_step must be positive");
  }
  const StableLaw law(alpha, skew, levy_step_scale(alpha, grid_step), 0.0);
  PathEnsemble e = PathEnsemble::allocate(paths, n + 1, grid_step);
  e.meta = {{"family", "stable-levy"},
            {"kind", "values"},
            {"alpha", alpha},
            {"skew", skew},
            {"grid_step", grid_step},
            {"seed", seed},
            {"scale_convention", alpha == 2.0 ? "var(X(1))=1" : "unit scale per unit time"}};
  parallel_for(paths, [&](std::size_t p) {
    StableSampler s(law, SeedStream{seed, p});
    auto row = e.row(p);
    row[0] = 0.0;
    double x = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      x += s.next();
      row[i] = x;
    }
  });
  return e;
}

LfsmSpec::LfsmSpec(double alpha_, double hurst_, std::uint64_t mesh_,
                   double kernel_cutoff_)
    : alpha(alpha_), hurst(hurst_), mesh(mesh_), kernel_cutoff(kernel_cutoff_) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw std::invalid_argument("LfsmSpec: alpha must be in (0, 2]");
  }
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::invalid_argument("LfsmSpec: hurst must be in (0, 1)");
  }
  if (mesh < 1) {
    throw std::invalid_argument("LfsmSpec: mesh must be >= 1");
  }
  if (kernel_cutoff < 0.0) {
    throw std::invalid_argument("LfsmSpec: kernel_cutoff must be nonnegative");
  }
}

namespace {

// Guards FFTW plan creation/destruction (not thread-safe in FFTW).
std::mutex fftw_mutex;

struct FftBuffers {
  std::size_t size = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;

  explicit FftBuffers(std::size_t n) : size(n) {
    real = fftw_alloc_real(n);
    cplx = fftw_alloc_complex(n / 2 + 1);
  }
  ~FftBuffers() {
    fftw_free(real);
    fftw_free(cplx);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;
};

std::size_t next_pow2(std::size_t n) {
  std::size_t v = 1;
  while (v < n) v <<= 1;
  return v;
}

} // namespace

PathEnsemble simulate_lfsm(const LfsmSpec& spec, std::size_t n,
                           std::size_t paths, std::uint64_t seed) {
  if (n == 0) {
    throw std::invalid_argument("simulate_lfsm: n must be >= 1");
  }
  const double inv_alpha = 1.0 / spec.alpha;
  if (spec.hurst == inv_alpha) {
    // Exact degeneracy L_{alpha,H} = A; bit-identical to the Levy route.
    return simulate_stable_levy(spec.alpha, n, 1.0, paths, seed);
  }
  double cutoff = spec.kernel_cutoff > 0.0 ? spec.kernel_cutoff
                                           : 16.0 * static_cast<double>(n);
  if (cutoff < static_cast<double>(n)) {
    throw std::invalid_argument("simulate_lfsm: kernel_cutoff must be >= n");
  }

  const std::size_t m = spec.mesh;
  const std::size_t pre = static_cast<std::size_t>(std::ceil(cutoff * m));
  const double trunc = static_cast<double>(pre) / m; // realized cutoff
  const std::size_t G = pre + n * m;                 // increment count
  const double gamma = spec.hurst - inv_alpha;

  // Midpoint kernel samples g_j = ((j - 1/2)/m)^gamma, j = 1..G.
  std::vector<double> kernel(G + 1, 0.0);
  for (std::size_t j = 1; j <= G; ++j) {
    kernel[j] = std::pow((j - 0.5) / m, gamma);
  }

  // Truncation guard: alpha-norm of the discarded tail of the t = n kernel
  // against the retained alpha-norm. The tail bound uses
  // |(n+u)^g - u^g| <= |g| n u^(g-1) for u >= trunc.
  {
    const std::size_t i0 = pre;
    const std::size_t in = G;
    double grid_norm = 0.0;
    for (std::size_t i = 0; i < in; ++i) {
      const double w = kernel[in - i] - (i < i0 ? kernel[i0 - i] : 0.0);
      grid_norm += std::pow(std::abs(w), spec.alpha);
    }
    grid_norm /= m;
    const double expo = (gamma - 1.0) * spec.alpha + 1.0; // < 0 always
    const double tail = std::pow(std::abs(gamma) * n, spec.alpha) *
                        std::pow(trunc, expo) / (-expo);
    if (tail > 0.1 * (grid_norm + tail)) {
      throw guard_error("simulate_lfsm: truncated kernel tail alpha-norm is " +
                        std::to_string(100.0 * tail / (grid_norm + tail)) +
                        "% of the total; increase kernel_cutoff");
    }
  }

  const std::size_t fft_n = next_pow2(2 * G + 2);
  const StableLaw law(spec.alpha, 0.0,
                      levy_step_scale(spec.alpha, 1.0 / static_cast<double>(m)),
                      0.0);

  // Kernel spectrum, computed once.
  fftw_plan fwd, bwd;
  FftBuffers kbuf(fft_n);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(fft_n), kbuf.real, kbuf.cplx,
                               FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(fft_n), kbuf.cplx, kbuf.real,
                               FFTW_ESTIMATE);
  }
  std::memset(kbuf.real, 0, fft_n * sizeof(double));
  for (std::size_t j = 1; j <= G; ++j) {
    kbuf.real[j] = kernel[j];
  }
  fftw_execute(fwd);
  std::vector<std::complex<double>> kspec(fft_n / 2 + 1);
  for (std::size_t i = 0; i < kspec.size(); ++i) {
    kspec[i] = {kbuf.cplx[i][0], kbuf.cplx[i][1]};
  }

  PathEnsemble e = PathEnsemble::allocate(paths, n + 1, 1.0);
  e.meta = {{"family", "lfsm"},
            {"kind", "values"},
            {"alpha", spec.alpha},
            {"hurst", spec.hurst},
            {"mesh", m},
            {"kernel_cutoff", trunc},
            {"seed", seed},
            {"scale_convention", spec.alpha == 2.0 ? "var(A(1))=1" : "unit scale per unit time"}};

  const std::size_t i0 = pre;
  parallel_for(paths, [&](std::size_t p) {
    FftBuffers buf(fft_n);
    StableSampler s(law, SeedStream{seed, p});
    std::memset(buf.real, 0, fft_n * sizeof(double));
    for (std::size_t i = 0; i < G; ++i) {
      buf.real[i] = s.next();
    }
    fftw_execute_dft_r2c(fwd, buf.real, buf.cplx);
    for (std::size_t i = 0; i < kspec.size(); ++i) {
      const std::complex<double> v =
          std::complex<double>(buf.cplx[i][0], buf.cplx[i][1]) * kspec[i];
      buf.cplx[i][0] = v.real();
      buf.cplx[i][1] = v.imag();
    }
    fftw_execute_dft_c2r(bwd, buf.cplx, buf.real);
    const double norm = 1.0 / static_cast<double>(fft_n);
    auto row = e.row(p);
    const double base = buf.real[i0] * norm;
    row[0] = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      row[k] = buf.real[i0 + k * m] * norm - base;
    }
  });

  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  return e;
}

} // namespace htsl
