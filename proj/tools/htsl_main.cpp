// Command-line front end: simulation, admissibility constants, series
// condition checks, and Monte Carlo verification batteries.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "htsl/ensemble.hpp"
#include "htsl/errors.hpp"
#include "htsl/growth.hpp"
#include "htsl/processes.hpp"
#include "htsl/slln.hpp"
#include "htsl/stats.hpp"
#include "htsl/verify.hpp"

namespace {

using htsl::GrowthFunction;
using htsl::PathEnsemble;
using htsl::StableLaw;

struct PhiOptions {
  std::string name = "x";
  double q = 1.0;
  double beta = 0.0;
  double eps = 0.5;
  double x0 = -1.0;
};

void add_phi_options(CLI::App* cmd, PhiOptions& opt) {
  cmd->add_option("--phi", opt.name,
                  "normalizer: x | sqrt | power | power-log | sqrt-log")
      ->default_val("x");
  cmd->add_option("--q", opt.q, "power exponent (power, power-log)");
  cmd->add_option("--beta", opt.beta, "log exponent (power-log)");
  cmd->add_option("--eps", opt.eps, "epsilon (sqrt-log)");
  cmd->add_option("--x0", opt.x0, "clamp point (default: family-specific)");
}

GrowthFunction make_phi(const PhiOptions& opt) {
  if (opt.name == "x") {
    return GrowthFunction::power(1.0, opt.x0 < 0 ? 1.0 : opt.x0);
  }
  if (opt.name == "sqrt") {
    return GrowthFunction::power(0.5, opt.x0 < 0 ? 1.0 : opt.x0);
  }
  if (opt.name == "power") {
    return GrowthFunction::power(opt.q, opt.x0 < 0 ? 1.0 : opt.x0);
  }
  if (opt.name == "power-log") {
    return GrowthFunction::power_log(opt.q, opt.beta, opt.x0);
  }
  if (opt.name == "sqrt-log") {
    return GrowthFunction::iterated_log(opt.eps, opt.x0 < 0 ? 3.2 : opt.x0);
  }
  throw std::invalid_argument("unknown phi family: " + opt.name);
}

struct FamilyOptions {
  std::string family = "iid-normal";
  double alpha = 2.0;
  double skew = 0.0;
  double hurst = 0.5;
  double rho = 0.5;
  double grid_step = 1.0;
  std::uint64_t mesh = 16;
  double cutoff = 0.0;
  std::string coeffs = "1";
};

void add_family_options(CLI::App* cmd, FamilyOptions& opt) {
  cmd->add_option("--family", opt.family,
                  "iid-normal | iid-cauchy | iid-stable | qs-ma | "
                  "qs-geometric | levy | lfsm")
      ->default_val("iid-normal");
  cmd->add_option("--alpha", opt.alpha, "stability index");
  cmd->add_option("--skew", opt.skew, "stable skewness");
  cmd->add_option("--hurst", opt.hurst, "Hurst index (lfsm)");
  cmd->add_option("--rho", opt.rho, "geometric MA decay (qs-geometric)");
  cmd->add_option("--grid-step", opt.grid_step, "time step (levy)");
  cmd->add_option("--mesh", opt.mesh, "sub-steps per unit time (lfsm)");
  cmd->add_option("--cutoff", opt.cutoff, "kernel cutoff (lfsm, 0 = 16n)");
  cmd->add_option("--coeffs", opt.coeffs, "comma-separated MA coefficients (qs-ma)");
}

std::vector<double> parse_coeffs(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    out.push_back(std::stod(cell));
  }
  return out;
}

StableLaw iid_law(const FamilyOptions& f) {
  if (f.family == "iid-normal") {
    return StableLaw(2.0, 0.0, 1.0 / std::sqrt(2.0), 0.0); // N(0,1)
  }
  if (f.family == "iid-cauchy") {
    return StableLaw(1.0, 0.0, 1.0, 0.0);
  }
  if (f.family == "iid-stable") {
    return StableLaw(f.alpha, f.skew, 1.0, 0.0);
  }
  throw std::invalid_argument("not an i.i.d. family: " + f.family);
}

bool is_iid(const std::string& family) {
  return family == "iid-normal" || family == "iid-cauchy" ||
         family == "iid-stable";
}

PathEnsemble make_ensemble(const FamilyOptions& f, std::size_t n,
                           std::size_t paths, std::uint64_t seed) {
  if (is_iid(f.family)) {
    return simulate_iid(iid_law(f), n, paths, seed);
  }
  if (f.family == "qs-ma") {
    return simulate_quasi_stationary(
               htsl::QuasiStationarySpec::finite(parse_coeffs(f.coeffs)), n,
               paths, seed)
        .ensemble;
  }
  if (f.family == "qs-geometric") {
    return simulate_quasi_stationary(htsl::QuasiStationarySpec::geometric(f.rho),
                                     n, paths, seed)
        .ensemble;
  }
  if (f.family == "levy") {
    return htsl::simulate_stable_levy(f.alpha, n, f.grid_step, paths, seed,
                                      f.skew);
  }
  if (f.family == "lfsm") {
    return simulate_lfsm(htsl::LfsmSpec(f.alpha, f.hurst, f.mesh, f.cutoff), n,
                         paths, seed);
  }
  throw std::invalid_argument("unknown family: " + f.family);
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open " + path);
  }
  os << j.dump(2) << '\n';
}

int run_constants(double p, double c1, std::uint64_t a_max,
                  const std::string& out) {
  const htsl::BlockBase chosen = htsl::block_base(p, c1);
  std::ostringstream os;
  os << "a,c,admissible,chosen\n";
  char buf[128];
  for (std::uint64_t a = 2; a <= a_max; a <<= 1) {
    const double c = htsl::contraction_constant(p, c1, a);
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%d,%d\n",
                  static_cast<unsigned long long>(a), c, c < 1.0 ? 1 : 0,
                  a == chosen.a ? 1 : 0);
    os << buf;
  }
  if (out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(out, std::ios::binary);
    f << os.str();
  }
  return 0;
}

int run_simulate(const FamilyOptions& fam, std::size_t n, std::size_t paths,
                 std::uint64_t seed, const std::string& out,
                 const std::string& format) {
  PathEnsemble e = make_ensemble(fam, n, paths, seed);
  if (format == "csv") {
    htsl::write_csv(e, out);
  } else if (format == "binary") {
    htsl::write_binary(e, out);
  } else {
    throw std::invalid_argument("unknown format: " + format);
  }
  return 0;
}

int run_check(const FamilyOptions& fam, const PhiOptions& phi_opt, double p,
              std::uint64_t a, std::size_t levels, std::size_t k_window,
              std::size_t paths, std::uint64_t seed, std::size_t m_max,
              const std::string& out) {
  const GrowthFunction phi = make_phi(phi_opt);
  if (a == 0) {
    const double x_max = std::max(std::pow(2.0, 40.0), 4.0 * phi.x0());
    a = htsl::block_base(p, htsl::doubling_bounds(phi, x_max).c1).a;
  }

  if (fam.family == "qs-geometric") {
    htsl::CovarianceBound f;
    const double rho = fam.rho;
    f.f = [rho](std::size_t m) {
      return std::pow(rho, static_cast<double>(m)) / (1.0 - rho * rho);
    };
    f.tail_ratio = rho;
    const auto rep = htsl::quasi_stationary_series(f, phi, a, m_max);
    const auto j = rep.to_json();
    if (out.empty()) {
      std::cout << j.dump(2) << '\n';
    } else {
      write_json(j, out);
    }
    return 0;
  }

  const std::size_t block = static_cast<std::size_t>(
      std::pow(static_cast<double>(a), static_cast<double>(levels)));
  const std::size_t length = block + k_window + 2;
  PathEnsemble e = make_ensemble(fam, length, paths, seed);

  std::function<double(std::size_t)> analytic;
  if (fam.family == "iid-normal" && p == 2.0) {
    // unit-variance i.i.d.: E|S_{k,b}|^2 = b + 1 under the inclusive sum
    analytic = [phi, a](std::size_t n) {
      const double b = std::pow(static_cast<double>(a), static_cast<double>(n));
      const double ph = phi(b);
      return (b + 1.0) / (ph * ph);
    };
  }
  const auto cert = htsl::moment_series(e, p, phi, a, levels, k_window, analytic);
  const auto j = cert.to_json();
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json(j, out);
  }
  return 0;
}

int run_verify(const FamilyOptions& fam, const PhiOptions& phi_opt,
               const std::string& battery, std::uint64_t a, std::size_t levels,
               std::size_t paths, std::uint64_t seed, std::uint64_t mesh,
               const std::string& out) {
  if (battery == "decay") {
    const GrowthFunction phi = make_phi(phi_opt);
    const std::size_t length =
        2 * static_cast<std::size_t>(std::pow(static_cast<double>(a),
                                              static_cast<double>(levels))) +
        2;
    htsl::DiagnosticsReport rep;
    if (is_iid(fam.family)) {
      rep = decay_diagnostic(htsl::iid_source(iid_law(fam), length, paths, seed),
                             phi, a, levels);
    } else {
      rep = decay_diagnostic(make_ensemble(fam, length, paths, seed), phi, a,
                             levels);
    }
    rep.meta["family"] = fam.family;
    rep.meta["seed"] = seed;
    write_json(rep.to_json(), out + ".json");
    rep.write_csv(out + ".csv");
    return 0;
  }
  if (battery == "tail") {
    // sup over [0,1] of a stable Levy path, log-log survival fit
    std::vector<double> sups(paths);
    const PathEnsemble e = htsl::simulate_stable_levy(
        fam.alpha, mesh, 1.0 / static_cast<double>(mesh), paths, seed, fam.skew);
    for (std::size_t p = 0; p < paths; ++p) {
      auto row = e.row(p);
      double m = 0.0;
      for (double v : row) m = std::max(m, std::abs(v));
      sups[p] = m;
    }
    const htsl::TailFit fit = htsl::tail_exponent(sups);
    htsl::DiagnosticsReport rep;
    rep.tail = fit;
    rep.meta = {{"battery", "tail"}, {"family", "levy"},   {"alpha", fam.alpha},
                {"mesh", mesh},      {"paths", paths},     {"seed", seed}};
    write_json(rep.to_json(), out + ".json");
    rep.write_csv(out + ".csv");
    return 0;
  }
  throw std::invalid_argument("unknown battery: " + battery);
}

int run_lfsm_demo(double alpha, double hurst, std::size_t n, std::size_t paths,
                  std::uint64_t seed, double eps, std::uint64_t mesh,
                  const std::string& out) {
  nlohmann::json j = {{"type", "lfsm-demo"},
                      {"alpha", alpha},
                      {"hurst", hurst},
                      {"n", n},
                      {"paths", paths},
                      {"seed", seed}};

  // Degeneracy H = 1/alpha: the LFSM route must be bit-identical to the
  // Levy simulator.
  {
    const htsl::LfsmSpec degenerate(alpha, 1.0 / alpha, mesh, 0.0);
    const PathEnsemble via_lfsm = simulate_lfsm(degenerate, n, paths, seed);
    const PathEnsemble via_levy =
        htsl::simulate_stable_levy(alpha, n, 1.0, paths, seed);
    j["degeneracy_bit_identical"] = via_lfsm.data == via_levy.data;
  }

  const PathEnsemble lfsm =
      simulate_lfsm(htsl::LfsmSpec(alpha, hurst, mesh, 0.0), n, paths, seed);

  // Normalized decay along the integers at dyadic times.
  {
    const std::size_t levels =
        static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(n))));
    nlohmann::json decay = nlohmann::json::array();
    std::vector<double> stat(paths);
    std::vector<double> first, last;
    for (std::size_t lev = 1; lev <= levels; ++lev) {
      const std::size_t t = std::size_t{1} << lev;
      const double norm = std::pow(static_cast<double>(t), hurst) *
                          std::pow(std::log(static_cast<double>(t)),
                                   1.0 / alpha + eps);
      for (std::size_t p = 0; p < paths; ++p) {
        stat[p] = std::abs(lfsm.row(p)[t]) / norm;
      }
      if (lev == 1) first = stat;
      if (lev == levels) last = stat;
      decay.push_back({{"level", lev},
                       {"q10", htsl::quantile(stat, 0.1)},
                       {"q50", htsl::quantile(stat, 0.5)},
                       {"q90", htsl::quantile(stat, 0.9)}});
    }
    std::size_t below = 0;
    for (std::size_t p = 0; p < paths; ++p) {
      below += last[p] < first[p];
    }
    j["integer_decay"] = decay;
    j["decay_score"] = static_cast<double>(below) / paths;
    j["eps"] = eps;
  }

  // Self-similarity exponent via the variance at alpha = 2.
  if (alpha == 2.0) {
    std::vector<double> log_t, log_var;
    for (std::size_t t = 1; t <= n; t *= 2) {
      double s2 = 0.0;
      for (std::size_t p = 0; p < paths; ++p) {
        const double v = lfsm.row(p)[t];
        s2 += v * v;
      }
      log_t.push_back(std::log(static_cast<double>(t)));
      log_var.push_back(std::log(s2 / static_cast<double>(paths)));
    }
    const htsl::LinearFit fit = htsl::least_squares(log_t, log_var);
    j["variance_slope"] = fit.slope;
    j["variance_slope_expected"] = 2.0 * hurst;
  }

  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json(j, out);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and verification toolkit for phi-normalized "
               "strong laws of large numbers"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a TOML config file");

  // constants
  double p = 2.0, c1 = 2.0;
  std::uint64_t a_max = 64;
  std::string constants_out;
  auto* constants = app.add_subcommand(
      "constants", "block base / contraction constant table");
  constants->add_option("--p", p, "moment order")->required();
  constants->add_option("--c1", c1, "doubling lower bound")->required();
  constants->add_option("--a-max", a_max, "largest base to tabulate");
  constants->add_option("--out", constants_out, "output CSV (default stdout)");

  // simulate
  FamilyOptions sim_fam;
  std::size_t sim_n = 1024, sim_paths = 1;
  std::uint64_t sim_seed = 0;
  std::string sim_out, sim_format = "csv";
  auto* simulate = app.add_subcommand("simulate", "write a path ensemble");
  add_family_options(simulate, sim_fam);
  simulate->add_option("--n", sim_n, "steps / horizon");
  simulate->add_option("--paths", sim_paths, "number of paths");
  simulate->add_option("--seed", sim_seed, "base seed");
  simulate->add_option("--out", sim_out, "output file")->required();
  simulate->add_option("--format", sim_format, "csv | binary");

  // check
  FamilyOptions chk_fam;
  PhiOptions chk_phi;
  double chk_p = 2.0;
  std::uint64_t chk_a = 0;
  std::size_t chk_levels = 10, chk_k = 8, chk_paths = 1000, chk_mmax = 40;
  std::uint64_t chk_seed = 0;
  std::string chk_out;
  auto* check = app.add_subcommand(
      "check", "evaluate the block moment series / quasi-stationary condition");
  add_family_options(check, chk_fam);
  add_phi_options(check, chk_phi);
  check->add_option("--p", chk_p, "moment order");
  check->add_option("--a", chk_a, "block base (0 = derive from phi)");
  check->add_option("--levels", chk_levels, "number of dyadic levels");
  check->add_option("--k-window", chk_k, "sup window over shifts k");
  check->add_option("--paths", chk_paths, "Monte Carlo paths");
  check->add_option("--seed", chk_seed, "base seed");
  check->add_option("--m-max", chk_mmax, "lags for the quasi-stationary series");
  check->add_option("--out", chk_out, "output JSON (default stdout)");

  // verify
  FamilyOptions ver_fam;
  PhiOptions ver_phi;
  std::string ver_battery = "decay";
  std::uint64_t ver_a = 2, ver_mesh = 256;
  std::size_t ver_levels = 12, ver_paths = 1000;
  std::uint64_t ver_seed = 0;
  std::string ver_out;
  auto* verify = app.add_subcommand("verify", "Monte Carlo decay / tail batteries");
  add_family_options(verify, ver_fam);
  add_phi_options(verify, ver_phi);
  verify->add_option("--battery", ver_battery, "decay | tail");
  verify->add_option("--a", ver_a, "block base");
  verify->add_option("--levels", ver_levels, "number of dyadic levels");
  verify->add_option("--paths", ver_paths, "Monte Carlo paths");
  verify->add_option("--seed", ver_seed, "base seed");
  verify->add_option("--sup-mesh", ver_mesh, "grid points on [0,1] (tail battery)");
  verify->add_option("--out", ver_out, "output base name (.json/.csv)")->required();

  // lfsm-demo
  double demo_alpha = 2.0, demo_hurst = 0.7, demo_eps = 0.5;
  std::size_t demo_n = 32, demo_paths = 2000;
  std::uint64_t demo_seed = 0, demo_mesh = 16;
  std::string demo_out;
  auto* demo = app.add_subcommand("lfsm-demo",
                                  "LFSM degeneracy / self-similarity battery");
  demo->add_option("--alpha", demo_alpha, "stability index");
  demo->add_option("--hurst", demo_hurst, "Hurst index");
  demo->add_option("--n", demo_n, "time horizon");
  demo->add_option("--paths", demo_paths, "Monte Carlo paths");
  demo->add_option("--seed", demo_seed, "base seed");
  demo->add_option("--eps", demo_eps, "epsilon in the normalizer");
  demo->add_option("--mesh", demo_mesh, "sub-steps per unit time");
  demo->add_option("--out", demo_out, "output JSON (default stdout)");

  try {
    app.parse(argc, argv);
    if (*constants) {
      return run_constants(p, c1, a_max, constants_out);
    }
    if (*simulate) {
      return run_simulate(sim_fam, sim_n, sim_paths, sim_seed, sim_out,
                          sim_format);
    }
    if (*check) {
      return run_check(chk_fam, chk_phi, chk_p, chk_a, chk_levels, chk_k,
                       chk_paths, chk_seed, chk_mmax, chk_out);
    }
    if (*verify) {
      return run_verify(ver_fam, ver_phi, ver_battery, ver_a, ver_levels,
                        ver_paths, ver_seed, ver_mesh, ver_out);
    }
    if (*demo) {
      return run_lfsm_demo(demo_alpha, demo_hurst, demo_n, demo_paths,
                           demo_seed, demo_eps, demo_mesh, demo_out);
    }
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e); // --help and friends
    }
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const htsl::guard_error& e) {
    std::cerr << "numerical guard: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2; // unknown subcommand
}
