// End-to-end acceptance checks. Each check prints one PASS/FAIL line with the
// measured quantities; the process exits nonzero if any selected check fails.
// Run with no arguments for the full battery, or pass check numbers.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gammaref/fbm.hpp"
#include "gammaref/field_analysis.hpp"
#include "gammaref/gauss_constants.hpp"
#include "gammaref/monte_carlo.hpp"
#include "gammaref/stats.hpp"

namespace fs = std::filesystem;
using namespace gammaref;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

unsigned workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 4 : std::min(hw, 8u);
}

ExperimentSpec make_spec(double hurst, double gamma, double u, HorizonScenario scenario,
                         std::size_t grid_n, std::size_t reps, std::uint64_t seed) {
  ExperimentSpec spec{ModelParams(HurstIndex(hurst), 1.0, gamma),
                      u,
                      std::move(scenario),
                      GridSpec(grid_n, 1.0),
                      reps,
                      seed};
  spec.grid = GridSpec(grid_n, experiment_horizon(spec));
  return spec;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t ia = 0, ib = 0;
  double ks = 0.0;
  while (ia < a.size() && ib < b.size()) {
    // atoms (the sup law has one at 0) require consuming whole tie blocks
    const double v = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] == v) ++ia;
    while (ib < b.size() && b[ib] == v) ++ib;
    ks = std::max(ks, std::abs(double(ia) / a.size() - double(ib) / b.size()));
  }
  return ks;
}

// 1-d quadrature for E exp(sup_{[0,S]}(sqrt(2) Z t - coeff t^2)), Z standard
// normal: the sup is Z^2/(2 coeff) while the vertex stays inside [0,S].
double alpha2_quadrature(double coeff, double s) {
  const double hi = std::sqrt(2.0) * coeff * s + 12.0;
  const int n = 2000000;
  const double dz = hi / n;
  double sum = 0.5;
  for (int i = 0; i < n; ++i) {
    const double z = (i + 0.5) * dz;
    const double t_star = z / (std::sqrt(2.0) * coeff);
    const double sup = t_star <= s ? z * z / (2.0 * coeff)
                                   : std::sqrt(2.0) * z * s - coeff * s * s;
    sum += std::exp(sup - 0.5 * z * z) / std::sqrt(2.0 * M_PI) * dz;
  }
  return sum;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// ---------------------------------------------------------------------------

bool check_brownian_oracle(std::ostream& log) {
  // H = 1/2, gamma = 0: the infinite-horizon ruin probability is exactly
  // exp(-2cu) up to the vanishing correction, so the estimator is checked
  // against a value the simulator cannot know.
  const auto spec = make_spec(0.5, 0.0, 1.0, LongHorizon{kInf}, 1u << 15, 100000, 101);
  const auto est = estimate_ruin_prob(spec, workers());
  const double target = std::exp(-2.0);
  const double ratio = est.point / target;
  log << "mc=" << est.point << " exact=" << target << " ratio=" << ratio
      << " hits=" << est.n_hits;
  return ratio >= 0.80 && ratio <= 1.05;
}

bool check_infinite_horizon_formula(std::ostream& log) {
  // exp(2cu) * psi0_inf(u) -> 1 from below; the deviation must shrink in u.
  const ModelParams p(HurstIndex(0.5), 1.0, 0.0);
  std::vector<double> dev;
  for (double u : {4.0, 6.0, 8.0}) {
    const double v = psi0_infinite(p, u, brownian_pickands()).value * std::exp(2.0 * u);
    dev.push_back(std::abs(v - 1.0));
    log << "u=" << u << " scaled=" << v << "  ";
  }
  return dev[1] < 0.05 && dev[0] > dev[1] && dev[1] > dev[2];
}

bool check_gamma_ratio(std::ostream& log) {
  // Intermediate horizon, H = 1/2, s0 = 1/2: psi_gamma / psi_0 must approach
  // (2 - 2 c0)/(2 - 2 c0 - gamma) = 1.6 at gamma = 1/2. Shared paths keep the
  // ratio estimate tight.
  const double target = 1.6;
  std::vector<double> ratios;
  for (double u : {1.5, 2.5}) {
    const auto spec = make_spec(0.5, 0.0, u, IntermediateHorizon{0.5}, 2048, 300000, 33);
    const auto est = estimate_ruin_prob_gammas(spec, {0.0, 0.5}, workers());
    ratios.push_back(double(est[1].n_hits) / double(est[0].n_hits));
    log << "u=" << u << " ratio=" << ratios.back() << " hits0=" << est[0].n_hits << "  ";
  }
  log << "target=" << target;
  return std::abs(ratios[1] - target) <= 0.2 * target &&
         std::abs(ratios[1] - target) <= std::abs(ratios[0] - target);
}

bool check_negativity_sweep(std::ostream& log) {
  std::vector<double> hursts, gammas;
  for (int i = 1; i <= 9; ++i) hursts.push_back(i / 10.0);
  for (int i = 0; i < 10; ++i) gammas.push_back(0.05 + 0.1 * i);
  const auto report =
      certify_lemma_negativity(hursts, gammas, {0.1, 0.5, 0.9, 0.99}, 1000);
  log << "cells=" << report.cells_checked << " max_f=" << report.max_f << " at H="
      << report.at_hurst << " g=" << report.at_gamma << " d=" << report.at_d;
  return report.pass && report.max_f < 0.0 && !report.has_out_of_scope;
}

bool check_variance_maximizer(std::ostream& log) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double h = 0.1 + 0.8 * unif(rng);
    const double g = 0.05 + 0.9 * unif(rng);
    const double d = (0.05 + 0.9 * unif(rng)) * h / (1.0 - h);
    const auto vm = locate_variance_max(FieldParams{ModelParams(HurstIndex(h), 1.0, g), d},
                                        200);
    if (vm.s > 1.0 / 200.0 || vm.t < 1.0 - 1.0 / 200.0) {
      log << "maximizer off the corner at H=" << h << " g=" << g << " d=" << d;
      return false;
    }
    worst = std::max(worst, std::abs(vm.value - 1.0 / (1.0 + d)));
  }
  log << "sets=50 max |V* - 1/(1+d)|=" << worst;
  return worst < 1e-6;
}

bool check_sampler_law(std::ostream& log) {
  // Empirical fGn covariance against the closed form.
  const std::size_t n = 64;
  const HurstIndex h(0.7);
  SpectralFgnSampler sampler(h, n);
  std::vector<double> acc(n * n, 0.0);
  const std::size_t reps = 20000;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto x = sampler.sample(1.0, 404, r);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) acc[i * n + j] += x[i] * x[j];
  }
  double max_err = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      max_err = std::max(max_err, std::abs(acc[i * n + j] / reps -
                                           fgn_covariance(h, j - i, 1.0)));

  // Agreement in law between the spectral sampler and the dense-factorization
  // oracle, through the distribution of path suprema.
  const GridSpec grid(512, 1.0);
  CholeskyFbmSampler chol(h, grid);
  std::vector<double> sup_s, sup_c;
  SpectralFgnSampler spec_sampler(h, 512);
  for (std::size_t r = 0; r < 10000; ++r) {
    const auto inc = spec_sampler.sample(grid.step(), 505, r);
    double cum = 0.0, m = 0.0;
    for (double v : inc) {
      cum += v;
      m = std::max(m, cum);
    }
    sup_s.push_back(m);
    const auto path = chol.sample(506, r);
    sup_c.push_back(*std::max_element(path.values.begin(), path.values.end()));
  }
  const double ks = two_sample_ks(sup_s, sup_c);
  log << "cov_err=" << max_err << " sampler_ks=" << ks;
  return max_err < 0.05 && ks < 0.02;
}

bool check_constants(std::ostream& log) {
  const auto pk = pickands_estimate(2.0, 40.0, 0.05, 20000, 11, workers());
  const double pk_target = 1.0 / std::sqrt(M_PI);
  log << "pickands2=" << pk.value << " limit=" << pk_target;
  if (std::abs(pk.value - pk_target) > 0.10 * pk_target) return false;
  for (double b : {0.5, 1.0, 2.0}) {
    const auto pb = piterbarg_estimate(2.0, b, 10.0, 0.05, 20000, 11, workers());
    const double oracle = alpha2_quadrature(1.0 + b, 10.0);
    log << "  b=" << b << " est=" << pb.value << " oracle=" << oracle;
    if (std::abs(pb.value - oracle) > 0.10 * oracle) return false;
  }
  return true;
}

bool check_conditional_laws(std::ostream& log) {
  // Long horizon: the scaled conditional ruin time converges to a normal.
  std::vector<double> ks_long;
  std::size_t hits25 = 0;
  for (double u : {1.5, 2.5}) {
    const auto spec = make_spec(0.5, 0.3, u, LongHorizon{kInf}, 1u << 14, 100000, 55);
    const auto times = sample_conditional_ruin_times(spec, workers());
    ks_long.push_back(ks_statistic(times));
    if (u == 2.5) hits25 = times.values.size();
    log << "long u=" << u << " ks=" << ks_long.back() << " n=" << times.values.size()
        << "  ";
  }
  if (!(ks_long[1] < ks_long[0] && ks_long[1] < 0.15 && hits25 >= 500)) return false;

  // Short horizon: the scaled time to the horizon converges to Exp(1). The
  // finite-u deficit of the scaled mean shrinks with c T_u / u, so a light
  // drift and a short horizon buy law quality without starving the hit count.
  ExperimentSpec spec{ModelParams(HurstIndex(0.5), 0.25, 0.3),
                      1.6,
                      ShortHorizon{[](double u) { return 0.2 * std::sqrt(u / 1.6); }},
                      GridSpec(512, 1.0),
                      3600000,
                      56};
  spec.grid = GridSpec(512, experiment_horizon(spec));
  const auto times = sample_conditional_ruin_times(spec, workers());
  const double ks_short = ks_statistic(times);
  log << "short ks=" << ks_short << " n=" << times.values.size();
  return ks_short < 0.15 && times.values.size() >= 500;
}

bool check_algebraic_identities(std::ostream& log) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const PiterbargConstantSource brownian_src{
      [](double) { return brownian_pickands(); },
      [](double, double b) { return brownian_piterbarg(b); },
      [](double, double b) { return brownian_tilde_piterbarg(b); }};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double h = i % 3 == 0 ? 0.5 : (i % 3 == 1 ? 0.1 + 0.35 * unif(rng)
                                                    : 0.55 + 0.4 * unif(rng));
    const double g = 0.05 + 0.9 * unif(rng);
    const double c = 0.5 + 1.5 * unif(rng);
    const ModelParams p(HurstIndex(h), c, g);
    const double s0 = 0.9 * t0(p) * unif(rng);
    const GaussConstants constants{0.7 + unif(rng), 1.0 + unif(rng)};

    // the combined prefactor must factor exactly
    const double lhs = d_h_gamma(p, s0, constants);
    const double rhs = d_h(p, s0, constants.pickands) * m_gamma(p, s0, constants.piterbarg);
    worst = std::max(worst, std::abs(lhs / rhs - 1.0));

    // gamma = 0 dispatch reduces to the 0-reflected formula
    const ModelParams p0(HurstIndex(h), c, 0.0);
    const double u = 2.0 + 3.0 * unif(rng);
    const double via_gamma =
        psi_gamma(p0, u, IntermediateHorizon{s0}, constants).value;
    const double direct = psi0_finite(p0, u, s0 * u, s0, constants.pickands).value;
    worst = std::max(worst, std::abs(via_gamma / direct - 1.0));

    if (h == 0.5) {
      // corner field asymptotic collapses to the algebraic prefactor
      const double c0 = c0_of(p, s0);
      const double uu = 3.0 + unif(rng);
      const double field =
          piterbarg_field_asymptotic(corner_expansion(p, c0), uu, brownian_src);
      const double algebra = 4.0 * (1.0 - c0) * (1.0 - c0) /
                             ((1.0 - 2.0 * c0) * (2.0 - 2.0 * c0 - g)) *
                             normal_tail(uu);
      worst = std::max(worst, std::abs(field / algebra - 1.0));

      // the ratio constant clears its denominator exactly
      const double m = m_gamma(p, s0);
      worst = std::max(worst,
                       std::abs(m * (2.0 - 2.0 * c0 - g) / (2.0 - 2.0 * c0) - 1.0));

      // long-horizon loss scaling reduces to 2c
      const double sc = loss_limit_scaling(p, u, 0.0, LongHorizon{kInf});
      worst = std::max(worst, std::abs(sc / (2.0 * c) - 1.0));
    }
  }
  log << "points=20 max_rel_err=" << worst;
  return worst < 1e-12;
}

bool check_cli_determinism(std::ostream& log) {
  const fs::path base = fs::temp_directory_path() / "gammaref_acceptance_cli";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string cli = GAMMAREF_CLI_PATH;
  const std::string common =
      " ruin-prob --hurst 0.6 --gamma 0.4 --u 1 --scenario long --x inf"
      " --grid-n 4096 --reps 2000 --seed 42 --out ";
  const auto run = [&](const std::string& dir, int threads) {
    const std::string cmd = cli + common + (base / dir).string() + " --threads " +
                            std::to_string(threads) + " >/dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  if (!run("a", 1) || !run("b", 1) || !run("c", 8)) {
    log << "cli invocation failed";
    return false;
  }
  const bool same_rerun = slurp(base / "a/result.json") == slurp(base / "b/result.json");
  const bool same_threads = slurp(base / "a/result.json") == slurp(base / "c/result.json") &&
                            slurp(base / "a/result.csv") == slurp(base / "c/result.csv");
  log << "rerun_identical=" << same_rerun << " threads_identical=" << same_threads;
  fs::remove_all(base);
  return same_rerun && same_threads;
}

struct Check {
  int id;
  const char* name;
  std::function<bool(std::ostream&)> fn;
};

const std::vector<Check> kChecks = {
    {1, "infinite-horizon Brownian ruin probability matches exp(-2cu)",
     check_brownian_oracle},
    {2, "infinite-horizon formula approaches the exact Brownian value",
     check_infinite_horizon_formula},
    {3, "partial-reflection ruin ratio approaches its constant", check_gamma_ratio},
    {4, "variance derivative factor is negative across the lemma scope",
     check_negativity_sweep},
    {5, "variance maximizer sits at the corner with value 1/(1+d)",
     check_variance_maximizer},
    {6, "path samplers reproduce the covariance and agree in law", check_sampler_law},
    {7, "constant estimators match quadrature oracles at alpha = 2", check_constants},
    {8, "conditional ruin times follow their limit laws", check_conditional_laws},
    {9, "algebraic identities hold to 1e-12 at random parameters",
     check_algebraic_identities},
    {10, "cli results are identical across reruns and worker counts",
     check_cli_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& check : kChecks) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), check.id) == selected.end())
      continue;
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = check.fn(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    std::printf("%s  %2d  %s  [%s]\n", ok ? "PASS" : "FAIL", check.id, check.name,
                detail.str().c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
