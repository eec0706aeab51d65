#include "gammaref/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "gammaref/stats.hpp"

namespace gammaref {

double infinite_horizon_proxy(const ModelParams& params, double u) {
  const double h = params.hurst.value();
  const double c = params.drift;
  double t = u / c + 1.0;
  for (int i = 0; i < 200; ++i) t = (u + 6.0 * std::pow(t, h)) / c;
  return t;
}

double experiment_horizon(const ExperimentSpec& spec) {
  if (const auto* lg = std::get_if<LongHorizon>(&spec.scenario)) {
    if (lg->x == std::numeric_limits<double>::infinity())
      return infinite_horizon_proxy(spec.params, spec.u);
  }
  return realized_horizon(spec.params, spec.scenario, spec.u);
}

namespace {

struct RepRecord {
  bool ruined = false;
  double ruin_time = 0.0;
  double max_loss = 0.0;
};

void validate_spec(const ExperimentSpec& spec, double t_u) {
  if (spec.replications < 100)
    throw ParamOutOfRange("ExperimentSpec requires replications >= 100");
  if (!(spec.u >= 0.0)) throw ParamOutOfRange("ExperimentSpec requires u >= 0");
  // Allow a hair of rounding slack when the horizon was computed from u.
  if (spec.grid.horizon < t_u * (1.0 - 1e-12))
    throw ParamOutOfRange("grid horizon " + std::to_string(spec.grid.horizon) +
                          " does not cover realized T_u = " + std::to_string(t_u));
}

std::size_t horizon_index(const ExperimentSpec& spec, double t_u) {
  // floor(T_u / step): the supremum never looks past T_u.
  const auto idx = static_cast<std::size_t>(std::floor(t_u / spec.grid.step() * (1.0 + 1e-12)));
  return std::min(idx, spec.grid.n_steps);
}

// Runs every replication, one row per (replication, gamma). Rows are filled
// by replication index, so the reduction is independent of the worker count.
std::vector<std::vector<RepRecord>> run_replications(const ExperimentSpec& spec,
                                                     const std::vector<double>& gammas,
                                                     unsigned threads) {
  const double t_u = experiment_horizon(spec);
  validate_spec(spec, t_u);
  const std::size_t h_idx = horizon_index(spec, t_u);
  const double step = spec.grid.step();
  const SpectralFgnSampler sampler(spec.params.hurst, spec.grid.n_steps);

  std::vector<std::vector<RepRecord>> records(gammas.size());
  for (auto& r : records) r.resize(spec.replications);

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t rep = begin; rep < end; ++rep) {
      const auto increments = sampler.sample(step, spec.master_seed, rep);
      const auto path = fbm_path_from_fgn(increments, spec.grid, spec.params.hurst);
      const auto y = drift_input(path, spec.params.drift);
      for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        const auto reflected = reflect(y, gammas[gi]);
        const auto outcome = ruin_outcome(reflected, spec.u, h_idx, step);
        RepRecord rec;
        rec.ruined = outcome.ruined;
        if (outcome.ruined) {
          rec.ruin_time = *outcome.ruin_time;
          rec.max_loss = *outcome.max_loss;
        }
        records[gi][rep] = rec;
      }
    }
  };

  const unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    worker(0, spec.replications);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (spec.replications + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = static_cast<std::size_t>(w) * chunk;
      const std::size_t end = std::min(spec.replications, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return records;
}

McEstimate reduce_to_estimate(const std::vector<RepRecord>& records) {
  std::size_t hits = 0;
  for (const auto& r : records)
    if (r.ruined) ++hits;
  McEstimate est;
  est.n = records.size();
  est.n_hits = hits;
  if (hits == 0)
    throw InfeasibleRareEvent("no ruin observed in " + std::to_string(records.size()) +
                                  " replications; implied upper bound " +
                                  std::to_string(3.0 / static_cast<double>(records.size())),
                              3.0 / static_cast<double>(records.size()));
  const auto wilson = wilson_interval(hits, records.size());
  est.point = wilson.point;
  est.ci_low = wilson.low;
  est.ci_high = wilson.high;
  return est;
}

}  // namespace

McEstimate estimate_ruin_prob(const ExperimentSpec& spec, unsigned threads) {
  const auto records = run_replications(spec, {spec.params.gamma}, threads);
  return reduce_to_estimate(records[0]);
}

std::vector<McEstimate> estimate_ruin_prob_gammas(const ExperimentSpec& spec,
                                                  const std::vector<double>& gammas,
                                                  unsigned threads) {
  const auto records = run_replications(spec, gammas, threads);
  std::vector<McEstimate> out;
  out.reserve(gammas.size());
  for (const auto& rec : records) out.push_back(reduce_to_estimate(rec));
  return out;
}

ConditionalSample sample_conditional_ruin_times(const ExperimentSpec& spec,
                                                unsigned threads) {
  const double t_u = experiment_horizon(spec);
  const auto records = run_replications(spec, {spec.params.gamma}, threads);
  const LimitLaw law = ruin_time_limit_law(spec.params, spec.scenario, spec.u);

  ConditionalSample sample;
  sample.kind = ConditionalSample::Kind::ScaledRuinTime;
  sample.law_expected = law;
  sample.scaling_used = law.scaling;
  sample.replications = spec.replications;
  for (const auto& r : records[0]) {
    if (!r.ruined) continue;
    if (law.kind == LimitLaw::Kind::TruncatedNormal)
      sample.values.push_back((r.ruin_time - t0(spec.params) * spec.u) * law.scaling);
    else
      sample.values.push_back((t_u - r.ruin_time) * law.scaling);
  }
  if (sample.values.empty())
    throw InfeasibleRareEvent("no ruin observed; cannot form conditional ruin times",
                              3.0 / static_cast<double>(spec.replications));
  return sample;
}

ConditionalSample sample_conditional_losses(const ExperimentSpec& spec, unsigned threads) {
  const double t_u = experiment_horizon(spec);
  const auto records = run_replications(spec, {spec.params.gamma}, threads);
  const double scaling = loss_limit_scaling(spec.params, spec.u, t_u, spec.scenario);

  ConditionalSample sample;
  sample.kind = ConditionalSample::Kind::ScaledMaxLoss;
  sample.law_expected = LimitLaw{LimitLaw::Kind::UnitExponential, scaling, {}};
  sample.scaling_used = scaling;
  sample.replications = spec.replications;
  for (const auto& r : records[0])
    if (r.ruined) sample.values.push_back(scaling * r.max_loss);
  if (sample.values.empty())
    throw InfeasibleRareEvent("no ruin observed; cannot form conditional losses",
                              3.0 / static_cast<double>(spec.replications));
  return sample;
}

double ks_statistic(const ConditionalSample& sample) {
  if (sample.values.size() < 50)
    throw TooFewObservations("ks_statistic requires >= 50 conditional observations, got " +
                             std::to_string(sample.values.size()));
  const LimitLaw& law = sample.law_expected;
  return ks_statistic_against(sample.values, [&law](double y) { return law.cdf(y); });
}

ComparisonReport compare_mc_vs_asymptotic(const ExperimentSpec& base,
                                          const std::vector<double>& u_ladder,
                                          const GaussConstants& constants,
                                          unsigned threads) {
  ComparisonReport report;
  for (double u : u_ladder) {
    ExperimentSpec spec = base;
    spec.u = u;
    spec.grid = GridSpec(base.grid.n_steps, experiment_horizon(spec));

    const McEstimate mc = estimate_ruin_prob(spec, threads);
    const AsymptoticEstimate asym = psi_gamma(spec.params, u, spec.scenario, constants);
    ComparisonRow row;
    row.u = u;
    row.mc_point = mc.point;
    row.ci_low = mc.ci_low;
    row.ci_high = mc.ci_high;
    row.asymptotic = asym.value;
    row.ratio = asym.value > 0.0 ? mc.point / asym.value : 0.0;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace gammaref
