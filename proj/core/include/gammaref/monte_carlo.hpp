#pragma once

#include <cstdint>
#include <vector>

#include "gammaref/asymptotics.hpp"
#include "gammaref/fbm.hpp"
#include "gammaref/reflection.hpp"

namespace gammaref {

/// One replicated simulation campaign. The grid horizon must cover the
/// realized T_u (the supremum never peeks past T_u: the horizon index is
/// floor(T_u / step)).
struct ExperimentSpec {
  ModelParams params;
  double u;
  HorizonScenario scenario;
  GridSpec grid;
  std::size_t replications;
  std::uint64_t master_seed;
};

/// Smallest horizon T with c T >= u + 6 T^H, the working proxy for an
/// infinite horizon: past it the drift makes later ruin negligible.
double infinite_horizon_proxy(const ModelParams& params, double u);

/// Realized horizon of the experiment; Long with x = +inf maps to the
/// infinite-horizon proxy.
double experiment_horizon(const ExperimentSpec& spec);

struct McEstimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
  std::size_t n_hits = 0;
  const char* method = "wilson";
};

/// Fraction of ruined replications with a Wilson 95% CI. Deterministic per
/// master_seed for any worker count. Zero hits raise InfeasibleRareEvent
/// carrying the implied upper bound 3/n.
McEstimate estimate_ruin_prob(const ExperimentSpec& spec, unsigned threads = 1);

/// Shared-path estimates across several reflection parameters: each
/// replication samples one input path and evaluates every gamma on it, so
/// the pathwise monotonicity in gamma carries to the estimates.
std::vector<McEstimate> estimate_ruin_prob_gammas(const ExperimentSpec& spec,
                                                  const std::vector<double>& gammas,
                                                  unsigned threads = 1);

struct ConditionalSample {
  enum class Kind { ScaledRuinTime, ScaledMaxLoss };
  Kind kind = Kind::ScaledRuinTime;
  std::vector<double> values;  // one per ruined replication, in replication order
  double scaling_used = 1.0;
  LimitLaw law_expected;
  std::size_t replications = 0;
};

/// Regime-scaled conditional ruin-time statistics (Exp(1) for short and
/// intermediate horizons, truncated normal for the long horizon).
ConditionalSample sample_conditional_ruin_times(const ExperimentSpec& spec,
                                                unsigned threads = 1);

/// Conditional maximum losses scaled by loss_limit_scaling; expected law is
/// unit exponential in every regime.
ConditionalSample sample_conditional_losses(const ExperimentSpec& spec,
                                            unsigned threads = 1);

/// Sup-distance between the empirical CDF of the sample and its expected
/// limit law; requires at least 50 conditional observations.
double ks_statistic(const ConditionalSample& sample);

struct ComparisonRow {
  double u = 0.0;
  double mc_point = 0.0, ci_low = 0.0, ci_high = 0.0;
  double asymptotic = 0.0;
  double ratio = 0.0;  // mc / asymptotic
};
struct ComparisonReport {
  std::vector<ComparisonRow> rows;
};

/// MC-vs-asymptotic ladder over increasing u. Each rung reuses the base
/// spec's grid resolution with the horizon re-fitted to the realized T_u.
ComparisonReport compare_mc_vs_asymptotic(const ExperimentSpec& base,
                                          const std::vector<double>& u_ladder,
                                          const GaussConstants& constants = {},
                                          unsigned threads = 1);

}  // namespace gammaref
