#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gammaref/fbm.hpp"

namespace gammaref {

/// Model parameters (H, c, gamma): Hurst index, positive drift of the
/// input Y(t) = X_H(t) - c t, and reflection parameter gamma in [0,1].
struct ModelParams {
  HurstIndex hurst;
  double drift;
  double gamma;

  ModelParams(HurstIndex h, double c, double g) : hurst(h), drift(c), gamma(g) {
    if (!(drift > 0.0)) throw ParamOutOfRange("ModelParams requires drift c > 0");
    if (!(gamma >= 0.0 && gamma <= 1.0))
      throw GammaOutOfRange("ModelParams requires gamma in [0,1]");
  }
};

/// W_gamma(t) = Y(t) - gamma * inf_{s <= t} Y(s) on the grid, together with
/// the running infimum of the input.
struct ReflectedPath {
  std::vector<double> w_values;
  std::vector<double> running_inf;  // nonincreasing, <= 0 (Y(0) = 0)
};

struct RuinOutcome {
  bool ruined = false;
  std::optional<std::size_t> ruin_index;  // first k with w[k] > u
  std::optional<double> ruin_time;        // grid time of that k
  std::optional<double> max_loss;         // max_{k <= horizon} w[k] - u, when ruined
};

/// values[k] - c * t_k elementwise.
std::vector<double> drift_input(const FbmPath& path, double c);

/// Single left-to-right pass: running_inf[k] = min(running_inf[k-1], y[k]),
/// w[k] = y[k] - gamma * running_inf[k]. Requires y[0] == 0.
ReflectedPath reflect(const std::vector<double>& y_values, double gamma);

/// First crossing with strict inequality w > u, scanned over grid indices
/// k <= horizon_index. `step` converts the crossing index into ruin_time.
RuinOutcome ruin_outcome(const ReflectedPath& w, double u, std::size_t horizon_index,
                         double step = 1.0);

}  // namespace gammaref
