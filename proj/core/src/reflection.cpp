#include "gammaref/reflection.hpp"

#include <algorithm>

namespace gammaref {

std::vector<double> drift_input(const FbmPath& path, double c) {
  std::vector<double> y(path.values.size());
  for (std::size_t k = 0; k < y.size(); ++k)
    y[k] = path.values[k] - c * path.grid.time_at(k);
  return y;
}

ReflectedPath reflect(const std::vector<double>& y_values, double gamma) {
  if (y_values.empty() || y_values.front() != 0.0)
    throw NonZeroStart("reflect requires y[0] == 0");
  ReflectedPath out;
  out.w_values.resize(y_values.size());
  out.running_inf.resize(y_values.size());
  double inf = 0.0;
  for (std::size_t k = 0; k < y_values.size(); ++k) {
    inf = std::min(inf, y_values[k]);
    out.running_inf[k] = inf;
    out.w_values[k] = y_values[k] - gamma * inf;
  }
  return out;
}

RuinOutcome ruin_outcome(const ReflectedPath& w, double u, std::size_t horizon_index,
                         double step) {
  if (horizon_index >= w.w_values.size())
    throw ParamOutOfRange("horizon_index exceeds grid");
  RuinOutcome outcome;
  double sup = w.w_values[0];
  for (std::size_t k = 0; k <= horizon_index; ++k) {
    const double wk = w.w_values[k];
    sup = std::max(sup, wk);
    if (!outcome.ruined && wk > u) {
      outcome.ruined = true;
      outcome.ruin_index = k;
    }
  }
  if (outcome.ruined) {
    outcome.ruin_time = step * static_cast<double>(*outcome.ruin_index);
    outcome.max_loss = sup - u;
  }
  return outcome;
}

}  // namespace gammaref
