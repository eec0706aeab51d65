#pragma once

#include <json.hpp>

#include "gammaref/asymptotics.hpp"
#include "gammaref/field_analysis.hpp"
#include "gammaref/gauss_constants.hpp"
#include "gammaref/monte_carlo.hpp"

namespace gammaref {

inline void to_json(nlohmann::json& j, const AsymptoticEstimate& est) {
  j = {{"value", est.value},
       {"regime", regime_name(est.regime)},
       {"constants_used", est.constants_used},
       {"boundary_level", est.boundary_level},
       {"regime_reached", est.regime_reached}};
}

inline void to_json(nlohmann::json& j, const ConstantEstimate& est) {
  j = {{"kind", kind_name(est.kind)},
       {"alpha", est.alpha},
       {"S", est.truncation_s},
       {"grid_step", est.grid_step},
       {"replications", est.replications},
       {"value", est.value},
       {"std_error", est.std_error}};
  if (est.b) j["b"] = *est.b;
}

inline void to_json(nlohmann::json& j, const McEstimate& est) {
  j = {{"point", est.point}, {"ci_low", est.ci_low},   {"ci_high", est.ci_high},
       {"n", est.n},         {"n_hits", est.n_hits},   {"method", est.method}};
}

inline void to_json(nlohmann::json& j, const LimitLaw& law) {
  j = {{"kind", law.kind == LimitLaw::Kind::UnitExponential ? "unit_exponential"
                                                            : "truncated_normal"},
       {"scaling", law.scaling}};
  if (law.truncation_x) j["truncation_x"] = *law.truncation_x;
}

inline void to_json(nlohmann::json& j, const ConditionalSample& sample) {
  j = {{"kind", sample.kind == ConditionalSample::Kind::ScaledRuinTime ? "scaled_ruin_time"
                                                                       : "scaled_max_loss"},
       {"values", sample.values},
       {"scaling_used", sample.scaling_used},
       {"law_expected", sample.law_expected},
       {"replications", sample.replications},
       {"n_hits", sample.values.size()}};
}

inline void to_json(nlohmann::json& j, const ComparisonRow& row) {
  j = {{"u", row.u},           {"mc_point", row.mc_point},     {"ci_low", row.ci_low},
       {"ci_high", row.ci_high}, {"asymptotic", row.asymptotic}, {"ratio", row.ratio}};
}

inline void to_json(nlohmann::json& j, const ComparisonReport& report) {
  j = {{"rows", report.rows}};
}
inline void from_json(const nlohmann::json& j, ComparisonRow& row) {
  j.at("u").get_to(row.u);
  j.at("mc_point").get_to(row.mc_point);
  j.at("ci_low").get_to(row.ci_low);
  j.at("ci_high").get_to(row.ci_high);
  j.at("asymptotic").get_to(row.asymptotic);
  j.at("ratio").get_to(row.ratio);
}
inline void from_json(const nlohmann::json& j, ComparisonReport& report) {
  j.at("rows").get_to(report.rows);
}

inline void to_json(nlohmann::json& j, const NegativityReport& report) {
  j = {{"max_f_d", report.max_f},
       {"at", {{"hurst", report.at_hurst},
               {"gamma", report.at_gamma},
               {"d", report.at_d},
               {"s", report.at_s}}},
       {"pass", report.pass},
       {"cells_checked", report.cells_checked},
       {"has_out_of_scope", report.has_out_of_scope}};
  if (report.has_out_of_scope) j["out_of_scope_max_f_d"] = report.out_of_scope_max_f;
}

}  // namespace gammaref
