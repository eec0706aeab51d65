#include "gammaref/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "gammaref/stats.hpp"

namespace gammaref {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double require_pickands(const std::optional<double>& pickands, const char* who) {
  if (!pickands)
    throw ParamOutOfRange(std::string(who) + ": Pickands constant H_{2H} must be supplied for H < 1/2");
  if (!(*pickands > 0.0)) throw ParamOutOfRange("Pickands constant must be positive");
  return *pickands;
}

double require_piterbarg(const std::optional<double>& piterbarg, const char* who) {
  if (!piterbarg)
    throw ParamOutOfRange(std::string(who) +
                          ": Piterbarg constant P_{2H}^{(1-gamma)/gamma} must be supplied");
  if (!(*piterbarg > 0.0)) throw ParamOutOfRange("Piterbarg constant must be positive");
  return *piterbarg;
}
}  // namespace

RegimeTag regime_tag(const HorizonScenario& scenario) {
  if (std::holds_alternative<ShortHorizon>(scenario)) return RegimeTag::Short;
  if (std::holds_alternative<IntermediateHorizon>(scenario)) return RegimeTag::Intermediate;
  return RegimeTag::Long;
}

std::string regime_name(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Short: return "short";
    case RegimeTag::Intermediate: return "intermediate";
    default: return "long";
  }
}

double t0(const ModelParams& params) {
  const double h = params.hurst.value();
  return h / (params.drift * (1.0 - h));
}

double a_u(const ModelParams& params, double u) {
  const double h = params.hurst.value();
  const double c = params.drift;
  return std::pow(h, h + 0.5) * std::pow(u, h) /
         (std::pow(1.0 - h, h + 0.5) * std::pow(c, h + 1.0));
}

double realized_horizon(const ModelParams& params, const HorizonScenario& scenario,
                        double u) {
  if (const auto* sh = std::get_if<ShortHorizon>(&scenario)) {
    if (!sh->t_u) throw RegimeMismatch("ShortHorizon has no T_u function");
    const double t = sh->t_u(u);
    if (!(t > 0.0)) throw RegimeMismatch("ShortHorizon T_u(u) must be positive");
    return t;
  }
  if (const auto* im = std::get_if<IntermediateHorizon>(&scenario)) return im->s0 * u;
  const auto& lg = std::get<LongHorizon>(scenario);
  if (lg.x == kInf)
    throw RegimeMismatch("LongHorizon with x = +inf has no finite realized horizon");
  return t0(params) * u + lg.x * a_u(params, u);
}

double c0_of(const ModelParams& params, double s0) {
  if (!(s0 >= 0.0) || s0 >= t0(params))
    throw S0OutOfRange("s0 must lie in [0, t0), t0 = " + std::to_string(t0(params)));
  const double c0 = params.drift * s0 / (1.0 + params.drift * s0);
  if (c0 >= params.hurst.value())
    throw InternalError("c0 >= H violates the s0 < t0 guarantee");
  return c0;
}

double d_h(const ModelParams& params, double s0, std::optional<double> pickands) {
  const double h = params.hurst.value();
  const double c0 = c0_of(params, s0);
  if (h < 0.5)
    return std::pow(2.0, -0.5 / h) / (h - c0) * require_pickands(pickands, "d_h");
  if (h == 0.5) {
    const double q = 1.0 - c0;
    return 4.0 * q * q / ((1.0 - 2.0 * c0) * (2.0 - 2.0 * c0));
  }
  return 1.0;
}

double m_gamma(const ModelParams& params, double s0, std::optional<double> piterbarg) {
  if (!(params.gamma > 0.0 && params.gamma < 1.0))
    throw GammaOutOfRange("m_gamma requires gamma in (0,1); use m_gamma_one for gamma = 1");
  const double h = params.hurst.value();
  const double c0 = c0_of(params, s0);
  if (h < 0.5) return require_piterbarg(piterbarg, "m_gamma");
  if (h == 0.5) return (2.0 - 2.0 * c0) / (2.0 - 2.0 * c0 - params.gamma);
  return 1.0;
}

double m_gamma_one(const ModelParams& params, double s0, std::optional<double> pickands) {
  const double h = params.hurst.value();
  const double c0 = c0_of(params, s0);
  if (h < 0.5)
    return std::pow(2.0, -0.5 / h) / (h - c0) * require_pickands(pickands, "m_gamma_one");
  if (h == 0.5) return (2.0 - 2.0 * c0) / (1.0 - 2.0 * c0);
  return 1.0;
}

double d_h_gamma(const ModelParams& params, double s0, const GaussConstants& constants) {
  const double h = params.hurst.value();
  const double c0 = c0_of(params, s0);
  if (h < 0.5)
    return std::pow(2.0, -0.5 / h) / (h - c0) *
           require_pickands(constants.pickands, "d_h_gamma") *
           require_piterbarg(constants.piterbarg, "d_h_gamma");
  if (h == 0.5) {
    const double q = 1.0 - c0;
    return 4.0 * q * q / ((1.0 - 2.0 * c0) * (2.0 - 2.0 * c0 - params.gamma));
  }
  return 1.0;
}

namespace {

// ((1-2H)/H)_+ with an exact branch on H vs 1/2.
double positive_part_exponent(double h) { return h < 0.5 ? (1.0 - 2.0 * h) / h : 0.0; }

double finite_boundary_level(const ModelParams& params, double u, double t_u) {
  return (u + params.drift * t_u) / std::pow(t_u, params.hurst.value());
}

}  // namespace

AsymptoticEstimate psi0_finite(const ModelParams& params, double u, double t_u, double s0,
                               std::optional<double> pickands) {
  if (!(u > 0.0) || !(t_u > 0.0)) throw ParamOutOfRange("psi0_finite requires u, T_u > 0");
  const double h = params.hurst.value();
  const double level = finite_boundary_level(params, u, t_u);
  const double d = d_h(params, s0, pickands);
  const double value = d * std::pow(level, positive_part_exponent(h)) * normal_tail(level);

  AsymptoticEstimate est;
  est.value = value;
  est.regime = s0 == 0.0 ? RegimeTag::Short : RegimeTag::Intermediate;
  est.boundary_level = level;
  est.regime_reached = value <= 1.0;
  est.constants_used = {{"D_H", d}, {"c0", c0_of(params, s0)}};
  if (pickands) est.constants_used["pickands"] = *pickands;
  return est;
}

AsymptoticEstimate psi0_infinite(const ModelParams& params, double u, double pickands) {
  if (!(u > 0.0)) throw ParamOutOfRange("psi0_infinite requires u > 0");
  if (!(pickands > 0.0)) throw ParamOutOfRange("psi0_infinite requires a positive Pickands constant");
  const double h = params.hurst.value();
  const double c = params.drift;
  const double m = std::pow(c, h) * std::pow(u, 1.0 - h) /
                   (std::pow(h, h) * std::pow(1.0 - h, 1.0 - h));
  const double prefactor = std::pow(2.0, 0.5 - 0.5 / h) * std::sqrt(M_PI) /
                           std::sqrt(h * (1.0 - h)) * pickands;
  const double value = prefactor * std::pow(m, 1.0 / h - 1.0) * normal_tail(m);

  AsymptoticEstimate est;
  est.value = value;
  est.regime = RegimeTag::Long;
  est.boundary_level = m;
  est.regime_reached = value <= 1.0;
  est.constants_used = {{"pickands", pickands}, {"m_u", m}};
  return est;
}

AsymptoticEstimate psi_gamma(const ModelParams& params, double u,
                             const HorizonScenario& scenario, const GaussConstants& in) {
  const double h = params.hurst.value();
  const double g = params.gamma;

  // H = 1/2 constants are algebraically forced: H_1 = 1 and P_1^b = (1+b)/b.
  GaussConstants constants = in;
  if (h == 0.5) {
    if (!constants.pickands) constants.pickands = 1.0;
    if (!constants.piterbarg && g > 0.0 && g < 1.0) constants.piterbarg = 1.0 / (1.0 - g);
  }

  const RegimeTag tag = regime_tag(scenario);
  if (tag == RegimeTag::Long) {
    if (g == 1.0)
      throw RegimeMismatch("gamma = 1 over the long horizon is out of scope");
    const double x = std::get<LongHorizon>(scenario).x;
    AsymptoticEstimate base = psi0_infinite(
        params, u, require_pickands(constants.pickands, "psi_gamma (long horizon)"));
    double factor = 1.0;
    if (g > 0.0) factor = require_piterbarg(constants.piterbarg, "psi_gamma (long horizon)");
    const double value = factor * base.value * normal_cdf(x);
    AsymptoticEstimate est = base;
    est.value = value;
    est.regime = RegimeTag::Long;
    est.regime_reached = value <= 1.0;
    est.constants_used["piterbarg"] = factor;
    est.constants_used["phi_x"] = normal_cdf(x);
    return est;
  }

  const double s0 =
      tag == RegimeTag::Short ? 0.0 : std::get<IntermediateHorizon>(scenario).s0;
  const double t_u = realized_horizon(params, scenario, u);
  AsymptoticEstimate base = psi0_finite(params, u, t_u, s0, constants.pickands);
  double ratio = 1.0;
  if (g == 1.0)
    ratio = m_gamma_one(params, s0, constants.pickands);
  else if (g > 0.0)
    ratio = m_gamma(params, s0, constants.piterbarg);
  const double value = ratio * base.value;

  // Direct assembly through D_{H,gamma}; pure algebra, must match.
  if (g > 0.0 && g < 1.0) {
    const double direct = d_h_gamma(params, s0, constants) *
                          std::pow(base.boundary_level, positive_part_exponent(h)) *
                          normal_tail(base.boundary_level);
    if (std::abs(direct - value) > 1e-12 * std::max(std::abs(direct), std::abs(value)))
      throw InternalError("psi_gamma: D_{H,gamma} assembly disagrees with M * psi0");
  }

  AsymptoticEstimate est = base;
  est.value = value;
  est.regime = tag;
  est.regime_reached = value <= 1.0;
  est.constants_used["M_H_gamma"] = ratio;
  return est;
}

double LimitLaw::cdf(double y) const {
  if (kind == Kind::UnitExponential) return y <= 0.0 ? 0.0 : 1.0 - std::exp(-y);
  const double x = truncation_x.value();
  if (y >= x) return 1.0;
  return normal_cdf(y) / normal_cdf(x);
}

LimitLaw ruin_time_limit_law(const ModelParams& params, const HorizonScenario& scenario,
                             double u) {
  const double h = params.hurst.value();
  const double c = params.drift;
  LimitLaw law;
  if (const auto* sh = std::get_if<ShortHorizon>(&scenario)) {
    const double t_u = realized_horizon(params, scenario, u);
    (void)sh;
    law.kind = LimitLaw::Kind::UnitExponential;
    law.scaling = h * u * u / std::pow(t_u, 2.0 * h + 1.0);
    return law;
  }
  if (const auto* im = std::get_if<IntermediateHorizon>(&scenario)) {
    const double s0 = im->s0;
    if (!(s0 > 0.0 && s0 < t0(params)))
      throw RegimeMismatch("intermediate horizon requires s0 in (0, t0)");
    law.kind = LimitLaw::Kind::UnitExponential;
    law.scaling = (1.0 + c * s0) * (h - (1.0 - h) * c * s0) /
                  (std::pow(s0, 2.0 * h + 1.0) * std::pow(u, 2.0 * h - 1.0));
    return law;
  }
  const auto& lg = std::get<LongHorizon>(scenario);
  law.kind = LimitLaw::Kind::TruncatedNormal;
  law.scaling = 1.0 / a_u(params, u);
  law.truncation_x = lg.x;
  return law;
}

double loss_limit_scaling(const ModelParams& params, double u, double t_u,
                          const HorizonScenario& scenario) {
  const double h = params.hurst.value();
  const double c = params.drift;
  if (regime_tag(scenario) == RegimeTag::Long)
    return std::pow(c, 2.0 * h) * std::pow(1.0 - h, 2.0 * h - 1.0) /
           (std::pow(h, 2.0 * h) * std::pow(u, 2.0 * h - 1.0));
  if (!(t_u > 0.0)) throw RegimeMismatch("finite-horizon loss scaling requires T_u > 0");
  return (u + c * t_u) / std::pow(t_u, 2.0 * h);
}

namespace {

double axis_factor(const AxisExpansion& axis, double u,
                   const PiterbargConstantSource& constants) {
  if (!(axis.a > 0.0 && axis.b > 0.0 && axis.beta > 0.0))
    throw BadExpansionSpec("axis coefficients A, B and exponent beta must be positive");
  if (!(axis.alpha > 0.0 && axis.alpha <= 2.0))
    throw BadExpansionSpec("axis exponent alpha must lie in (0,2]");
  if (!(axis.location >= 0.0 && axis.location <= 1.0))
    throw BadExpansionSpec("maximizer coordinate must lie in [0,1]");
  const bool interior = axis.location > 0.0 && axis.location < 1.0;

  if (axis.alpha < axis.beta) {
    if (!constants.pickands) throw BadExpansionSpec("Pickands constant source missing");
    const double i_hat = interior ? 2.0 : 1.0;
    return i_hat * constants.pickands(axis.alpha) * std::pow(axis.b, 1.0 / axis.alpha) *
           std::pow(axis.a, -1.0 / axis.beta) * std::tgamma(1.0 / axis.beta + 1.0) *
           std::pow(u, 2.0 / axis.alpha - 2.0 / axis.beta);
  }
  if (axis.alpha == axis.beta) {
    const double ratio = axis.a / axis.b;
    if (interior) {
      if (!constants.tilde_piterbarg)
        throw BadExpansionSpec("two-sided Piterbarg constant source missing");
      return constants.tilde_piterbarg(axis.alpha, ratio);
    }
    if (!constants.piterbarg) throw BadExpansionSpec("Piterbarg constant source missing");
    return constants.piterbarg(axis.alpha, ratio);
  }
  return 1.0;
}

}  // namespace

double piterbarg_field_asymptotic(const FieldExpansion& spec, double u,
                                  const PiterbargConstantSource& constants) {
  return axis_factor(spec.s_axis, u, constants) * axis_factor(spec.t_axis, u, constants) *
         normal_tail(u);
}

FieldExpansion corner_expansion(const ModelParams& params, double c0) {
  const double h = params.hurst.value();
  const double g = params.gamma;
  if (!(g > 0.0 && g < 1.0))
    throw GammaOutOfRange("corner_expansion requires gamma in (0,1)");
  if (!(c0 >= 0.0 && c0 < h)) throw ParamOutOfRange("corner_expansion requires c0 in [0,H)");

  AxisExpansion t_axis{h - c0, 1.0, 0.5, 2.0 * h, 1.0};
  AxisExpansion s_axis{0.0, 1.0, 0.5 * g * g, 2.0 * h, 0.0};
  if (h > 0.5) {
    s_axis.a = g * (h - c0);
  } else if (h == 0.5) {
    s_axis.a = g * (1.0 - 0.5 * g - c0);
  } else {
    s_axis.a = 0.5 * (g - g * g);
    s_axis.beta = 2.0 * h;
  }
  return {s_axis, t_axis};
}

}  // namespace gammaref
