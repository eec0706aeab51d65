#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "gammaref/reflection.hpp"

namespace gammaref {

// ---------------------------------------------------------------------------
// Horizon scenarios. T_u is classified by how it grows with the surplus u:
//   Short:        T_u / u -> 0                  (carries the T_u function)
//   Intermediate: T_u / u -> s0 in (0, t0)
//   Long:         (T_u - t0 u) / A(u) -> x in (-inf, +inf]
// ---------------------------------------------------------------------------

struct ShortHorizon {
  std::function<double(double)> t_u;  // realized horizon at a given u
};
struct IntermediateHorizon {
  double s0;
};
struct LongHorizon {
  double x;  // +infinity sentinel allowed
};
using HorizonScenario = std::variant<ShortHorizon, IntermediateHorizon, LongHorizon>;

enum class RegimeTag { Short, Intermediate, Long };
RegimeTag regime_tag(const HorizonScenario& scenario);
std::string regime_name(RegimeTag tag);

/// Asymptotic mean slope of the conditional ruin time: t0 = H / (c (1-H)).
double t0(const ModelParams& params);

/// Asymptotic standard deviation of the conditional ruin time:
/// A(u) = H^{H+1/2} u^H / ((1-H)^{H+1/2} c^{H+1}).
double a_u(const ModelParams& params, double u);

/// Realized horizon T_u for the scenario at surplus u. Long with x = +inf
/// has no finite horizon and throws RegimeMismatch.
double realized_horizon(const ModelParams& params, const HorizonScenario& scenario, double u);

/// c0 = c s0 / (1 + c s0); requires 0 <= s0 < t0 so that c0 < H.
double c0_of(const ModelParams& params, double s0);

/// Pickands/Piterbarg constants needed by the H < 1/2 branches. Injected,
/// never defaulted: the H = 1/2 branches are fully algebraic and H > 1/2
/// needs no constant.
struct GaussConstants {
  std::optional<double> pickands;   // H_{2H}
  std::optional<double> piterbarg;  // P_{2H}^{(1-gamma)/gamma}
};

/// Prefactor D_H of the finite-horizon 0-reflected asymptotic:
///   H < 1/2: 2^{-1/(2H)} (H - c0)^{-1} H_{2H}
///   H = 1/2: 4 (1-c0)^2 / ((1-2c0)(2-2c0))
///   H > 1/2: 1
double d_h(const ModelParams& params, double s0, std::optional<double> pickands = {});

/// Short/Intermediate ratio constant M_{H,gamma} for gamma in (0,1):
///   H < 1/2: P_{2H}^{(1-gamma)/gamma};  H = 1/2: (2-2c0)/(2-2c0-gamma);  H > 1/2: 1.
double m_gamma(const ModelParams& params, double s0, std::optional<double> piterbarg = {});

/// Fully reflected variant M_{H,1}:
///   H < 1/2: 2^{-1/(2H)} (H-c0)^{-1} H_{2H};  H = 1/2: (2-2c0)/(1-2c0);  H > 1/2: 1.
double m_gamma_one(const ModelParams& params, double s0, std::optional<double> pickands = {});

/// Combined prefactor D_{H,gamma} of the direct finite-horizon assembly;
/// equals d_h * m_gamma in every H-case.
double d_h_gamma(const ModelParams& params, double s0, const GaussConstants& constants);

struct AsymptoticEstimate {
  double value = 0.0;
  RegimeTag regime = RegimeTag::Short;
  std::map<std::string, double> constants_used;
  double boundary_level = 0.0;  // the argument fed to Psi
  // False when the evaluated value exceeds 1, i.e. u is below the regime
  // threshold; the value is reported unclamped.
  bool regime_reached = true;
};

/// Finite-horizon ruin probability of the 0-reflected process:
///   D_H * ((u + c T_u)/T_u^H)^{((1-2H)/H)_+} * Psi((u + c T_u)/T_u^H)
/// with s0 = lim T_u/u in [0, t0). The positive-part exponent branches
/// exactly on H vs 1/2.
AsymptoticEstimate psi0_finite(const ModelParams& params, double u, double t_u, double s0,
                               std::optional<double> pickands = {});

/// Infinite-horizon ruin probability of the 0-reflected process:
///   2^{1/2 - 1/(2H)} sqrt(pi) / sqrt(H(1-H)) * H_{2H} * m(u)^{1/H-1} * Psi(m(u)),
///   m(u) = c^H u^{1-H} / (H^H (1-H)^{1-H}).
AsymptoticEstimate psi0_infinite(const ModelParams& params, double u, double pickands);

/// Regime dispatcher for the gamma-reflected ruin probability.
///   Short/Intermediate: M_{H,gamma} * psi0_finite  (also assembled directly
///   through D_{H,gamma}; the two routes must agree to 1e-12 relative).
///   Long: P_{2H}^{(1-gamma)/gamma} * psi0_infinite * Phi(x).
/// gamma = 0 reduces to the psi0 formulas; gamma = 1 is supported for
/// Short/Intermediate through M_{H,1}.
AsymptoticEstimate psi_gamma(const ModelParams& params, double u,
                             const HorizonScenario& scenario,
                             const GaussConstants& constants = {});

// ---------------------------------------------------------------------------
// Conditional limit laws.
// ---------------------------------------------------------------------------

struct LimitLaw {
  enum class Kind { UnitExponential, TruncatedNormal };
  Kind kind = Kind::UnitExponential;
  // Multiplicative factor applied to the raw statistic:
  //   Short/Intermediate: raw = T_u - tau, scaled -> Exp(1)
  //   Long: raw = tau - t0 u, scaled = raw / A(u) -> N | (N < x)
  double scaling = 1.0;
  std::optional<double> truncation_x;  // TruncatedNormal only

  double cdf(double y) const;
};

/// Limit law of the scaled conditional ruin time:
///   Short:        H u^2 (T_u - tau) / T_u^{2H+1}                    -> Exp(1)
///   Intermediate: (1+c s0)(H - (1-H) c s0)(T_u - tau)
///                   / (s0^{2H+1} u^{2H-1})                          -> Exp(1)
///   Long:         (tau - t0 u) / A(u) | (tau <= T_u)                -> N | (N < x)
LimitLaw ruin_time_limit_law(const ModelParams& params, const HorizonScenario& scenario,
                             double u);

/// Factor rendering the conditional maximum loss asymptotically Exp(1):
///   Short/Intermediate: (u + c T_u) / T_u^{2H}
///   Long:               c^{2H} (1-H)^{2H-1} / (H^{2H} u^{2H-1})
double loss_limit_scaling(const ModelParams& params, double u, double t_u,
                          const HorizonScenario& scenario);

// ---------------------------------------------------------------------------
// Generalized Piterbarg field asymptotic for a family of Gaussian fields on
// the triangle with a unique variance maximizer, with per-axis variance
// exponents beta_i and correlation exponents alpha_i:
//   P(sup eta_u > u) ~ F1(u) F2(u) Psi(u),
//   F_i = I_i H_{alpha_i} B_i^{1/alpha_i} A_i^{-1/beta_i} Gamma(1/beta_i + 1)
//             u^{2/alpha_i - 2/beta_i}          if alpha_i < beta_i,
//       = P^{A_i/B_i}_{alpha_i} (tilde variant iff the maximizer coordinate
//             is interior)                      if alpha_i = beta_i,
//       = 1                                     if alpha_i > beta_i,
// with I_i = 2 iff the coordinate is interior.
// ---------------------------------------------------------------------------

struct AxisExpansion {
  double a;         // variance coefficient A_i > 0
  double beta;      // variance exponent beta_i > 0
  double b;         // correlation coefficient B_i > 0
  double alpha;     // correlation exponent alpha_i in (0,2]
  double location;  // maximizer coordinate in [0,1]
};

struct FieldExpansion {
  AxisExpansion s_axis;
  AxisExpansion t_axis;
};

/// Suppliers for the constants the field asymptotic may need. Each throws
/// ParamOutOfRange by default so missing constants surface loudly.
struct PiterbargConstantSource {
  std::function<double(double alpha)> pickands;
  std::function<double(double alpha, double b)> piterbarg;
  std::function<double(double alpha, double b)> tilde_piterbarg;
};

double piterbarg_field_asymptotic(const FieldExpansion& spec, double u,
                                  const PiterbargConstantSource& constants);

/// Corner expansion of the normalized field Z(s,t)/(1 + d(t - gamma s)),
/// Z = X_H(t) - gamma X_H(s), around its variance maximizer (0,1), expressed
/// in the AxisExpansion form above. Derived from the local variance and
/// correlation expansions with c0 = lim c T_u / (u + c T_u):
///   variance, t-axis: coefficient H - c0, exponent 1 (all H)
///   variance, s-axis: H > 1/2: gamma (H - c0), exponent 1
///                     H = 1/2: gamma (1 - gamma/2 - c0), exponent 1
///                     H < 1/2: (gamma - gamma^2)/2, exponent 2H
///   correlation: (1/2, 2H) on the t-axis and (gamma^2/2, 2H) on the s-axis.
FieldExpansion corner_expansion(const ModelParams& params, double c0);

}  // namespace gammaref
