#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace gammaref {

/// Monte Carlo estimate of a Pickands or Piterbarg constant from its
/// defining limit expression, with the truncation horizon S and grid step
/// reported alongside: these limits converge slowly and the bias must stay
/// visible. Grid suprema bias the estimate low; finite S biases the
/// 1/S-normalized Pickands functional.
struct ConstantEstimate {
  enum class Kind { Pickands, Piterbarg, TildePiterbarg };
  Kind kind = Kind::Pickands;
  double alpha = 1.0;
  std::optional<double> b;  // present iff kind != Pickands
  double truncation_s = 1.0;
  double grid_step = 0.01;
  std::size_t replications = 0;
  double value = 0.0;
  double std_error = 0.0;
};

std::string kind_name(ConstantEstimate::Kind kind);

/// (1/S) E exp(sup_{[0,S]} (sqrt(2) B_alpha(t) - t^alpha)) by crude MC over
/// exact-covariance fBm paths with Hurst index alpha/2. alpha = 2 uses the
/// degenerate path B_2(t) = t N directly.
ConstantEstimate pickands_estimate(double alpha, double s, double grid_step,
                                   std::size_t replications, std::uint64_t seed,
                                   unsigned threads = 1);

/// E exp(sup_{[0,S]} (sqrt(2) B_alpha(t) - (1+b) t^alpha)), b > 0.
ConstantEstimate piterbarg_estimate(double alpha, double b, double s, double grid_step,
                                    std::size_t replications, std::uint64_t seed,
                                    unsigned threads = 1);

/// Two-sided variant over [-S, S] with drift (1+b)|t|^alpha. The two-sided
/// fBm is sampled by dense factorization of the full two-sided covariance;
/// it is not two independent halves.
ConstantEstimate tilde_piterbarg_estimate(double alpha, double b, double s,
                                          double grid_step, std::size_t replications,
                                          std::uint64_t seed, unsigned threads = 1);

/// Closed forms at alpha = 1 (Brownian input), forced algebraically by the
/// H = 1/2 reductions: H_1 = 1, P_1^b = (1+b)/b, and the two-sided
/// P~_1^b = 2(1+b)/b - 2(1+b)/(1+2b).
double brownian_pickands();
double brownian_piterbarg(double b);
double brownian_tilde_piterbarg(double b);

}  // namespace gammaref
