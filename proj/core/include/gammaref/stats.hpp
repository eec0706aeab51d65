#pragma once

#include <functional>
#include <vector>

namespace gammaref {

/// Standard normal upper tail Psi(x) = 1 - Phi(x). erfc-based up to x = 30,
/// Mill's-ratio asymptotic series beyond (erfc underflows near x ~ 38 and
/// tail ratios must stay accurate).
double normal_tail(double x);

/// Standard normal CDF; Phi(+infinity) = 1 by branch.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Two-sided Wilson score interval for a binomial proportion.
struct WilsonInterval {
  double point;
  double low;
  double high;
};
WilsonInterval wilson_interval(std::size_t hits, std::size_t n, double z = 1.959963984540054);

/// One-sample Kolmogorov-Smirnov statistic against an arbitrary CDF.
double ks_statistic_against(const std::vector<double>& sample,
                            const std::function<double(double)>& cdf);

/// Streaming mean/variance with a commutative merge.
struct RunningMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const;
};

}  // namespace gammaref
