#include "gammaref/field_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace gammaref {

namespace {

double variance_z(const FieldParams& fp, double s, double t) {
  const double two_h = 2.0 * fp.params.hurst.value();
  const double g = fp.params.gamma;
  return std::pow(t, two_h) + g * g * std::pow(s, two_h) -
         g * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(t - s, two_h));
}

double denominator(const FieldParams& fp, double s, double t) {
  return 1.0 + fp.d * (t - fp.params.gamma * s);
}

}  // namespace

double variance_yu(const FieldParams& fp, double s, double t) {
  if (!(s >= 0.0 && s <= t && t <= 1.0))
    throw OutOfTriangle("variance_yu requires 0 <= s <= t <= 1");
  const double den = denominator(fp, s, t);
  return variance_z(fp, s, t) / (den * den);
}

double correlation_yu(const FieldParams& fp, double s, double t, double s2, double t2) {
  const HurstIndex h = fp.params.hurst;
  const double g = fp.params.gamma;
  const double cov = fbm_covariance(h, t, t2) - g * fbm_covariance(h, t, s2) -
                     g * fbm_covariance(h, s, t2) + g * g * fbm_covariance(h, s, s2);
  return cov / std::sqrt(variance_z(fp, s, t) * variance_z(fp, s2, t2));
}

double f_d(const FieldParams& fp, double s) {
  if (!(s > 0.0 && s < 1.0)) throw SOutOfRange("f_d requires s in (0,1)");
  if (!(fp.d > 0.0)) throw ParamOutOfRange("f_d requires d > 0");
  const double h = fp.params.hurst.value();
  const double g = fp.params.gamma;
  const double two_h = 2.0 * h;
  return 1.0 - g - (g - g * g) * std::pow(s, two_h) + g * std::pow(1.0 - s, two_h) -
         (h / fp.d) * (1.0 + fp.d - fp.d * g * s) *
             ((1.0 - g) * std::pow(s, two_h - 1.0) + std::pow(1.0 - s, two_h - 1.0));
}

double variance_s1_derivative(const FieldParams& fp, double s) {
  const double den = 1.0 + fp.d * (1.0 - fp.params.gamma * s);
  return 2.0 * fp.d * fp.params.gamma / (den * den * den) * f_d(fp, s);
}

double derivative_identity_residual(const FieldParams& fp, double s) {
  const double analytic = variance_s1_derivative(fp, s);
  const double scale = std::max(std::abs(analytic), 1e-12);
  auto central = [&](double step) {
    return (variance_yu(fp, s + step, 1.0) - variance_yu(fp, s - step, 1.0)) / (2.0 * step);
  };
  const double h1 = 1e-5;
  double residual = std::abs(central(h1) - analytic) / scale;
  if (residual > 1e-6) {
    // Richardson extrapolation of the central difference.
    const double d1 = central(h1);
    const double d2 = central(h1 / 2.0);
    const double extrapolated = (4.0 * d2 - d1) / 3.0;
    residual = std::abs(extrapolated - analytic) / scale;
  }
  return residual;
}

NegativityReport certify_lemma_negativity(const std::vector<double>& hurst_grid,
                                          const std::vector<double>& gamma_grid,
                                          const std::vector<double>& d_fraction_grid,
                                          std::size_t s_points) {
  if (s_points < 2) throw ParamOutOfRange("certify_lemma_negativity needs s_points >= 2");
  NegativityReport report;
  report.max_f = -std::numeric_limits<double>::infinity();
  report.out_of_scope_max_f = -std::numeric_limits<double>::infinity();

  const double s_lo = 1e-6, s_hi = 1.0 - 1e-6;
  for (double h : hurst_grid) {
    for (double g : gamma_grid) {
      if (!(g >= 0.0 && g < 1.0))
        throw GammaOutOfRange("negativity sweep requires gamma in [0,1)");
      for (double frac : d_fraction_grid) {
        const double d = frac * h / (1.0 - h);
        const bool in_scope = frac < 1.0;
        FieldParams fp{ModelParams(HurstIndex(h), 1.0, g), d};
        for (std::size_t i = 0; i < s_points; ++i) {
          const double s =
              s_lo + (s_hi - s_lo) * static_cast<double>(i) / static_cast<double>(s_points - 1);
          const double value = f_d(fp, s);
          ++report.cells_checked;
          if (in_scope) {
            if (value > report.max_f) {
              report.max_f = value;
              report.at_hurst = h;
              report.at_gamma = g;
              report.at_d = d;
              report.at_s = s;
            }
          } else {
            report.has_out_of_scope = true;
            report.out_of_scope_max_f = std::max(report.out_of_scope_max_f, value);
          }
        }
      }
    }
  }
  report.pass = report.max_f < 0.0;
  return report;
}

VarianceMax locate_variance_max(const FieldParams& fp, std::size_t resolution) {
  if (resolution < 100) throw ParamOutOfRange("locate_variance_max needs resolution >= 100");
  VarianceMax best;
  best.value = -1.0;
  const double step = 1.0 / static_cast<double>(resolution);
  for (std::size_t j = 0; j <= resolution; ++j) {
    const double t = step * static_cast<double>(j);
    for (std::size_t i = 0; i <= j; ++i) {
      const double s = step * static_cast<double>(i);
      const double v = std::sqrt(std::max(0.0, variance_yu(fp, s, t)));
      if (v > best.value) best = {s, t, v};
    }
  }
  return best;
}

double corner_variance_expansion(const FieldParams& fp, double s, double t) {
  const double h = fp.params.hurst.value();
  const double g = fp.params.gamma;
  const double cu = fp.d / (1.0 + fp.d);
  if (h > 0.5) return 1.0 - (h - cu) * (1.0 - t) - g * (h - cu) * s;
  if (h == 0.5) return 1.0 - (0.5 - cu) * (1.0 - t) - g * (1.0 - 0.5 * g - cu) * s;
  return 1.0 - (h - cu) * (1.0 - t) - 0.5 * (g - g * g) * std::pow(s, 2.0 * h);
}

ExpansionResiduals expansion_residuals(const FieldParams& fp, double radius) {
  if (!(radius > 0.0 && radius <= 0.1))
    throw ParamOutOfRange("expansion_residuals requires radius in (0, 0.1]");
  const double h = fp.params.hurst.value();
  const double g = fp.params.gamma;
  const double two_h = 2.0 * h;
  const double v01 = std::sqrt(variance_yu(fp, 0.0, 1.0));

  ExpansionResiduals out;
  double r = radius;
  for (int j = 0; j < 4; ++j, r /= 2.0) {
    out.radii.push_back(r);

    // One point per axis: the two leading corrections of a diagonal point
    // have opposite signs and can cancel at some radius, which breaks the
    // monotone decrease even though the combined ratio tends to 0.
    const double s = 0.7 * r;
    const double t = 1.0 - 0.7 * r;
    const double exact_t = std::sqrt(variance_yu(fp, 0.0, t)) / v01;
    double vr = std::abs(exact_t - corner_variance_expansion(fp, 0.0, t)) / (1.0 - t);
    if (g > 0.0) {
      const double s_scale = h < 0.5 ? std::pow(s, two_h) : s;
      const double exact_s = std::sqrt(variance_yu(fp, s, 1.0)) / v01;
      vr = std::max(vr,
                    std::abs(exact_s - corner_variance_expansion(fp, s, 1.0)) / s_scale);
    }
    out.variance_ratio.push_back(vr);

    // Correlation pairs, axis-aligned for the same reason, two halvings
    // deeper to clear the pre-asymptotic hump near r = 0.1.
    const double rc = r / 4.0;
    const double t_pair = 1.0 - correlation_yu(fp, 0.3 * rc, 1.0 - 0.5 * rc,
                                               0.3 * rc, 1.0 - 0.2 * rc);
    double ratio = std::abs(t_pair / (0.5 * std::pow(0.3 * rc, two_h)) - 1.0);
    if (g > 0.0) {
      const double s_pair = 1.0 - correlation_yu(fp, 0.2 * rc, 1.0 - 0.3 * rc,
                                                 0.5 * rc, 1.0 - 0.3 * rc);
      ratio = std::max(ratio,
                       std::abs(s_pair / (0.5 * g * g * std::pow(0.3 * rc, two_h)) - 1.0));
    }
    out.correlation_ratio.push_back(ratio);
  }

  out.pass = true;
  for (std::size_t j = 1; j < out.radii.size(); ++j) {
    if (out.variance_ratio[j] >= out.variance_ratio[j - 1]) out.pass = false;
    if (out.correlation_ratio[j] >= out.correlation_ratio[j - 1]) out.pass = false;
  }
  return out;
}

void write_landscape_csv(const FieldParams& fp, std::size_t resolution, std::ostream& out) {
  out << "s,t,V2\n" << std::setprecision(17);
  const double step = 1.0 / static_cast<double>(resolution);
  for (std::size_t j = 0; j <= resolution; ++j) {
    const double t = step * static_cast<double>(j);
    for (std::size_t i = 0; i <= j; ++i) {
      const double s = step * static_cast<double>(i);
      out << s << ',' << t << ',' << variance_yu(fp, s, t) << '\n';
    }
  }
}

}  // namespace gammaref
