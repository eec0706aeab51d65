#include "gammaref/gauss_constants.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "gammaref/errors.hpp"
#include "gammaref/fbm.hpp"
#include "gammaref/rng.hpp"
#include "gammaref/stats.hpp"

namespace gammaref {

std::string kind_name(ConstantEstimate::Kind kind) {
  switch (kind) {
    case ConstantEstimate::Kind::Pickands: return "pickands";
    case ConstantEstimate::Kind::Piterbarg: return "piterbarg";
    default: return "tilde_piterbarg";
  }
}

namespace {

void validate_common(double alpha, double s, double grid_step, std::size_t replications) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParamOutOfRange("alpha must lie in (0,2]");
  if (!(s >= 1.0)) throw ParamOutOfRange("truncation horizon S must be >= 1");
  if (!(grid_step > 0.0 && grid_step <= 0.05))
    throw ParamOutOfRange("grid_step must lie in (0, 0.05]");
  if (replications == 0) throw ParamOutOfRange("replications must be positive");
}

// Per-replication values are materialized and reduced serially so the
// result is bit-identical for any worker count.
template <typename PerRep>
ConstantEstimate reduce_replications(ConstantEstimate est, std::size_t replications,
                                     unsigned threads, PerRep&& per_rep) {
  std::vector<double> values(replications);
  const unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    for (std::size_t r = 0; r < replications; ++r) values[r] = per_rep(r);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (replications + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = static_cast<std::size_t>(w) * chunk;
      const std::size_t end = std::min(replications, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&values, begin, end, &per_rep] {
        for (std::size_t r = begin; r < end; ++r) values[r] = per_rep(r);
      });
    }
    for (auto& t : pool) t.join();
  }
  RunningMoments moments;
  for (double v : values) moments.add(v);
  est.replications = replications;
  est.value = moments.mean;
  est.std_error = moments.std_error();
  return est;
}

// alpha = 2 degenerates to B_2(t) = t Z with a single driving scalar. The
// integrand exp(sup) * phi(z) is nearly flat in z out to z ~ sqrt(2) coeff S,
// so crude sampling of Z misses most of the mass. Replications draw Z from
// the mixture q = phi/2 + Uniform(flat region)/2 and carry the weight
// phi(z)/q(z), which bounds the per-replication contribution.
double alpha2_replication(ReplicationStream& rng, const std::vector<double>& times,
                          double coeff, double flat_lo, double flat_hi) {
  const double width = flat_hi - flat_lo;
  double z;
  if (rng.uniform() < 0.5) {
    z = rng.normal();
  } else {
    z = flat_lo + width * rng.uniform();
  }
  // Weight in log space: exp(sup) and phi(z) can overflow/underflow long
  // before their product does.
  const double log_phi = -0.5 * z * z - 0.9189385332046727;
  const double log_flat = (z > flat_lo && z < flat_hi)
                              ? -std::log(width)
                              : -std::numeric_limits<double>::infinity();
  const double m = std::max(log_phi, log_flat);
  const double log_q =
      m + std::log(0.5 * std::exp(log_phi - m) + 0.5 * std::exp(log_flat - m));
  double sup = 0.0;
  for (double t : times)
    sup = std::max(sup, std::sqrt(2.0) * z * t - coeff * std::abs(t) * std::abs(t));
  return std::exp(sup + log_phi - log_q);
}

ConstantEstimate one_sided_estimate(ConstantEstimate::Kind kind, double alpha, double coeff,
                                    double s, double grid_step, std::size_t replications,
                                    std::uint64_t seed, unsigned threads) {
  validate_common(alpha, s, grid_step, replications);
  const auto n = static_cast<std::size_t>(std::llround(s / grid_step));
  std::vector<double> times(n + 1);
  for (std::size_t k = 0; k <= n; ++k) times[k] = grid_step * static_cast<double>(k);

  ConstantEstimate est;
  est.kind = kind;
  est.alpha = alpha;
  est.truncation_s = s;
  est.grid_step = grid_step;
  const double norm = kind == ConstantEstimate::Kind::Pickands ? 1.0 / s : 1.0;

  if (alpha == 2.0) {
    // Past z = sqrt(2) coeff S the integrand is a Gaussian lump centered at
    // the boundary; the +8 keeps it inside the flat component.
    const double flat_hi = std::sqrt(2.0) * coeff * s + 8.0;
    return reduce_replications(est, replications, threads, [&](std::size_t r) {
      ReplicationStream rng(seed, r);
      return norm * alpha2_replication(rng, times, coeff, 0.0, flat_hi);
    });
  }

  const HurstIndex hurst(alpha / 2.0);
  const SpectralFgnSampler sampler(hurst, n);
  return reduce_replications(est, replications, threads, [&](std::size_t r) {
    const auto increments = sampler.sample(grid_step, seed, r);
    double x = 0.0;
    double sup = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      x += increments[k - 1];
      const double v = std::sqrt(2.0) * x - coeff * std::pow(times[k], alpha);
      if (v > sup) sup = v;
    }
    return norm * std::exp(sup);
  });
}

}  // namespace

ConstantEstimate pickands_estimate(double alpha, double s, double grid_step,
                                   std::size_t replications, std::uint64_t seed,
                                   unsigned threads) {
  return one_sided_estimate(ConstantEstimate::Kind::Pickands, alpha, 1.0, s, grid_step,
                            replications, seed, threads);
}

ConstantEstimate piterbarg_estimate(double alpha, double b, double s, double grid_step,
                                    std::size_t replications, std::uint64_t seed,
                                    unsigned threads) {
  if (!(b > 0.0)) throw ParamOutOfRange("Piterbarg constant requires b > 0");
  auto est = one_sided_estimate(ConstantEstimate::Kind::Piterbarg, alpha, 1.0 + b, s,
                                grid_step, replications, seed, threads);
  est.b = b;
  return est;
}

ConstantEstimate tilde_piterbarg_estimate(double alpha, double b, double s, double grid_step,
                                          std::size_t replications, std::uint64_t seed,
                                          unsigned threads) {
  if (!(b > 0.0)) throw ParamOutOfRange("tilde-Piterbarg constant requires b > 0");
  validate_common(alpha, s, grid_step, replications);

  const auto half = static_cast<std::size_t>(std::llround(s / grid_step));
  std::vector<double> times(2 * half + 1);
  for (std::size_t k = 0; k < times.size(); ++k)
    times[k] = grid_step * (static_cast<double>(k) - static_cast<double>(half));

  ConstantEstimate est;
  est.kind = ConstantEstimate::Kind::TildePiterbarg;
  est.alpha = alpha;
  est.b = b;
  est.truncation_s = s;
  est.grid_step = grid_step;
  const double coeff = 1.0 + b;

  if (alpha == 2.0) {
    const double flat_hi = std::sqrt(2.0) * coeff * s + 8.0;
    return reduce_replications(est, replications, threads, [&](std::size_t r) {
      ReplicationStream rng(seed, r);
      return alpha2_replication(rng, times, coeff, -flat_hi, flat_hi);
    });
  }

  // Dense factorization of the exact two-sided covariance; t = 0 is pinned
  // to zero and excluded from the factorized block.
  const std::size_t n_nonzero = times.size() - 1;
  if (n_nonzero > 2048)
    throw GridTooLarge("two-sided grid exceeds the dense-factorization guard (2048 points)");
  const HurstIndex hurst(alpha / 2.0);
  Eigen::MatrixXd cov(n_nonzero, n_nonzero);
  std::vector<double> nonzero_times;
  nonzero_times.reserve(n_nonzero);
  for (double t : times)
    if (t != 0.0) nonzero_times.push_back(t);
  for (std::size_t i = 0; i < n_nonzero; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = fbm_covariance(hurst, nonzero_times[i], nonzero_times[j]);
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw InternalError("two-sided fBm covariance factorization failed");
  const Eigen::MatrixXd factor = llt.matrixL();

  return reduce_replications(est, replications, threads, [&](std::size_t r) {
    ReplicationStream rng(seed, r);
    Eigen::VectorXd z(static_cast<Eigen::Index>(n_nonzero));
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    const Eigen::VectorXd x = factor.triangularView<Eigen::Lower>() * z;
    double sup = 0.0;
    for (std::size_t k = 0; k < n_nonzero; ++k) {
      const double t = nonzero_times[k];
      const double v = std::sqrt(2.0) * x(static_cast<Eigen::Index>(k)) -
                       coeff * std::pow(std::abs(t), alpha);
      if (v > sup) sup = v;
    }
    return std::exp(sup);
  });
}

double brownian_pickands() { return 1.0; }

double brownian_piterbarg(double b) {
  if (!(b > 0.0)) throw ParamOutOfRange("brownian_piterbarg requires b > 0");
  return (1.0 + b) / b;
}

double brownian_tilde_piterbarg(double b) {
  if (!(b > 0.0)) throw ParamOutOfRange("brownian_tilde_piterbarg requires b > 0");
  return 2.0 * (1.0 + b) / b - 2.0 * (1.0 + b) / (1.0 + 2.0 * b);
}

}  // namespace gammaref
