#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <vector>

#include "gammaref/errors.hpp"

namespace gammaref {

/// Hurst index, restricted to the open interval (0,1).
class HurstIndex {
 public:
  explicit HurstIndex(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0))
      throw ParamOutOfRange("HurstIndex must lie in the open interval (0,1), got " +
                            std::to_string(value));
  }
  double value() const { return value_; }

 private:
  double value_;
};

/// Uniform grid t_k = k * horizon / n_steps, k = 0..n_steps.
struct GridSpec {
  std::size_t n_steps;
  double horizon;

  GridSpec(std::size_t n, double h) : n_steps(n), horizon(h) {
    if (n_steps < 2) throw ParamOutOfRange("GridSpec requires n_steps >= 2");
    if (!(horizon > 0.0)) throw ParamOutOfRange("GridSpec requires horizon > 0");
  }

  double step() const { return horizon / static_cast<double>(n_steps); }
  double time_at(std::size_t k) const { return step() * static_cast<double>(k); }
};

/// A sampled fBm trajectory: values[k] = X_H(t_k), values[0] == 0.
struct FbmPath {
  GridSpec grid;
  HurstIndex hurst;
  std::vector<double> values;  // length n_steps + 1
};

/// fBm covariance Cov(X_H(t), X_H(s)) = (|t|^2H + |s|^2H - |t-s|^2H) / 2.
double fbm_covariance(HurstIndex hurst, double t, double s);

/// Stationary covariance of unit-variance-per-step fGn at the given lag:
///   step^{2H} * ((lag+1)^{2H} + |lag-1|^{2H} - 2 lag^{2H}) / 2.
double fgn_covariance(HurstIndex hurst, std::size_t lag, double step);

/// Exact fGn sampler via circulant embedding of the covariance into a
/// circulant matrix of size 2 n_steps. Eigenvalues are nonnegative for
/// all H in (0,1); values in [-1e-10, 0) are clamped to zero and anything
/// below raises NegativeEigenvalue.
///
/// Internally samples unit-step increments; sample() rescales by step^H
/// (exact by self-similarity).
class SpectralFgnSampler {
 public:
  SpectralFgnSampler(HurstIndex hurst, std::size_t n_steps);
  ~SpectralFgnSampler();
  SpectralFgnSampler(SpectralFgnSampler&&) noexcept;
  SpectralFgnSampler& operator=(SpectralFgnSampler&&) noexcept;

  std::vector<double> sample(double step, std::uint64_t master_seed,
                             std::uint64_t replication = 0) const;

  std::size_t n_steps() const;
  HurstIndex hurst() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Dense-factorization fBm sampler; exact joint law, O(n^3) setup.
/// Small grids only (n_steps <= 2048); used as an independent oracle
/// against the spectral sampler.
class CholeskyFbmSampler {
 public:
  CholeskyFbmSampler(HurstIndex hurst, GridSpec grid);
  ~CholeskyFbmSampler();
  CholeskyFbmSampler(CholeskyFbmSampler&&) noexcept;
  CholeskyFbmSampler& operator=(CholeskyFbmSampler&&) noexcept;

  FbmPath sample(std::uint64_t master_seed, std::uint64_t replication = 0) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot conveniences around the sampler classes.
std::vector<double> sample_fgn_spectral(HurstIndex hurst, std::size_t n_steps,
                                        double step, std::uint64_t seed);
FbmPath sample_fbm_cholesky(HurstIndex hurst, GridSpec grid, std::uint64_t seed);
FbmPath sample_fbm_spectral(HurstIndex hurst, GridSpec grid, std::uint64_t seed);

/// Cumulative sum of increments prefixed with 0.
FbmPath fbm_path_from_fgn(const std::vector<double>& increments, GridSpec grid,
                          HurstIndex hurst);

/// CSV dump, header "t,value", 17 significant digits.
void write_path_csv(const FbmPath& path, std::ostream& out);

}  // namespace gammaref
