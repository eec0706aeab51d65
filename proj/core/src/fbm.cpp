#include "gammaref/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <iomanip>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "gammaref/rng.hpp"

namespace gammaref {

double fbm_covariance(HurstIndex hurst, double t, double s) {
  const double two_h = 2.0 * hurst.value();
  return 0.5 * (std::pow(std::abs(t), two_h) + std::pow(std::abs(s), two_h) -
                std::pow(std::abs(t - s), two_h));
}

double fgn_covariance(HurstIndex hurst, std::size_t lag, double step) {
  const double two_h = 2.0 * hurst.value();
  const double k = static_cast<double>(lag);
  const double r = 0.5 * (std::pow(k + 1.0, two_h) + std::pow(std::abs(k - 1.0), two_h) -
                          2.0 * std::pow(k, two_h));
  return std::pow(step, two_h) * r;
}

namespace {

// FFTW planning is not thread-safe; plan creation is serialized and plans
// are cached per transform size. FFTW_UNALIGNED makes new-array execution
// valid for arbitrary caller buffers.
class FftwPlanCache {
 public:
  static FftwPlanCache& instance() {
    static FftwPlanCache cache;
    return cache;
  }

  void forward(std::vector<std::complex<double>>& data) {
    fftw_plan plan = nullptr;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = plans_.find(data.size());
      if (it == plans_.end()) {
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(data.size(), plan);
      } else {
        plan = it->second;
      }
    }
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
  }

 private:
  FftwPlanCache() = default;
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

// Circulant-embedding eigenvalues for unit-step fGn, cached per (H, n).
std::vector<double> embedding_eigenvalues(HurstIndex hurst, std::size_t n) {
  const std::size_t m = 2 * n;
  std::vector<std::complex<double>> c(m);
  for (std::size_t j = 0; j <= n; ++j) c[j] = fgn_covariance(hurst, j, 1.0);
  for (std::size_t j = n + 1; j < m; ++j) c[j] = c[m - j];
  FftwPlanCache::instance().forward(c);

  std::vector<double> lambda(m);
  for (std::size_t j = 0; j < m; ++j) {
    double ev = c[j].real();
    if (ev < 0.0) {
      if (ev < -1e-10)
        throw NegativeEigenvalue("circulant embedding eigenvalue " + std::to_string(ev) +
                                 " below tolerance at index " + std::to_string(j));
      ev = 0.0;
    }
    lambda[j] = ev;
  }
  return lambda;
}

struct EigCacheKey {
  double h;
  std::size_t n;
  bool operator<(const EigCacheKey& o) const {
    return h < o.h || (h == o.h && n < o.n);
  }
};

const std::vector<double>& cached_eigenvalues(HurstIndex hurst, std::size_t n) {
  static std::shared_mutex mutex;
  static std::map<EigCacheKey, std::vector<double>> cache;
  const EigCacheKey key{hurst.value(), n};
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto lambda = embedding_eigenvalues(hurst, n);
  std::unique_lock lock(mutex);
  return cache.emplace(key, std::move(lambda)).first->second;
}

}  // namespace

struct SpectralFgnSampler::Impl {
  HurstIndex hurst;
  std::size_t n_steps;
  const std::vector<double>* lambda;  // owned by the (H,n) cache
};

SpectralFgnSampler::SpectralFgnSampler(HurstIndex hurst, std::size_t n_steps)
    : impl_(new Impl{hurst, n_steps, nullptr}) {
  if (n_steps < 2) throw ParamOutOfRange("SpectralFgnSampler requires n_steps >= 2");
  impl_->lambda = &cached_eigenvalues(hurst, n_steps);
}

SpectralFgnSampler::~SpectralFgnSampler() = default;
SpectralFgnSampler::SpectralFgnSampler(SpectralFgnSampler&&) noexcept = default;
SpectralFgnSampler& SpectralFgnSampler::operator=(SpectralFgnSampler&&) noexcept = default;

std::size_t SpectralFgnSampler::n_steps() const { return impl_->n_steps; }
HurstIndex SpectralFgnSampler::hurst() const { return impl_->hurst; }

std::vector<double> SpectralFgnSampler::sample(double step, std::uint64_t master_seed,
                                               std::uint64_t replication) const {
  if (!(step > 0.0)) throw ParamOutOfRange("step must be positive");
  const std::size_t n = impl_->n_steps;
  const std::size_t m = 2 * n;
  const std::vector<double>& lambda = *impl_->lambda;

  ReplicationStream rng(master_seed, replication);
  std::vector<std::complex<double>> w(m);
  const double inv_m = 1.0 / static_cast<double>(m);
  w[0] = std::sqrt(lambda[0] * inv_m) * rng.normal();
  w[n] = std::sqrt(lambda[n] * inv_m) * rng.normal();
  for (std::size_t k = 1; k < n; ++k) {
    const double a = std::sqrt(0.5 * lambda[k] * inv_m);
    const double re = a * rng.normal();
    const double im = a * rng.normal();
    w[k] = {re, im};
    w[m - k] = {re, -im};
  }
  FftwPlanCache::instance().forward(w);

  const double scale = std::pow(step, impl_->hurst.value());
  std::vector<double> increments(n);
  for (std::size_t j = 0; j < n; ++j) increments[j] = scale * w[j].real();
  return increments;
}

struct CholeskyFbmSampler::Impl {
  HurstIndex hurst;
  GridSpec grid;
  Eigen::MatrixXd factor;  // lower-triangular L with L L^T = covariance
};

CholeskyFbmSampler::CholeskyFbmSampler(HurstIndex hurst, GridSpec grid)
    : impl_(new Impl{hurst, grid, {}}) {
  if (grid.n_steps > 2048)
    throw GridTooLarge("CholeskyFbmSampler limited to n_steps <= 2048, got " +
                       std::to_string(grid.n_steps));
  const auto n = static_cast<Eigen::Index>(grid.n_steps);
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = fbm_covariance(hurst, grid.time_at(static_cast<std::size_t>(i + 1)),
                                      grid.time_at(static_cast<std::size_t>(j + 1)));
      cov(i, j) = v;
      cov(j, i) = v;
    }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw InternalError("fBm covariance Cholesky factorization failed");
  impl_->factor = llt.matrixL();
}

CholeskyFbmSampler::~CholeskyFbmSampler() = default;
CholeskyFbmSampler::CholeskyFbmSampler(CholeskyFbmSampler&&) noexcept = default;
CholeskyFbmSampler& CholeskyFbmSampler::operator=(CholeskyFbmSampler&&) noexcept = default;

FbmPath CholeskyFbmSampler::sample(std::uint64_t master_seed,
                                   std::uint64_t replication) const {
  const auto n = static_cast<Eigen::Index>(impl_->grid.n_steps);
  ReplicationStream rng(master_seed, replication);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
  Eigen::VectorXd x = impl_->factor.triangularView<Eigen::Lower>() * z;

  FbmPath path{impl_->grid, impl_->hurst, std::vector<double>(impl_->grid.n_steps + 1)};
  path.values[0] = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) path.values[static_cast<std::size_t>(i) + 1] = x(i);
  return path;
}

std::vector<double> sample_fgn_spectral(HurstIndex hurst, std::size_t n_steps, double step,
                                        std::uint64_t seed) {
  return SpectralFgnSampler(hurst, n_steps).sample(step, seed);
}

FbmPath sample_fbm_cholesky(HurstIndex hurst, GridSpec grid, std::uint64_t seed) {
  return CholeskyFbmSampler(hurst, grid).sample(seed);
}

FbmPath sample_fbm_spectral(HurstIndex hurst, GridSpec grid, std::uint64_t seed) {
  return fbm_path_from_fgn(
      SpectralFgnSampler(hurst, grid.n_steps).sample(grid.step(), seed), grid, hurst);
}

FbmPath fbm_path_from_fgn(const std::vector<double>& increments, GridSpec grid,
                          HurstIndex hurst) {
  if (increments.size() != grid.n_steps)
    throw LengthMismatch("expected " + std::to_string(grid.n_steps) + " increments, got " +
                         std::to_string(increments.size()));
  FbmPath path{grid, hurst, std::vector<double>(grid.n_steps + 1)};
  path.values[0] = 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < increments.size(); ++k) {
    acc += increments[k];
    path.values[k + 1] = acc;
  }
  return path;
}

void write_path_csv(const FbmPath& path, std::ostream& out) {
  out << "t,value\n" << std::setprecision(17);
  for (std::size_t k = 0; k < path.values.size(); ++k)
    out << path.grid.time_at(k) << ',' << path.values[k] << '\n';
}

}  // namespace gammaref
