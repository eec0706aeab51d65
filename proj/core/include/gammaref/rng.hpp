#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gammaref {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-replication random stream keyed by (master_seed, replication_index).
/// Streams are independent of worker count, so parallel and serial runs
/// produce identical statistics. Normal variates use an explicit
/// Box-Muller so the byte stream does not depend on the standard library's
/// std::normal_distribution implementation.
class ReplicationStream {
 public:
  ReplicationStream(std::uint64_t master_seed, std::uint64_t replication)
      : engine_(splitmix64(splitmix64(master_seed) ^
                           splitmix64(replication * 0x9e3779b97f4a7c15ULL + 1))) {}

  double uniform() {
    // 53-bit mantissa uniform in (0,1); never returns exactly 0.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gammaref
