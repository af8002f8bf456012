#ifndef FR_CORE_COMMON_HPP
#define FR_CORE_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fr {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode : int {
  InvalidArgument = 1,
  DimensionMismatch = 2,
  Domain = 3,
  Overflow = 4,
  Empty = 5,
  Config = 6,
  Assertion = 7,
  Internal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Deterministic random source. The distributions are implemented here
/// rather than taken from <random> so that reports are reproducible across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }
  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Radical-inverse (Halton) low-discrepancy sequence. Point i of dimension d
/// uses the d-th prime as base; index 0 is skipped so the origin never
/// appears.
double halton(std::uint64_t index, int dim);

/// Number of worker threads: FRACTAL_REMEZ_THREADS if set and positive,
/// otherwise hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) across worker threads. Each index is
/// processed exactly once; callers write results into per-index slots so
/// the outcome does not depend on the thread count.
template <class Body>
void parallel_for(std::size_t n, Body&& body);

}  // namespace fr

#include "core/parallel_impl.hpp"

#endif
