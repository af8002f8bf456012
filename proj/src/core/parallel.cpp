#include "core/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace fr {

namespace {
constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                           31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
}

double halton(std::uint64_t index, int dim) {
  if (dim < 0 || dim >= static_cast<int>(std::size(kPrimes)))
    fail(ErrorCode::InvalidArgument, "halton: dimension out of range");
  const std::uint64_t base = static_cast<std::uint64_t>(kPrimes[dim]);
  std::uint64_t i = index + 1;
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

unsigned thread_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRACTAL_REMEZ_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return std::min(hw, static_cast<unsigned>(v));
  }
  return hw;
}

}  // namespace fr
