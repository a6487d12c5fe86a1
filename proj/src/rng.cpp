#include "mmroute/rng.hpp"

#include <limits>

#include "mmroute/error.hpp"

namespace mmroute {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t tag : tags) h = mix64(h ^ mix64(tag + 0x632be59bd9b4e019ULL));
  return h;
}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  if (lo == hi) {
    engine_();  // one draw per sample regardless of bounds
    return lo;
  }
  return lo + (hi - lo) * uniform01();
}

std::size_t RandomStream::index(std::size_t n) {
  require(n > 0, ErrorCode::contract_violation, "RandomStream::index: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % range);
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  require(lo <= hi, ErrorCode::contract_violation, "RandomStream::uniform_int: lo > hi");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit range
  return lo + static_cast<std::int64_t>(index(static_cast<std::size_t>(span)));
}

}  // namespace mmroute
