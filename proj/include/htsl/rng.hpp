#pragma once

#include <cstdint>

namespace htsl {

// Identifies one reproducible variate stream. Identical (seed, stream_id)
// pairs yield bit-identical sequences; distinct stream_ids are keyed into
// statistically independent counter sequences.
struct SeedStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

} // namespace detail

// Counter-based uniform generator (splitmix64 over a Weyl sequence),
// keyed by (seed, stream_id). Stateless apart from the counter, so
// distinct streams can run concurrently without coordination.
class CounterRng {
public:
  explicit CounterRng(SeedStream s)
      : key_(detail::mix64(detail::mix64(s.seed + 0x9e3779b97f4a7c15ULL) ^
                           detail::mix64(s.stream_id + 0xd1b54a32d192ed03ULL))) {}

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(key_ + counter_);
  }

  // Uniform on the open interval (0, 1); never returns 0 or 1, so the
  // result is safe under log().
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

} // namespace htsl
