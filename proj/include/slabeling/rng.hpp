#pragma once

#include <cmath>
#include <cstdint>

namespace slabeling {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based generator: output depends only on (seed, stream, counter),
/// so draws are reproducible under any parallel schedule.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : state_(detail::splitmix64(detail::splitmix64(seed) ^
                                  detail::splitmix64(stream * 0x9e3779b97f4a7c15ull + 1))) {}

  std::uint64_t next_u64() { return detail::splitmix64(state_ + (++counter_)); }

  /// Uniform on [0, 1).
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double next_double_open() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal (Box-Muller); consumes two draws per pair.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = next_double_open();
    const double v = next_double();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * M_PI * v);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * v);
  }

 private:
  std::uint64_t state_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace slabeling
