#pragma once
#include <cmath>
#include <cstdint>

namespace wph {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Counter-based generator: draw i is a hash of (state0 + i*golden), so a
// (seed, stream) pair names a reproducible sequence with no warm-up and the
// same bits on every platform. Streams are independent hash lanes.
class Rng {
public:
  explicit Rng(RngSpec spec)
      : state0_(mix64(spec.seed ^
                      (spec.stream * 0x9E3779B97F4A7C15ull + 0xBF58476D1CE4E5B9ull))) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : Rng(RngSpec{seed, stream}) {}

  std::uint64_t next_u64() { return mix64(state0_ + (++i_) * 0x9E3779B97F4A7C15ull); }

  // 53-bit uniform on [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

  // standard normal, Box-Muller; consumes two uniforms per pair of draws
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    double th = (2.0 * M_PI) * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

private:
  std::uint64_t state0_;
  std::uint64_t i_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wph
