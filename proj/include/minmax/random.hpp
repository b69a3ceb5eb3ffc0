#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, stream, counter), so any partition of the work across threads
// reproduces the same numbers.

#include <array>
#include <cstdint>

namespace mmh {

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Standard symmetric alpha-stable variate, characteristic function
/// exp(-|u|^alpha), by the Chambers-Mallows-Stuck method. alpha in (0, 2].
double sample_symmetric_stable(RandomStream& rng, double alpha);

/// Totally skewed positive stable variate with Laplace transform
/// exp(-s^a), a in (0, 1]; a == 1 gives the constant 1.
double sample_positive_stable(RandomStream& rng, double a);

}  // namespace mmh
