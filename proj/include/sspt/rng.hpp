#pragma once

#include <cstdint>
#include <initializer_list>

namespace sspt {

/// Counter-derived xoshiro256++ stream. Streams are constructed from a root
/// seed plus a list of integer ids (draw index, node level, node position,
/// ...), so any tree node or replication gets its own reproducible generator
/// independent of traversal order or thread schedule.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

  std::uint64_t next();

  // UniformRandomBitGenerator interface.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }
  result_type operator()() { return next(); }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01();
  /// Uniform on (0,1].
  double uniform01_open_left() { return 1.0 - uniform01(); }
  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal via Box-Muller.
  double normal();
  /// Gamma(shape, 1), shape > 0, Marsaglia-Tsang with the shape<1 boost.
  double gamma(double shape);
  /// Beta(a, b) as a ratio of gamma variates.
  double beta(double a, double b);

 private:
  void reseed(std::uint64_t seed);
  std::uint64_t s_[4];
};

/// One splitmix64 step; also the mixer used for stream derivation.
std::uint64_t mix64(std::uint64_t x);

}  // namespace sspt
