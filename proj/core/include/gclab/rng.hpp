#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace gclab {

/// Seeded generator with platform-independent draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_positive();
  /// Uniform integer on [0, n).
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Mixes a master seed with a tag and an index into an independent seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index);

}  // namespace gclab
