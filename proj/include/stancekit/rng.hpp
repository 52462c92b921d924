#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace stancekit {

/// Portable seeded generator.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// distributions are not, so bounded integers and unit reals are derived
/// here by fixed rules:
///   below(n)    rejection sampling on the top of the 64-bit range
///   uniform01() (next() >> 11) * 2^-53
/// Any implementation reproducing these rules reproduces every split,
/// persona selection and sampled token.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    /// Uniform real in [0, 1).
    double uniform01();

  private:
    std::mt19937_64 engine_;
};

/// Derives an independent stream seed from a base seed and a string key
/// (FNV-1a over the key, mixed with the base through splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::string_view key);

} // namespace stancekit
