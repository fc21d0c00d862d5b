#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace sparsedetect {

using Engine = std::mt19937_64;

/// Tags separating the independent random streams used inside one trial.
enum class Stream : std::uint64_t {
  Design = 0x44455349,
  FixedDesign = 0x46495844,
  Signal = 0x5349474e,
  NullNoise = 0x4e554c4c,
  AltNoise = 0x414c5421,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives a child seed from a parent seed and a path of keys. The mapping
/// is a pure function, so (master seed, keys...) pins a stream regardless of
/// the order in which trials are executed.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> keys) noexcept;

/// Stable key for a real-valued grid coordinate (bit pattern of the double).
std::uint64_t real_key(double x) noexcept;

Engine make_engine(std::uint64_t seed);

/// Fills `out` with independent standard normal draws.
void fill_standard_normal(Engine& engine, std::span<double> out);

}  // namespace sparsedetect
