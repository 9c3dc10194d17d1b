#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sdpguard::rng {

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Child seeds are derived by hashing the parent with a purpose tag, so adding
// a new consumer of randomness never shifts the stream seen by another one.
std::uint64_t derive(std::uint64_t seed, std::string_view purpose);
std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

inline Engine engine(std::uint64_t seed, std::string_view purpose) {
  return Engine(derive(seed, purpose));
}

}  // namespace sdpguard::rng
