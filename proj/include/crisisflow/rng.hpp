#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace crisisflow {

using Rng = std::mt19937_64;

/// Independent generator for a named substream of a run seed: the seed and
/// every stream coordinate (chain id, crisis id, draw index...) feed a
/// seed_seq, so streams never depend on scheduling order.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (auto s : stream) {
    words.push_back(static_cast<std::uint32_t>(s));
    words.push_back(static_cast<std::uint32_t>(s >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

enum StreamTag : std::uint64_t {
  kStreamInit = 1,
  kStreamChain = 2,
  kStreamProjection = 3,
  kStreamSynthetic = 4,
};

}  // namespace crisisflow
