// SPDX-License-Identifier: Apache-2.0
#include "quantmimo/random.hpp"

#include <cmath>

namespace quantmimo {

std::uint64_t mix_seed(std::uint64_t state, std::uint64_t value) {
  // splitmix64 finalizer over the running state
  std::uint64_t z = state ^ (value + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

RandomStream RandomStream::substream(std::uint64_t master,
                                     std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = mix_seed(0x5eed5eed5eed5eedULL, master);
  for (auto v : path) state = mix_seed(state, v);
  return RandomStream(state);
}

Complex RandomStream::complex_normal(double variance) {
  const double s = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

}  // namespace quantmimo
