// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "quantmimo/types.hpp"

namespace quantmimo {

// Seedable random source. Copies are independent and replay the same sequence,
// which lets several receivers see identical symbols and noise.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Independent stream derived from a master seed and a path of indices
  // (e.g. {snr_index, packet_index}). Deterministic and order-free, so
  // packets can be simulated on any thread.
  static RandomStream substream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  bool bit() { return (engine_() >> 63) != 0; }
  // Circularly symmetric complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t mix_seed(std::uint64_t state, std::uint64_t value);

}  // namespace quantmimo
