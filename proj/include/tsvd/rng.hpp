// Copyright 2026 The tsvd-sim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace tsvd {

// SplitMix64 (Steele/Lea/Vigna), used counter-style: output(n) depends only on
// (seed, n), so any entry of a stream can be produced without generating its
// predecessors.  Chosen because it is tiny, well studied, and bit-identical
// across platforms, unlike the distributions in <random>.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t n) {
  std::uint64_t z = seed + (n + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1) using the top 53 bits.
inline double u64_to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * (1.0 / 9007199254740992.0);
}

// Sequential convenience wrapper over the counter form.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return splitmix64_at(seed_, n_++); }
  double next_unit() { return u64_to_unit(next_u64()); }

 private:
  std::uint64_t seed_;
  std::uint64_t n_ = 0;
};

}  // namespace tsvd
