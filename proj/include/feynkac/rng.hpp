// Copyright 2026 The feynkac authors
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
#include <random>

namespace feynkac {

// splitmix64; used to hash (seed, tag...) tuples into substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic substream factory. Every consumer of randomness derives its
/// own generator from the master seed plus a tuple of integer tags, so results
/// do not depend on evaluation order or thread scheduling.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t seed) : seed_(seed) {}

  template <typename... Tags>
  std::mt19937_64 stream(Tags... tags) const {
    std::uint64_t h = mix64(seed_);
    ((h = mix64(h ^ static_cast<std::uint64_t>(tags))), ...);
    return std::mt19937_64(h);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace feynkac
