// Copyright 2026 The tallyrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded sampling helpers. The standard distributions are implementation
// defined, so these keep seeded output identical across standard libraries.

#ifndef TALLYRANK_RANDOM_HPP_
#define TALLYRANK_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <utility>

namespace tallyrank::random {

using Engine = std::mt19937_64;

// SplitMix64 finalizer over a combined pair; used to derive child seeds.
inline std::uint64_t Mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t HashName(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : name) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

// Uniform on [0, n) by rejection; n must be positive.
inline std::uint64_t Index(Engine& rng, std::uint64_t n) {
  const std::uint64_t limit = Engine::max() - Engine::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

// Uniform on [0, 1) with 53 random bits.
inline double Unit(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double Uniform(Engine& rng, double lo, double hi) {
  return lo + (hi - lo) * Unit(rng);
}

// Standard normal via Box-Muller; draws two uniforms per call.
inline double Normal(Engine& rng) {
  double u = Unit(rng);
  while (u <= 0.0) u = Unit(rng);
  const double v = Unit(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

inline bool Bernoulli(Engine& rng, double p) { return Unit(rng) < p; }

// Fisher-Yates.
template <typename It>
void Shuffle(It first, It last, Engine& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const std::uint64_t j = Index(rng, i);
    using std::swap;
    swap(first[i - 1], first[j]);
  }
}

}  // namespace tallyrank::random

#endif  // TALLYRANK_RANDOM_HPP_
