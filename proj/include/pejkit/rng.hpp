// Copyright 2026 The pejkit Authors.
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

// Self-contained deterministic RNG (splitmix64). Outputs are identical
// across platforms and standard-library versions, which keeps seeded runs
// byte-reproducible.

#ifndef PEJKIT_RNG_HPP
#define PEJKIT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace pejkit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n). n must be nonzero.
  std::size_t index(std::size_t n) {
    std::size_t i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Deterministically derives an independent stream seed from a base seed,
// a textual tag and a salt (FNV-1a over the tag, then splitmix mixing).
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t salt = 0) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  Rng mixer(base ^ h ^ (salt * 0x9e3779b97f4a7c15ull));
  mixer.next_u64();
  return mixer.next_u64();
}

// Draws m distinct indices from [0, n) by partial Fisher-Yates. The first m
// entries of `scratch` hold the result; ordering is part of the seeded
// deterministic contract.
inline void sample_without_replacement(Rng& rng, std::size_t n, std::size_t m,
                                       std::vector<std::uint32_t>& scratch) {
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < m && i < n; ++i) {
    const std::size_t j = i + rng.index(n - i);
    std::swap(scratch[i], scratch[j]);
  }
}

}  // namespace pejkit

#endif  // PEJKIT_RNG_HPP
