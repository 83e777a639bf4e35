// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.
//
// All randomness in the toolkit flows from one master seed through named
// sub-streams, so any stage can be re-run in isolation or in parallel and
// still produce the same draws.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rfscene {

// FNV-1a, also used for file content hashes in run manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t basis = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t basis = 0xcbf29ce484222325ull) {
  return fnv1a64(s.data(), s.size(), basis);
}

// splitmix64 finalizer; decorrelates structured seed inputs.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seed for the sub-stream `name` indexed by up to three integers (frame,
// antenna pair, ...). Stable across platforms.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name,
                                 std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = fnv1a64(name, master ^ 0x9e3779b97f4a7c15ull);
  h = mix64(h ^ mix64(a));
  h = mix64(h ^ mix64(b + 0x1000'0000'0001ull));
  h = mix64(h ^ mix64(c + 0x2000'0000'0002ull));
  return h;
}

// mt19937_64 wrapped with distribution code that does not depend on the
// standard library's implementation, so identical seeds give identical
// sequences everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Standard normal via Box-Muller (no caching, two draws per call).
  double gaussian() {
    double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;        // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rfscene
