// Copyright 2026 The birb-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef BIRB_COMMON_HPP
#define BIRB_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace birb {

// Error taxonomy. The CLI maps categories to exit codes:
//   ConfigError -> 2, DataError -> 3, ProtocolError -> 4.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Deterministic PRNG used everywhere randomness is needed. Wraps a fixed
// xorshift-based generator with hand-rolled distributions so that results
// do not depend on the standard library's unspecified algorithms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(splitmix64(seed + 0x9e3779b97f4a7c15ULL)) {}

  uint64_t next_u64() {
    // xorshift64* (Vigna). Period 2^64 - 1, state never zero after splitmix init.
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t uniform_int(uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Draws k distinct indices from [0, n) by partial Fisher-Yates.
  std::vector<size_t> sample_without_replacement(size_t n, size_t k);

  static uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  uint64_t state_;
};

// FNV-1a 64-bit. Used for sub-seed derivation and stage content hashing.
uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ULL);
uint64_t fnv1a64(const std::string& s, uint64_t seed = 0xcbf29ce484222325ULL);

// Streams a file through FNV-1a. Throws DataError if unreadable.
uint64_t hash_file(const std::string& path, uint64_t seed = 0xcbf29ce484222325ULL);

std::string to_hex(uint64_t v);

// Derives an independent seed for a named sub-task of a run.
inline uint64_t derive_seed(uint64_t base, const std::string& tag, uint64_t a = 0,
                            uint64_t b = 0) {
  uint64_t h = fnv1a64(tag);
  h = Rng::splitmix64(h ^ base);
  h = Rng::splitmix64(h ^ (a * 0x9e3779b97f4a7c15ULL));
  h = Rng::splitmix64(h ^ (b * 0xc2b2ae3d27d4eb4fULL));
  return h;
}

// Number of worker threads: hardware concurrency capped by the
// BIRB_ENGINE_THREADS environment variable (if set and > 0).
int worker_threads();

// Runs fn(i) for i in [0, n) on worker threads. fn must write only to
// per-index slots; iteration order is unspecified but the result layout is
// index-addressed, so output is deterministic.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace birb

#endif  // BIRB_COMMON_HPP
