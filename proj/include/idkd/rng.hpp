#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace idkd {

// std::mt19937_64 is fully specified by the standard, but the stdlib
// distribution adaptors are not. All transforms below are pinned by hand so
// that a (seed, tag) pair yields the same stream on every platform.

uint64_t splitmix64(uint64_t& state);

// Stable seed derivation for independent streams: mixes the master seed with
// a purpose tag and an index (e.g. node id).
uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index = 0);

// Seed for the Dirichlet partitioner. Depends only on (seed, alpha, n_nodes)
// so that paired runs share the exact same partition.
uint64_t partition_seed(uint64_t seed, double alpha, uint64_t n_nodes);

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // [0, 1)
  double uniform();
  // (0, 1]
  double uniform_pos();
  double uniform(double lo, double hi);
  // [0, n)
  uint64_t uniform_index(uint64_t n);

  double normal();

  // Marsaglia-Tsang; shape > 0, unit scale.
  double gamma(double shape);

  // Symmetric Dirichlet(alpha * 1_n).
  std::vector<double> dirichlet(double alpha, size_t n);

  template <class T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (size_t i = v.size() - 1; i > 0; --i) {
      size_t j = static_cast<size_t>(uniform_index(i + 1));
      std::swap(v[i], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace idkd
