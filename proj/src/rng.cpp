#include "idkd/rng.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace idkd {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index) {
  uint64_t state = master;
  splitmix64(state);
  for (char c : tag) {
    state ^= static_cast<uint64_t>(static_cast<unsigned char>(c));
    splitmix64(state);
  }
  state ^= index;
  return splitmix64(state);
}

uint64_t partition_seed(uint64_t seed, double alpha, uint64_t n_nodes) {
  uint64_t state = seed;
  splitmix64(state);
  state ^= std::bit_cast<uint64_t>(alpha);
  splitmix64(state);
  state ^= n_nodes;
  return splitmix64(state);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

uint64_t Rng::uniform_index(uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  // rejection sampling, no modulo bias
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller
  double u1 = uniform_pos();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

double Rng::gamma(double shape) {
  if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
    double g = gamma(shape + 1.0);
    double u = uniform_pos();
    return g * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> Rng::dirichlet(double alpha, size_t n) {
  if (n == 0) throw std::invalid_argument("dirichlet: n must be positive");
  std::vector<double> p(n);
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    // guard against underflow at very small alpha
    p[i] = std::max(gamma(alpha), 1e-300);
    sum += p[i];
  }
  for (size_t i = 0; i < n; ++i) p[i] /= sum;
  return p;
}

}  // namespace idkd
