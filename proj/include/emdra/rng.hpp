#pragma once
#include <cmath>
#include <cstdint>
#include <random>

// Seedable, splittable randomness. Streams are derived with splitmix64 so a
// (base_seed, stream_index) pair names the same sequence on every platform;
// variate transforms are written out by hand because the std::*_distribution
// wrappers are not bit-stable across standard libraries.
namespace emdra::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable child-seed derivation: mix the base, then mix the index in.
inline std::uint64_t derive_stream(std::uint64_t base_seed, std::uint64_t index) {
  std::uint64_t s = base_seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (index * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL);
  return splitmix64(s);
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : eng_(seed) {}
  Stream(std::uint64_t base_seed, std::uint64_t index) : eng_(derive_stream(base_seed, index)) {}

  std::uint64_t bits() { return eng_(); }

  // uniform on [0,1), 53-bit resolution
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  // exponential with the given mean (1 - uniform() is in (0,1], so log is safe)
  double exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

  // geometric block length on {1,2,...} with the given mean (>= 1)
  std::uint64_t geometric_len(double mean_len) {
    if (mean_len <= 1.0) return 1;
    const double p = 1.0 / mean_len;
    double u = uniform();
    double k = std::ceil(std::log(1.0 - u) / std::log(1.0 - p));
    if (!(k >= 1.0)) return 1;
    return static_cast<std::uint64_t>(k);
  }

  // Fisher-Yates index shuffle with this stream (used by the trainer)
  template <class Vec>
  void shuffle(Vec& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bits() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace emdra::rng
