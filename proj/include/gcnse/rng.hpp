#pragma once

#include <cstdint>
#include <utility>

namespace gcnse {

// splitmix64 (Steele, Lea, Vigna). Used to expand a user seed into generator
// state and to derive independent sub-streams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna, public-domain reference algorithm).
// The uniform stream is defined purely by 64-bit integer arithmetic, so it is
// bit-identical across platforms and compilers.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Box-Muller pair. Consumes exactly two uniforms; 1-u keeps the log
  // argument in (0, 1].
  std::pair<double, double> next_gaussian_pair();

  // Single standard Gaussian with a cached spare from the last pair.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    auto [g0, g1] = next_gaussian_pair();
    spare_ = g1;
    have_spare_ = true;
    return g0;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Deterministic sub-stream seeds for one logical object (dataset, sample
// set): stream k of seed s.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t sm = seed ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  return splitmix64_next(sm);
}

} // namespace gcnse
