#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ra {

// splitmix64; used to derive independent stream keys from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Named purposes so sampling, mask generation and downsampling never share a
// stream for the same prompt.
enum class RngPurpose : std::uint64_t {
  MaskGen = 1,
  Collect = 2,
  Downsample = 3,
};

inline std::uint64_t stream_key(std::uint64_t master, std::uint64_t a,
                                std::uint64_t b, std::uint64_t c = 0) {
  std::uint64_t s = master;
  std::uint64_t k = splitmix64(s);
  s ^= a * 0x9e3779b97f4a7c15ULL;
  k ^= splitmix64(s);
  s ^= b * 0xc2b2ae3d27d4eb4fULL;
  k ^= splitmix64(s);
  s ^= c * 0x165667b19e3779f9ULL;
  k ^= splitmix64(s);
  return k;
}

// Deterministic per-(prompt, purpose) stream. Uniform doubles are built from
// raw 64-bit output instead of std::uniform_real_distribution, so sequences
// are identical across standard-library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : gen_(key) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Inverse-CDF draw from a categorical distribution.
  int categorical(std::span<const double> probs) {
    const double u = uniform();
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
      cum += probs[k];
      if (u < cum) return static_cast<int>(k);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  // Uniform integer in [0, bound) via rejection.
  int uniform_int(int bound) {
    const std::uint64_t limit =
        UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(bound);
    std::uint64_t v = gen_();
    while (v >= limit) v = gen_();
    return static_cast<int>(v % static_cast<std::uint64_t>(bound));
  }

 private:
  std::mt19937_64 gen_;
};

inline RngStream make_stream(std::uint64_t master, RngPurpose purpose,
                             std::uint64_t prompt_id, std::uint64_t extra = 0) {
  return RngStream(stream_key(master, static_cast<std::uint64_t>(purpose),
                              prompt_id, extra));
}

}  // namespace ra
