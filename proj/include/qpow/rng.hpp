#pragma once

#include <array>
#include <cstdint>

namespace qpow {

// Philox 4x64 with 10 rounds.  The key is (seed, run) and the counter is
// positioned at (iteration, entity, block), so every walker attempt or
// compression draw owns an independent stream that can be replayed without
// regard to thread scheduling or evaluation order.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t run, std::uint64_t iteration,
             std::uint64_t entity)
      : key_{seed, run}, counter_{iteration, entity, 0, 0} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    if (pos_ == 4) {
      block_ = block(counter_, key_);
      if (++counter_[2] == 0) ++counter_[3];
      pos_ = 0;
    }
    return block_[pos_++];
  }

  // Uniform double strictly inside (0, 1).
  double uniform01() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); n >= 1.  Unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t r = (0 - n) % n;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x < r);
    return (x - r) % n;
  }

  // One keyed permutation block; exposed so ports can check test vectors.
  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> c,
                                            std::array<std::uint64_t, 2> k) {
    constexpr std::uint64_t m0 = 0xD2E7470EE14C6C93ULL;
    constexpr std::uint64_t m1 = 0xCA5A826395121157ULL;
    constexpr std::uint64_t w0 = 0x9E3779B97F4A7C15ULL;
    constexpr std::uint64_t w1 = 0xBB67AE8584CAA73BULL;
    for (int round = 0; round < 10; ++round) {
      const unsigned __int128 p0 = static_cast<unsigned __int128>(m0) * c[0];
      const unsigned __int128 p1 = static_cast<unsigned __int128>(m1) * c[2];
      c = {static_cast<std::uint64_t>(p1 >> 64) ^ c[1] ^ k[0],
           static_cast<std::uint64_t>(p1),
           static_cast<std::uint64_t>(p0 >> 64) ^ c[3] ^ k[1],
           static_cast<std::uint64_t>(p0)};
      k[0] += w0;
      k[1] += w1;
    }
    return c;
  }

 private:
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> block_{};
  int pos_ = 4;
};

// Disjoint entity ranges for the independent draw stages of one iteration.
enum class StreamPurpose : std::uint64_t {
  generic = 0,
  spawn = 1,
  diagonal = 2,
  compress = 3,
  system = 4,
};

inline std::uint64_t stream_entity(StreamPurpose purpose, std::uint64_t ordinal) {
  return (static_cast<std::uint64_t>(purpose) << 56) | ordinal;
}

// Identifies one iteration of one run; hands out per-entity streams.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t run = 0;
  std::uint64_t iteration = 0;

  CounterRng stream(StreamPurpose purpose, std::uint64_t ordinal) const {
    return CounterRng(seed, run, iteration, stream_entity(purpose, ordinal));
  }
};

}  // namespace qpow
