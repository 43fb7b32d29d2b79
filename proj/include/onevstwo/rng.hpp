#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace onevstwo {

// Philox 4x32 with 10 rounds: a counter-based generator, so any (seed,
// substream) pair addresses an independent stream without sequential seeding.
// Monte Carlo derives one substream per (trial index, hypothesis), which makes
// results independent of worker count and scheduling.
class PhiloxRng {
 public:
  static constexpr const char* kId = "philox4x32-10/v1";

  PhiloxRng(std::uint64_t seed, std::uint64_t substream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(substream),
             static_cast<std::uint32_t>(substream >> 32)} {}

  // One keyed block permutation; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t prod0 = 0xD2511F53ull * ctr[0];
      const std::uint64_t prod1 = 0xCD9E8D57ull * ctr[2];
      const std::array<std::uint32_t, 4> next{
          static_cast<std::uint32_t>(prod1 >> 32) ^ ctr[1] ^ key[0],
          static_cast<std::uint32_t>(prod1),
          static_cast<std::uint32_t>(prod0 >> 32) ^ ctr[3] ^ key[1],
          static_cast<std::uint32_t>(prod0)};
      ctr = next;
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }

  std::uint64_t next_u64() {
    if (have_ == 0) {
      buf_ = block(ctr_, key_);
      if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit block counter
      have_ = 2;
    }
    --have_;
    const int base = 2 * (1 - have_);
    return (static_cast<std::uint64_t>(buf_[base + 1]) << 32) | buf_[base];
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; exact sampling, no rejection.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * M_PI * u2);
    has_cached_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int have_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace onevstwo
