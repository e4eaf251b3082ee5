#ifndef DSQ_PHILOX_HPP
#define DSQ_PHILOX_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace dsq {

// Counter-based philox4x32-10 generator.  The 64-bit stream id is half of
// the counter, so any number of independent, reproducible streams can be
// derived from one seed without coordination; the key is the seed itself.
// Satisfies UniformRandomBitGenerator for use with standard distributions.
class PhiloxEngine {
 public:
  using result_type = std::uint32_t;

  explicit PhiloxEngine(std::uint64_t seed, std::uint64_t stream = 0)
      : key0_(std::uint32_t(seed)), key1_(std::uint32_t(seed >> 32)),
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }

  result_type operator()() {
    if (pos_ == 4) {
      buffer_ = block(counter_++);
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  // 53-bit uniform double in [0, 1).
  double uniform() {
    const std::uint64_t hi = (*this)() >> 5;   // 27 bits
    const std::uint64_t lo = (*this)() >> 6;   // 26 bits
    return double((hi << 26) | lo) * 1.1102230246251565e-16;  // 2^-53
  }

  // Standard normal via Box-Muller, second draw cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  static constexpr std::uint32_t kMultA = 0xD2511F53u;
  static constexpr std::uint32_t kMultB = 0xCD9E8D57u;

  static void mulhilo(std::uint32_t a, std::uint32_t b,
                      std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = std::uint64_t(a) * b;
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
  }

  std::array<std::uint32_t, 4> block(std::uint64_t index) const {
    std::array<std::uint32_t, 4> c = {
        std::uint32_t(index), std::uint32_t(index >> 32),
        std::uint32_t(stream_), std::uint32_t(stream_ >> 32)};
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(c[0], kMultA, hi0, lo0);
      mulhilo(c[2], kMultB, hi1, lo1);
      c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
      k0 += kWeylA;
      k1 += kWeylB;
    }
    return c;
  }

  std::uint32_t key0_, key1_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int pos_ = 4;
  double spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace dsq

#endif
