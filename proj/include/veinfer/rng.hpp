#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace veinfer {

namespace detail {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

// Philox4x32-10 block function (Salmon et al., "Parallel Random Numbers:
// As Easy as 1, 2, 3"). Counter-based: the stream is a pure function of
// (key, counter), so disjoint keys give independent reproducible streams.
struct Philox4x32 {
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::uint32_t k0, std::uint32_t k1) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0;; ++round) {
      const std::uint64_t p0 = std::uint64_t(m0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(m1) * ctr[2];
      ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ k0, std::uint32_t(p1),
             std::uint32_t(p0 >> 32) ^ ctr[3] ^ k1, std::uint32_t(p0)};
      if (round == 9) return ctr;
      k0 += w0;
      k1 += w1;
    }
  }
};

// Tags keeping subsystems on disjoint streams even when they share a seed.
namespace stream_domain {
inline constexpr std::uint64_t simulate = 1ull << 32;
inline constexpr std::uint64_t mcmc = 2ull << 32;
inline constexpr std::uint64_t moments = 3ull << 32;
inline constexpr std::uint64_t beta_check = 4ull << 32;
}  // namespace stream_domain

// One independent random stream identified by (seed, stream). No global
// state; safe to hold one per thread/chain.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t k = detail::mix64(seed ^ detail::mix64(stream));
    key0_ = static_cast<std::uint32_t>(k);
    key1_ = static_cast<std::uint32_t>(k >> 32);
  }

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  // Uniform on the open interval (0,1), 53-bit resolution. Never returns an
  // endpoint, so log(u) is always finite.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double a = 2.0 * pi_ * uniform01();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // rate == 0 is the no-event limit and yields +infinity.
  double exponential(double rate) {
    if (!(rate >= 0)) throw std::domain_error("exponential: rate must be nonnegative");
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(uniform01()) / rate;
  }

  // Marsaglia-Tsang squeeze method; rate (not scale) parameterization.
  double gamma(double shape, double rate) {
    if (!(shape > 0)) throw std::domain_error("gamma: shape must be positive");
    if (!(rate > 0)) throw std::domain_error("gamma: rate must be positive");
    if (shape < 1.0) {
      // boost: X(a) = X(a+1) * U^(1/a)
      const double u = uniform01();
      return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
  }

 private:
  void refill() {
    buf_ = Philox4x32::block({static_cast<std::uint32_t>(block_),
                              static_cast<std::uint32_t>(block_ >> 32), 0u, 0u},
                             key0_, key1_);
    ++block_;
    pos_ = 0;
  }

  static constexpr double pi_ = 3.14159265358979323846;
  std::uint32_t key0_ = 0, key1_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace veinfer
