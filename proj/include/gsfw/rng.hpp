#ifndef GSFW_RNG_HPP_
#define GSFW_RNG_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace gsfw {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * xoshiro256** generator, stream format "xoshiro256ss-v1".
 *
 * Stream semantics: the 256-bit state of stream (seed, stream_id) is filled
 * by four successive splitmix64 outputs started from
 * seed ^ (stream_id * 0xd1b54a32d192ed03). Two generators built from the same
 * (seed, stream_id) emit identical sequences on every platform; bounded
 * integers use Lemire's multiply-shift rejection, doubles take the top 53
 * bits, so no draw depends on the standard library's distributions.
 */
class Rng {
  __extension__ typedef unsigned __int128 u128;

 public:
  static constexpr const char* kVersion = "xoshiro256ss-v1";

  explicit Rng(std::uint64_t seed, std::uint64_t stream_id = 0) {
    std::uint64_t sm = seed ^ (stream_id * 0xd1b54a32d192ed03ULL);
    for (auto& word : state_) word = splitmix64(sm);
  }

  /// Child generator with an independent stream derived from this one.
  Rng split(std::uint64_t stream_id) {
    return Rng(next(), stream_id + 1);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    u128 m = static_cast<u128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal (Marsaglia polar method).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, r;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      r = u * u + v * v;
    } while (r >= 1.0 || r == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r) / r);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/**
 * Draws index subsets of {0..n-1} uniformly without replacement by a partial
 * Fisher-Yates shuffle over a persistent permutation. A draw of size b costs
 * b generator calls; the permutation is left shuffled between draws, which
 * keeps every draw uniform.
 */
class BatchSampler {
 public:
  BatchSampler(std::size_t n, Rng rng) : perm_(n), rng_(rng) {
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  }

  /// Returns a view of b distinct indices, valid until the next draw.
  std::span<const std::size_t> draw(std::size_t b) {
    const std::size_t n = perm_.size();
    for (std::size_t t = 0; t < b; ++t) {
      const std::size_t pick = t + static_cast<std::size_t>(rng_.below(n - t));
      std::swap(perm_[t], perm_[pick]);
    }
    return {perm_.data(), b};
  }

  std::size_t population() const { return perm_.size(); }

 private:
  std::vector<std::size_t> perm_;
  Rng rng_;
};

}  // namespace gsfw

#endif  // GSFW_RNG_HPP_
