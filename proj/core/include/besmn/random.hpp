#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace besmn {

// Named substreams keep unrelated draw sequences independent: how many draws
// one purpose consumes never shifts another purpose's sequence, so paired
// scenario comparisons stay aligned on everything except the part under test.
enum class Stream : std::uint32_t {
  Seeding = 1,
  Contacts = 2,
  Sampling = 3,
  Recovery = 4,
  Graph = 5,
  Proposal = 6,
  Data = 7,
};

// Deterministic random source. mt19937_64 output is fully specified by the
// standard, and every variate below is derived from it with explicit
// arithmetic (no implementation-defined distribution objects), so a given
// (seed, stream, replicate) triple yields the same draw sequence on any
// platform.
class Rng {
 public:
  Rng(std::uint64_t seed, Stream stream, std::uint64_t replicate = 0) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed & 0xffffffffu),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(replicate & 0xffffffffu),
        static_cast<std::uint32_t>(replicate >> 32),
    };
    gen_.seed(seq);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() { return 1.0 - uniform01(); }

  // Unbiased integer in [0, n) by masked rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    const std::uint64_t mask = std::bit_ceil(n) - 1;
    for (;;) {
      const std::uint64_t x = gen_() & mask;
      if (x < n) return x;
    }
  }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
    return -std::log1p(-uniform01()) / rate;
  }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = uniform_pos();
    const double v = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 2.0 * 3.14159265358979323846 * v;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Draws `count` distinct integers from [lo, hi) by partial Fisher-Yates;
// returned in draw order.
inline std::vector<int> sample_without_replacement(Rng& rng, int lo, int hi, int count) {
  const int n = hi - lo;
  if (count < 0 || count > n) throw std::invalid_argument("sample_without_replacement: bad count");
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = lo + i;
  for (int t = 0; t < count; ++t) {
    const int j = t + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - t)));
    std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace besmn
