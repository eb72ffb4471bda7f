#pragma once

#include <cstdint>
#include <string_view>

namespace hypervec {

// SplitMix64. Small, fast, and identical on every platform, which is what
// the determinism contracts need; std::mt19937 distributions are
// implementation-defined and would break bit-reproducibility of artifacts.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double u01_open() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection-free multiply-shift.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<__uint128_t>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Stateless mix of two words; used for counter-based substreams so that
// per-item draws do not depend on evaluation order or thread count.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Named substream of a root seed. All pipeline randomness is derived from
// one root seed through these, keyed by what the stream is for.
inline std::uint64_t substream(std::uint64_t root, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(root, h);
}

// Standard normal draws via Box-Muller on SplitMix64 uniforms.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double next();

  SplitMix64& rng() { return rng_; }

 private:
  SplitMix64 rng_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace hypervec
