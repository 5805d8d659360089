#include "sncert/random_stream.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sncert {

namespace {
// SplitMix64 step (public-domain mixer by Sebastiano Vigna).
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state);
  state ^= stream_id * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL;
  mixed ^= splitmix64(state);
  engine_.seed(mixed);
}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] x [0,1) uniforms.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double mag = std::sqrt(-2.0 * std::log(u1));
  double ang = 2.0 * std::numbers::pi * u2;
  spare_ = mag * std::sin(ang);
  has_spare_ = true;
  return mag * std::cos(ang);
}

std::uint32_t RandomStream::uniform_index(std::uint32_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: bound must be positive");
  const std::uint64_t span = 0x100000000ULL;  // 2^32
  const std::uint64_t limit = span - span % bound;
  for (;;) {
    std::uint64_t x = engine_() >> 32;
    if (x < limit) return static_cast<std::uint32_t>(x % bound);
  }
}

std::int64_t RandomStream::binomial(std::int64_t trials, double p) {
  if (trials < 0) throw std::invalid_argument("binomial: negative trial count");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial: p outside [0,1]");
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < trials; ++i)
    if (uniform() < p) ++hits;
  return hits;
}

std::uint64_t derive_stream_id(std::uint64_t cell, std::uint64_t trial, std::uint64_t stage) {
  std::uint64_t state = 0x8893A1B7D3C4E591ULL;
  state ^= splitmix64(state) ^ cell;
  state ^= splitmix64(state) ^ trial;
  state ^= splitmix64(state) ^ stage;
  return splitmix64(state);
}

}  // namespace sncert
