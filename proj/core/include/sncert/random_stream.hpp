#pragma once

#include <cstdint>
#include <random>

namespace sncert {

// Deterministic substream RNG.
//
// A stream is addressed by (seed, stream_id). The pair is mixed through
// SplitMix64 into the state of a std::mt19937_64, so distinct ids give
// statistically independent sequences while an identical pair reproduces
// identical draws bit-exactly. Gaussian, index and binomial sampling are
// implemented here (Box-Muller, rejection, Bernoulli sum) rather than via
// std::*_distribution, whose algorithms differ across standard libraries
// and would break the reproducibility contract of the golden tests.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal (Box-Muller; the spare deviate is cached).
  double normal();

  // Uniform on {0, ..., bound-1}, bias-free via rejection.
  std::uint32_t uniform_index(std::uint32_t bound);

  // Binomial(trials, p) as a sum of Bernoulli draws; O(trials) but exact
  // at p = 0 and p = 1 and free of algorithmic branching.
  std::int64_t binomial(std::int64_t trials, double p);

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stable substream id for the (cell, trial, stage) coordinates used by the
// experiment harness. Changing any coordinate changes the id.
std::uint64_t derive_stream_id(std::uint64_t cell, std::uint64_t trial, std::uint64_t stage);

}  // namespace sncert
