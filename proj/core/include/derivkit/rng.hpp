#pragma once

#include <cstdint>
#include <initializer_list>

namespace derivkit {

// Counter-based generator built on the SplitMix64 finalizer.
//
// A stream is identified by a root seed plus a list of integer keys, e.g.
// (seed, j, l, kappa) for one training row. The keys are folded into the
// stream origin with the same mixer, so distinct key tuples give
// statistically independent sequences and the k-th draw of a stream is
// mix(origin + k * golden_gamma). Normal deviates use Box-Muller with only
// basic arithmetic and libm, which keeps sequences identical across
// platforms with IEEE doubles.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  std::uint64_t origin_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace derivkit
