#include "derivkit/rng.hpp"

#include <cmath>
#include <numbers>

namespace derivkit {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
    : origin_(mix64(seed + kGoldenGamma)) {
  for (std::uint64_t key : keys) {
    origin_ = mix64(origin_ ^ mix64(key + kGoldenGamma));
  }
}

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return mix64(origin_ + counter_ * kGoldenGamma);
}

double RandomStream::uniform() {
  // 53 random bits, shifted by half an ulp so 0 is never returned.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace derivkit
