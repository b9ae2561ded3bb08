#ifndef CONTCOUNT_NOISE_H_
#define CONTCOUNT_NOISE_H_

#include <cstdint>
#include <random>

namespace contcount {

// Deterministic source of uniform randomness identified by (seed, stream id).
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard, and uniforms are built from raw 64-bit words rather than through
// std::uniform_real_distribution, so equal (seed, stream) pairs reproduce the
// same samples on every platform. A source constructed with ZeroNoise() makes
// every Laplace draw return exactly 0, which turns the mechanisms into exact
// bookkeeping that tests can compare against direct arithmetic.
//
// Not cryptographically secure, and the floating-point Laplace sampler is
// simulation-grade: its known precision side channels are not mitigated.
class RandomSource {
 public:
  RandomSource(uint64_t seed, uint64_t stream_id);

  static RandomSource ZeroNoise(uint64_t seed = 0, uint64_t stream_id = 0);

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }
  bool zero_noise() const { return zero_noise_; }

  // Child stream with a distinct id derived from this stream's id and `key`.
  // The zero-noise flag is inherited.
  RandomSource Fork(uint64_t key) const;

  uint64_t NextU64();

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double UniformOpen();

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);

 private:
  RandomSource(uint64_t seed, uint64_t stream_id, bool zero_noise);

  uint64_t seed_;
  uint64_t stream_id_;
  bool zero_noise_;
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive engine seeds and child stream ids.
uint64_t MixBits(uint64_t x);

// Inverse-CDF Laplace transform of a uniform u in (-1/2, 1/2):
// -sign(u) * scale * ln(1 - 2|u|). u = 0.25 at scale 1 gives ln 2.
double LaplaceFromUniform(double scale, double u);

// One Laplace(0, scale) draw. Returns exactly 0 when scale == 0 or when `rng`
// is in zero-noise mode; throws ParameterError for negative or NaN scale.
double Laplace(double scale, RandomSource& rng);

}  // namespace contcount

#endif  // CONTCOUNT_NOISE_H_
