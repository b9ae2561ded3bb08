#include "contcount/noise.h"

#include <cmath>
#include <string>

#include "contcount/errors.h"

namespace contcount {

uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

uint64_t EngineSeed(uint64_t seed, uint64_t stream_id) {
  return MixBits(MixBits(seed) ^ (stream_id * 0xd1b54a32d192ed03ULL + 1));
}

}  // namespace

RandomSource::RandomSource(uint64_t seed, uint64_t stream_id)
    : RandomSource(seed, stream_id, false) {}

RandomSource::RandomSource(uint64_t seed, uint64_t stream_id, bool zero_noise)
    : seed_(seed),
      stream_id_(stream_id),
      zero_noise_(zero_noise),
      engine_(EngineSeed(seed, stream_id)) {}

RandomSource RandomSource::ZeroNoise(uint64_t seed, uint64_t stream_id) {
  return RandomSource(seed, stream_id, true);
}

RandomSource RandomSource::Fork(uint64_t key) const {
  return RandomSource(seed_, MixBits(stream_id_ ^ MixBits(key + 0x5851f42d4c957f2dULL)),
                      zero_noise_);
}

uint64_t RandomSource::NextU64() { return engine_(); }

double RandomSource::UniformOpen() {
  // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
  const uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double RandomSource::Uniform(double lo, double hi) {
  const uint64_t k = engine_() >> 11;
  return lo + (hi - lo) * (static_cast<double>(k) * 0x1.0p-53);
}

double LaplaceFromUniform(double scale, double u) {
  if (u == 0.0 || scale == 0.0) return 0.0;
  const double sign = u > 0 ? 1.0 : -1.0;
  return -sign * scale * std::log1p(-2.0 * std::fabs(u));
}

double Laplace(double scale, RandomSource& rng) {
  if (!(scale >= 0.0)) {
    throw ParameterError("laplace scale must be >= 0, got " +
                         std::to_string(scale));
  }
  if (scale == 0.0 || rng.zero_noise()) return 0.0;
  return LaplaceFromUniform(scale, rng.UniformOpen() - 0.5);
}

}  // namespace contcount
