#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "contcount/counters.h"
#include "contcount/errors.h"

namespace contcount {

namespace {

const CounterMechanism& NonNull(const MechanismPtr& inner) {
  if (!inner) throw ParameterError("wrapped mechanism is null");
  return *inner;
}

}  // namespace

// ScaledCounter

ScaledCounter::ScaledCounter(MechanismPtr inner, double bound)
    : CounterMechanism(NonNull(inner).horizon(), inner->dimension(), bound),
      inner_(std::move(inner)),
      bound_(bound),
      scratch_(inner_->dimension(), 0.0) {
  if (inner_->l1_bound() != 1.0) {
    throw ParameterError("ScaledCounter expects a unit-bound inner mechanism");
  }
  std::vector<double> initial = inner_->Current();
  for (double& v : initial) v *= bound_;
  SetInitialRelease(std::move(initial));
}

AccuracyEnvelope ScaledCounter::envelope() const {
  AccuracyEnvelope env = inner_->envelope();
  env.beta *= bound_;
  return env;
}

std::string ScaledCounter::Describe() const {
  std::ostringstream out;
  out << "scaled(" << bound_ << "," << inner_->Describe() << ")";
  return out.str();
}

void ScaledCounter::Step(std::span<const double> a,
                         std::vector<double>& release) {
  double total = 0.0;
  for (size_t r = 0; r < a.size(); ++r) {
    scratch_[r] = a[r] / bound_;
    total += scratch_[r];
  }
  // Rounding in the division can push a full-norm update a hair past 1.
  if (total > 1.0) {
    for (double& v : scratch_) v /= total;
  }
  const std::vector<double>& inner = inner_->Update(scratch_);
  for (size_t r = 0; r < release.size(); ++r) release[r] = inner[r] * bound_;
}

// UnderestimatorWrapper

UnderestimatorWrapper::UnderestimatorWrapper(MechanismPtr inner)
    : CounterMechanism(NonNull(inner).horizon(), inner->dimension(),
                       inner->l1_bound()),
      inner_(std::move(inner)),
      inner_env_(inner_->envelope()) {
  std::vector<double> initial = inner_->Current();
  for (double& v : initial) v = Shift(v, inner_env_.alpha, inner_env_.beta);
  SetInitialRelease(std::move(initial));
}

AccuracyEnvelope UnderestimatorWrapper::envelope() const {
  return {inner_env_.alpha * inner_env_.alpha,
          2.0 * inner_env_.beta / inner_env_.alpha, inner_env_.gamma, true};
}

std::string UnderestimatorWrapper::Describe() const {
  return "under(" + inner_->Describe() + ")";
}

void UnderestimatorWrapper::Step(std::span<const double> a,
                                 std::vector<double>& release) {
  const std::vector<double>& inner = inner_->Update(a);
  for (size_t r = 0; r < release.size(); ++r) {
    release[r] = Shift(inner[r], inner_env_.alpha, inner_env_.beta);
  }
}

// MonotoneWrapper

MonotoneWrapper::MonotoneWrapper(MechanismPtr inner)
    : CounterMechanism(NonNull(inner).horizon(), inner->dimension(),
                       inner->l1_bound()),
      inner_(std::move(inner)) {}

AccuracyEnvelope MonotoneWrapper::envelope() const {
  AccuracyEnvelope env = inner_->envelope();
  env.beta += 1.0;
  return env;
}

std::string MonotoneWrapper::Describe() const {
  return "mono(" + inner_->Describe() + ")";
}

void MonotoneWrapper::Step(std::span<const double> a,
                           std::vector<double>& release) {
  const std::vector<double>& inner = inner_->Update(a);
  for (size_t r = 0; r < release.size(); ++r) {
    release[r] = Next(release[r], inner[r]);
  }
}

// ZeroFailureWrapper

ZeroFailureWrapper::ZeroFailureWrapper(MechanismPtr inner)
    : CounterMechanism(NonNull(inner).horizon(), inner->dimension(),
                       inner->l1_bound()),
      inner_(std::move(inner)),
      inner_env_(inner_->envelope()) {
  std::vector<double> initial = inner_->Current();
  for (double& v : initial) v = Clamp(0.0, v, inner_env_);
  SetInitialRelease(std::move(initial));
}

double ZeroFailureWrapper::Clamp(double x, double y,
                                 const AccuracyEnvelope& env) {
  const double lo = env.Lower(x);
  const double hi = env.Upper(x);
  return std::min(std::max(y, lo), hi);
}

AccuracyEnvelope ZeroFailureWrapper::envelope() const {
  AccuracyEnvelope env = inner_env_;
  env.gamma = 0.0;
  return env;
}

PrivacyBudget ZeroFailureWrapper::privacy() const {
  PrivacyBudget p = inner_->privacy();
  p.delta += inner_env_.gamma;
  return p;
}

std::string ZeroFailureWrapper::Describe() const {
  return "clamp(" + inner_->Describe() + ")";
}

void ZeroFailureWrapper::Step(std::span<const double> a,
                              std::vector<double>& release) {
  const std::vector<double>& inner = inner_->Update(a);
  const std::vector<double>& x = TrueCounts();
  for (size_t r = 0; r < release.size(); ++r) {
    release[r] = Clamp(x[r], inner[r], inner_env_);
  }
}

// RandomWarmupCounter

RandomWarmupCounter::RandomWarmupCounter(MechanismPtr inner, int warmup,
                                         RandomSource rng)
    : CounterMechanism(NonNull(inner).horizon(), inner->dimension(),
                       inner->l1_bound()),
      inner_(std::move(inner)),
      warmup_(warmup),
      rng_(std::move(rng)) {
  if (warmup_ < 0) throw ParameterError("warm-up length must be >= 0");
  std::vector<double> initial = inner_->Current();
  if (warmup_ > 0) DrawUniform(initial);
  SetInitialRelease(std::move(initial));
}

void RandomWarmupCounter::DrawUniform(std::vector<double>& release) {
  for (double& v : release) v = rng_.Uniform(0.0, warmup_);
}

AccuracyEnvelope RandomWarmupCounter::envelope() const {
  AccuracyEnvelope inner = inner_->envelope();
  return {std::max(1.0, inner.alpha), std::max<double>(warmup_, inner.beta),
          inner.gamma, false};
}

std::string RandomWarmupCounter::Describe() const {
  std::ostringstream out;
  out << "warmup(" << warmup_ << "," << inner_->Describe() << ")";
  return out.str();
}

void RandomWarmupCounter::Step(std::span<const double> a,
                               std::vector<double>& release) {
  const std::vector<double>& inner = inner_->Update(a);
  if (time() < warmup_) {
    DrawUniform(release);
  } else {
    release = inner;
  }
}

}  // namespace contcount
