#include "contcount/counters.h"

#include <cmath>
#include <sstream>
#include <utility>

#include "contcount/errors.h"

namespace contcount {

void PrivacyBudget::Validate() const {
  if (!(epsilon > 0.0)) {
    throw ParameterError("epsilon must be > 0");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw ParameterError("delta must be in [0, 1)");
  }
}

bool AccuracyEnvelope::Contains(double x, double y) const {
  // Boundary values computed in floating point (a shift of a release sitting
  // exactly on alpha*x + beta, say) can land a few ulps outside.
  const double tol = 1e-12 * (alpha * std::fabs(x) + beta + 1.0);
  return Lower(x) - tol <= y && y <= Upper(x) + tol;
}

void AccuracyEnvelope::Validate() const {
  if (!(alpha >= 1.0)) throw ParameterError("envelope alpha must be >= 1");
  if (!(beta >= 0.0)) throw ParameterError("envelope beta must be >= 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw ParameterError("envelope gamma must be in [0, 1)");
  }
}

void ValidateUpdate(std::span<const double> a, int m, double l1_bound) {
  if (static_cast<int>(a.size()) != m) {
    std::ostringstream msg;
    msg << "update has dimension " << a.size() << ", expected " << m;
    throw ValidationError(msg.str());
  }
  // Slack for sums of decimal fractions that should total exactly the bound.
  constexpr double kSlack = 1e-9;
  double total = 0.0;
  for (double v : a) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("update entries must be finite and >= 0");
    }
    if (l1_bound == 1.0 && v > 1.0 + kSlack) {
      throw ValidationError("update entries must be <= 1");
    }
    total += v;
  }
  if (total > l1_bound * (1.0 + kSlack)) {
    std::ostringstream msg;
    msg << "update l1 norm " << total << " exceeds bound " << l1_bound;
    throw ValidationError(msg.str());
  }
}

CounterMechanism::CounterMechanism(int horizon, int dimension, double l1_bound)
    : horizon_(horizon),
      dimension_(dimension),
      l1_bound_(l1_bound),
      release_(dimension > 0 ? dimension : 0, 0.0),
      true_counts_(dimension > 0 ? dimension : 0, 0.0) {
  if (horizon < 1) throw ParameterError("n must be >= 1");
  if (dimension < 1) throw ParameterError("m must be >= 1");
  if (!(l1_bound > 0.0)) throw ParameterError("l1 bound must be > 0");
}

const std::vector<double>& CounterMechanism::Update(std::span<const double> a) {
  if (time_ >= horizon_) {
    std::ostringstream msg;
    msg << "update past horizon n=" << horizon_;
    throw StateError(msg.str());
  }
  ValidateUpdate(a, dimension_, l1_bound_);
  ++time_;
  for (int r = 0; r < dimension_; ++r) true_counts_[r] += a[r];
  Step(a, release_);
  return release_;
}

void CounterMechanism::SetInitialRelease(std::vector<double> release) {
  release_ = std::move(release);
}

PerfectCounter::PerfectCounter(int n, int m, double l1_bound)
    : CounterMechanism(n, m, l1_bound) {}

void PerfectCounter::Step(std::span<const double> a,
                          std::vector<double>& release) {
  for (size_t r = 0; r < a.size(); ++r) release[r] += a[r];
}

EmptyCounter::EmptyCounter(int n, int m, double l1_bound)
    : CounterMechanism(n, m, l1_bound) {}

MechanismKind ParseMechanismKind(const std::string& name) {
  if (name == "treesum") return MechanismKind::kTreeSum;
  if (name == "ftsum") return MechanismKind::kFtSum;
  if (name == "perfect") return MechanismKind::kPerfect;
  if (name == "empty") return MechanismKind::kEmpty;
  throw LookupError("unknown mechanism '" + name +
                    "' (expected treesum, ftsum, perfect or empty)");
}

WrapperKind ParseWrapperKind(const std::string& name) {
  if (name == "under") return WrapperKind::kUnderestimator;
  if (name == "mono") return WrapperKind::kMonotone;
  if (name == "clamp") return WrapperKind::kZeroFailure;
  throw LookupError("unknown wrapper '" + name +
                    "' (expected under, mono or clamp)");
}

std::string MechanismKindName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kTreeSum:
      return "treesum";
    case MechanismKind::kFtSum:
      return "ftsum";
    case MechanismKind::kPerfect:
      return "perfect";
    case MechanismKind::kEmpty:
      return "empty";
  }
  return "?";
}

std::string WrapperKindName(WrapperKind kind) {
  switch (kind) {
    case WrapperKind::kUnderestimator:
      return "under";
    case WrapperKind::kMonotone:
      return "mono";
    case WrapperKind::kZeroFailure:
      return "clamp";
  }
  return "?";
}

MechanismPtr MakeMechanism(const MechanismSpec& spec, int n, int m,
                           double l1_bound, RandomSource rng) {
  if (spec.zero_noise) rng = RandomSource::ZeroNoise(rng.seed(), rng.stream_id());
  const bool scaled = l1_bound > 1.0;
  MechanismPtr mech;
  switch (spec.kind) {
    case MechanismKind::kPerfect:
      mech = std::make_unique<PerfectCounter>(n, m, l1_bound);
      break;
    case MechanismKind::kEmpty:
      mech = std::make_unique<EmptyCounter>(n, m, l1_bound);
      break;
    case MechanismKind::kTreeSum:
      mech = std::make_unique<TreeSum>(
          n, m, TreeSumOptions{spec.epsilon, spec.gamma, spec.c_tree},
          rng.Fork(1));
      if (scaled) mech = std::make_unique<ScaledCounter>(std::move(mech), l1_bound);
      break;
    case MechanismKind::kFtSum:
      mech = std::make_unique<FtSum>(
          n, m, FtSumOptions{spec.epsilon, spec.alpha, spec.gamma, spec.c_tree},
          rng.Fork(2));
      if (scaled) mech = std::make_unique<ScaledCounter>(std::move(mech), l1_bound);
      break;
  }
  if (spec.warmup > 0) {
    mech = std::make_unique<RandomWarmupCounter>(std::move(mech), spec.warmup,
                                                 rng.Fork(3));
  }
  for (WrapperKind w : spec.wrappers) {
    switch (w) {
      case WrapperKind::kUnderestimator:
        mech = std::make_unique<UnderestimatorWrapper>(std::move(mech));
        break;
      case WrapperKind::kMonotone:
        mech = std::make_unique<MonotoneWrapper>(std::move(mech));
        break;
      case WrapperKind::kZeroFailure:
        mech = std::make_unique<ZeroFailureWrapper>(std::move(mech));
        break;
    }
  }
  return mech;
}

}  // namespace contcount
