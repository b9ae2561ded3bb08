#ifndef CONTCOUNT_COUNTERS_H_
#define CONTCOUNT_COUNTERS_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "contcount/noise.h"

namespace contcount {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// (epsilon, delta) differential-privacy parameters.
struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 0.0;

  // Throws ParameterError unless epsilon > 0 and delta in [0, 1).
  // epsilon = +inf is accepted and means "no privacy" (zero noise).
  void Validate() const;
};

// Mixed multiplicative/additive accuracy contract. A released value y for
// true count x is inside iff x/alpha - beta <= y <= alpha*x + beta; for an
// underestimator the upper end is x itself. Contains() allows a relative
// slack of 1e-12 for rounding at the edges.
struct AccuracyEnvelope {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
  bool underestimator = false;

  double Lower(double x) const { return x / alpha - beta; }
  double Upper(double x) const {
    return underestimator ? x : alpha * x + beta;
  }
  bool Contains(double x, double y) const;
  void Validate() const;
};

// Checks that `a` is a nonnegative vector of dimension m with l1 norm at most
// `l1_bound` (Delta_m when l1_bound == 1). Throws ValidationError.
void ValidateUpdate(std::span<const double> a, int m, double l1_bound = 1.0);

// Streaming counter vector: observe one update per time step, release one
// estimate vector per step. Current() before any update is the release shown
// to the first observer; Update(a_t) returns the release after a_1..a_t.
//
// Base mechanisms accept Delta_m updates. Mechanisms built with l1_bound > 1
// (see ScaledCounter) accept nonnegative updates with ||a||_1 <= l1_bound.
class CounterMechanism {
 public:
  CounterMechanism(int horizon, int dimension, double l1_bound = 1.0);
  virtual ~CounterMechanism() = default;

  CounterMechanism(const CounterMechanism&) = delete;
  CounterMechanism& operator=(const CounterMechanism&) = delete;

  int horizon() const { return horizon_; }
  int dimension() const { return dimension_; }
  int time() const { return time_; }
  double l1_bound() const { return l1_bound_; }

  const std::vector<double>& Current() const { return release_; }
  const std::vector<double>& TrueCounts() const { return true_counts_; }

  // Throws StateError past the horizon, ValidationError for a bad update.
  const std::vector<double>& Update(std::span<const double> a);

  virtual AccuracyEnvelope envelope() const = 0;
  virtual PrivacyBudget privacy() const = 0;
  virtual std::string Describe() const = 0;

 protected:
  // Computes the release for the new time step; `release` holds the previous
  // release on entry. time() has already been advanced.
  virtual void Step(std::span<const double> a, std::vector<double>& release) = 0;

  void SetInitialRelease(std::vector<double> release);

 private:
  int horizon_;
  int dimension_;
  double l1_bound_;
  int time_ = 0;
  std::vector<double> release_;
  std::vector<double> true_counts_;
};

using MechanismPtr = std::unique_ptr<CounterMechanism>;

// Releases exact prefix sums. Envelope (1, 0, 0), no privacy.
class PerfectCounter : public CounterMechanism {
 public:
  PerfectCounter(int n, int m, double l1_bound = 1.0);
  AccuracyEnvelope envelope() const override { return {1.0, 0.0, 0.0, true}; }
  PrivacyBudget privacy() const override { return {kInfinity, 0.0}; }
  std::string Describe() const override { return "perfect"; }

 protected:
  void Step(std::span<const double> a, std::vector<double>& release) override;
};

// Releases the zero vector forever. Carries no accuracy information, which is
// expressed as beta = +inf.
class EmptyCounter : public CounterMechanism {
 public:
  EmptyCounter(int n, int m, double l1_bound = 1.0);
  AccuracyEnvelope envelope() const override {
    return {1.0, kInfinity, 0.0, false};
  }
  PrivacyBudget privacy() const override { return {0.0, 0.0}; }
  std::string Describe() const override { return "empty"; }

 protected:
  void Step(std::span<const double>, std::vector<double>&) override {}
};

// ---------------------------------------------------------------------------
// TreeSum: m independent binary-tree counters sharing one budget.

struct TreeSumOptions {
  double epsilon = 1.0;
  // Failure probability used only for the declared additive bound.
  double gamma = 0.1;
  // Constant of the additive bound; implementation-chosen default.
  double c_tree = 4.0;
};

class TreeSum : public CounterMechanism {
 public:
  // One dyadic node of the tree, with per-coordinate exact sum and noise.
  struct Node {
    int level = 0;
    int start = 0;  // first time step covered, 1-based
    int end = 0;    // last time step covered, inclusive
    std::vector<double> exact;
    std::vector<double> noise;
  };

  // Throws ParameterError for n < 1, m < 1, or invalid options.
  TreeSum(int n, int m, TreeSumOptions options, RandomSource rng);

  // ceil(log2 n) + 1.
  int levels() const { return levels_; }
  // Laplace scale of every node: levels / epsilon.
  double node_noise_scale() const { return node_scale_; }
  const TreeSumOptions& options() const { return options_; }

  // Nodes whose sum is the current release, highest level first. Their
  // (exact + noise) terms, added in this order, reproduce Current() bit for
  // bit.
  std::vector<Node> CoveringNodes() const;

  // C_tree * max(1, log2 n) * log2(n*m/gamma) / epsilon.
  static double AdditiveBound(int n, int m, double epsilon, double gamma,
                              double c_tree);

  AccuracyEnvelope envelope() const override;
  PrivacyBudget privacy() const override { return {options_.epsilon, 0.0}; }
  std::string Describe() const override;

 protected:
  void Step(std::span<const double> a, std::vector<double>& release) override;

 private:
  TreeSumOptions options_;
  int levels_;
  double node_scale_;
  std::vector<RandomSource> coord_rngs_;
  // slots_[l] is the most recent completed node at level l, if live.
  std::vector<Node> slots_;
  std::vector<bool> live_;
};

// ---------------------------------------------------------------------------
// FTSum: flag phase (sparse vector at thresholds log n * alpha^j) followed by
// the TreeSum phase, per coordinate. All logarithms are base 2.

struct FtSumOptions {
  double epsilon = 1.0;
  double alpha = 2.0;
  double gamma = 0.1;
  double c_tree = 4.0;
};

struct FtSumBudget {
  double per_comparison = 0.0;  // epsilon'
  double phase_one = 0.0;       // m * (k + 1) * epsilon'
  double tree = 0.0;            // epsilon / 2
  double total = 0.0;           // phase_one + tree
};

class FtSum : public CounterMechanism {
 public:
  // Throws ParameterError for alpha <= 1, gamma outside (0, 1), epsilon <= 0,
  // c_tree <= 0, n < 1 or m < 1.
  FtSum(int n, int m, FtSumOptions options, RandomSource rng);

  // ceil(log_alpha(alpha/(alpha-1) * c_tree * log2(n*m/gamma) / epsilon)),
  // clamped to at least 1. `clamped` reports whether the clamp fired.
  static int PhaseSwitchIndex(int n, int m, const FtSumOptions& options,
                              bool* clamped = nullptr);

  // Documented phase-one additive constant E1:
  //   2 * (2/eps') * ln(2 * D / gamma) + log2(n),  D = n*m + m*(k+2)
  // where D bounds the number of phase-one Laplace draws. Each draw stays
  // below (2/eps') ln(2D/gamma) in magnitude with probability >= 1 - gamma/2,
  // and a flag compares two draws.
  static double PhaseOneBound(int n, int m, const FtSumOptions& options);

  // Declared beta: max(E1, B2 - (1 - 1/alpha) * max(0, A - E1)), with
  // B2 the embedded TreeSum's bound at budget epsilon/2 and failure gamma/2,
  // and A = log2(n) * alpha^k the last threshold.
  static double DeclaredBeta(int n, int m, const FtSumOptions& options);

  int k() const { return k_; }
  double log_n() const { return log_n_; }
  const FtSumBudget& budget() const { return budget_; }
  const FtSumOptions& options() const { return options_; }

  int flags(int r) const { return flags_[r]; }
  double threshold(int r) const { return thresholds_[r]; }
  bool in_phase_two(int r) const { return flags_[r] > k_; }
  const TreeSum& tree() const { return tree_; }

  // Phase-one release for a flag count: 0 before the first flag, then
  // log2(n) * alpha^(flags - 1).
  double PhaseOneValue(int flag_count) const;

  AccuracyEnvelope envelope() const override;
  PrivacyBudget privacy() const override { return {options_.epsilon, 0.0}; }
  std::string Describe() const override;

 protected:
  void Step(std::span<const double> a, std::vector<double>& release) override;

 private:
  FtSumOptions options_;
  int k_;
  double log_n_;
  FtSumBudget budget_;
  std::vector<int> flags_;
  std::vector<double> running_;
  std::vector<double> thresholds_;
  std::vector<RandomSource> coord_rngs_;
  TreeSum tree_;
};

// ---------------------------------------------------------------------------
// Randomized warm-up: the first `warmup` releases show an independent
// Uniform[0, warmup] value per coordinate, after which the inner mechanism's
// release is shown. The inner mechanism observes every update from t = 1.
// Declared envelope (max(1, inner alpha), max(warmup, inner beta), inner
// gamma).
class RandomWarmupCounter : public CounterMechanism {
 public:
  RandomWarmupCounter(MechanismPtr inner, int warmup, RandomSource rng);

  int warmup() const { return warmup_; }

  AccuracyEnvelope envelope() const override;
  PrivacyBudget privacy() const override { return inner_->privacy(); }
  std::string Describe() const override;

 protected:
  void Step(std::span<const double> a, std::vector<double>& release) override;

 private:
  void DrawUniform(std::vector<double>& release);

  MechanismPtr inner_;
  int warmup_;
  RandomSource rng_;
};

// ---------------------------------------------------------------------------
// Wrappers. Each owns the wrapped mechanism and tracks true counts itself.

// Feeds a / bound to an inner Delta_m mechanism and scales releases back by
// `bound`, so updates with ||a||_1 <= bound are accepted. Noise and beta
// scale by `bound`; privacy is unchanged.
class ScaledCounter : public CounterMechanism {
 public:
  ScaledCounter(MechanismPtr inner, double bound);

  AccuracyEnvelope envelope() const override;
  PrivacyBudget privacy() const override { return inner_->privacy(); }
  std::string Describe() const override;
  const CounterMechanism& inner() const { return *inner_; }

 protected:
  void Step(std::span<const double> a, std::vector<double>& release) override;

 private:
  MechanismPtr inner_;
  double bound_;
  std::vector<double> scratch_;
};

// Releases y' = (y - beta) / alpha. Turns an (alpha, beta) counter into an
// (alpha^2, 2*beta/alpha) underestimator.
class UnderestimatorWrapper : public CounterMechanism {
 public:
  explicit UnderestimatorWrapper(MechanismPtr inner);

  static double Shift(double y, double alpha, double beta) {
    return (y - beta) / alpha;
  }

  AccuracyEnvelope envelope() const override;
  PrivacyBudget privacy() const override { return inner_->privacy(); }
  std::string Describe() const override;

 protected:
  void Step(std::span<const double> a, std::vector<double>& release) override;

 private:
  MechanismPtr inner_;
  AccuracyEnvelope inner_env_;
};

// Releases the nearest monotone integral sequence: starts at 0 and steps up
// by one exactly when the wrapped value exceeds the current report by more
// than 1/2. Declared beta grows by 1.
class MonotoneWrapper : public CounterMechanism {
 public:
  explicit MonotoneWrapper(MechanismPtr inner);

  // One step of the increment rule.
  static double Next(double reported, double wrapped) {
    return wrapped > reported + 0.5 ? reported + 1.0 : reported;
  }

  AccuracyEnvelope envelope() const override;
  PrivacyBudget privacy() const override { return inner_->privacy(); }
  std::string Describe() const override;

 protected:
  void Step(std::span<const double> a, std::vector<double>& release) override;

 private:
  MechanismPtr inner_;
};

// Clamps every release into the wrapped mechanism's declared envelope using
// the true count, so the envelope holds with probability 1. Declared gamma
// becomes 0 and delta grows by the wrapped gamma.
class ZeroFailureWrapper : public CounterMechanism {
 public:
  explicit ZeroFailureWrapper(MechanismPtr inner);

  static double Clamp(double x, double y, const AccuracyEnvelope& env);

  AccuracyEnvelope envelope() const override;
  PrivacyBudget privacy() const override;
  std::string Describe() const override;

 protected:
  void Step(std::span<const double> a, std::vector<double>& release) override;

 private:
  MechanismPtr inner_;
  AccuracyEnvelope inner_env_;
};

// ---------------------------------------------------------------------------
// Declarative construction, shared by the CLI and the experiment harness.

enum class MechanismKind { kTreeSum, kFtSum, kPerfect, kEmpty };
enum class WrapperKind { kUnderestimator, kMonotone, kZeroFailure };

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kPerfect;
  double epsilon = 1.0;
  double alpha = 2.0;
  double gamma = 0.1;
  double c_tree = 4.0;
  bool zero_noise = false;
  // Randomized warm-up prefix length (0 = none), applied before wrappers.
  int warmup = 0;
  // Applied innermost first.
  std::vector<WrapperKind> wrappers;
};

MechanismKind ParseMechanismKind(const std::string& name);
WrapperKind ParseWrapperKind(const std::string& name);
std::string MechanismKindName(MechanismKind kind);
std::string WrapperKindName(WrapperKind kind);

// Builds the mechanism for an n-step, m-coordinate stream whose updates have
// l1 norm at most `l1_bound`. Noisy base mechanisms are wrapped in a
// ScaledCounter when l1_bound > 1.
MechanismPtr MakeMechanism(const MechanismSpec& spec, int n, int m,
                           double l1_bound, RandomSource rng);

}  // namespace contcount

#endif  // CONTCOUNT_COUNTERS_H_
