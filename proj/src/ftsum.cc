#include "contcount/counters.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "contcount/errors.h"

namespace contcount {

namespace {

void CheckFtOptions(int n, int m, const FtSumOptions& o) {
  if (n < 1) throw ParameterError("n must be >= 1");
  if (m < 1) throw ParameterError("m must be >= 1");
  PrivacyBudget{o.epsilon, 0.0}.Validate();
  if (!(o.alpha > 1.0)) throw ParameterError("alpha must be > 1");
  if (!(o.gamma > 0.0 && o.gamma < 1.0)) {
    throw ParameterError("gamma must be in (0, 1)");
  }
  if (!(o.c_tree > 0.0)) throw ParameterError("c_tree must be > 0");
}

double SvtScale(double eps_prime) {
  return std::isinf(eps_prime) ? 0.0 : 2.0 / eps_prime;
}

}  // namespace

int FtSum::PhaseSwitchIndex(int n, int m, const FtSumOptions& o,
                            bool* clamped) {
  CheckFtOptions(n, m, o);
  const double arg = o.alpha / (o.alpha - 1.0) * o.c_tree *
                     std::log2(static_cast<double>(n) * m / o.gamma) /
                     o.epsilon;
  double k = std::ceil(std::log(arg) / std::log(o.alpha));
  const bool clamp = !(k >= 1.0);
  if (clamped != nullptr) *clamped = clamp;
  return clamp ? 1 : static_cast<int>(k);
}

double FtSum::PhaseOneBound(int n, int m, const FtSumOptions& o) {
  const int k = PhaseSwitchIndex(n, m, o);
  const double eps_prime = o.epsilon / (2.0 * m * (k + 1));
  const double draws = static_cast<double>(n) * m + static_cast<double>(m) * (k + 2);
  return 2.0 * SvtScale(eps_prime) * std::log(2.0 * draws / o.gamma) +
         std::log2(static_cast<double>(n));
}

double FtSum::DeclaredBeta(int n, int m, const FtSumOptions& o) {
  const int k = PhaseSwitchIndex(n, m, o);
  const double e1 = PhaseOneBound(n, m, o);
  const double b2 =
      TreeSum::AdditiveBound(n, m, o.epsilon / 2.0, o.gamma / 2.0, o.c_tree);
  const double last_threshold =
      std::log2(static_cast<double>(n)) * std::pow(o.alpha, k);
  const double residual =
      b2 - (1.0 - 1.0 / o.alpha) * std::max(0.0, last_threshold - e1);
  return std::max(e1, residual);
}

FtSum::FtSum(int n, int m, FtSumOptions options, RandomSource rng)
    : CounterMechanism(n, m),
      options_(options),
      k_(0),
      log_n_(std::log2(static_cast<double>(n))),
      tree_(n, m,
            TreeSumOptions{options.epsilon / 2.0, options.gamma / 2.0,
                           options.c_tree},
            rng.Fork(0)) {
  bool clamped = false;
  k_ = PhaseSwitchIndex(n, m, options_, &clamped);
  if (clamped) {
    std::clog << "warning: ftsum phase-switch index clamped to k=1 (n=" << n
              << ", eps=" << options_.epsilon << ")\n";
  }
  budget_.per_comparison = options_.epsilon / (2.0 * m * (k_ + 1));
  budget_.phase_one = m * (k_ + 1) * budget_.per_comparison;
  budget_.tree = options_.epsilon / 2.0;
  budget_.total = budget_.phase_one + budget_.tree;
  if (budget_.total > options_.epsilon * (1.0 + 1e-12)) {
    throw ParameterError("ftsum budget accounting exceeds epsilon");
  }

  flags_.assign(m, 0);
  running_.assign(m, 0.0);
  thresholds_.resize(m);
  coord_rngs_.reserve(m);
  const double scale = SvtScale(budget_.per_comparison);
  for (int r = 0; r < m; ++r) {
    coord_rngs_.push_back(rng.Fork(1000 + r));
    thresholds_[r] = log_n_ + Laplace(scale, coord_rngs_[r]);
  }
}

double FtSum::PhaseOneValue(int flag_count) const {
  if (flag_count <= 0) return 0.0;
  return log_n_ * std::pow(options_.alpha, flag_count - 1);
}

AccuracyEnvelope FtSum::envelope() const {
  return {options_.alpha,
          DeclaredBeta(horizon(), dimension(), options_), options_.gamma,
          false};
}

std::string FtSum::Describe() const {
  std::ostringstream out;
  out << "ftsum(eps=" << options_.epsilon << ",alpha=" << options_.alpha
      << ",k=" << k_ << ")";
  return out.str();
}

void FtSum::Step(std::span<const double> a, std::vector<double>& release) {
  const std::vector<double>& tree_release = tree_.Update(a);
  const double scale = SvtScale(budget_.per_comparison);
  for (int r = 0; r < dimension(); ++r) {
    if (flags_[r] <= k_) {
      running_[r] += a[r];
      const double noisy = running_[r] + Laplace(scale, coord_rngs_[r]);
      if (noisy > thresholds_[r]) {
        ++flags_[r];
        thresholds_[r] = log_n_ * std::pow(options_.alpha, flags_[r]) +
                         Laplace(scale, coord_rngs_[r]);
      }
      release[r] = PhaseOneValue(flags_[r]);
    } else {
      release[r] = tree_release[r];
    }
  }
}

}  // namespace contcount
