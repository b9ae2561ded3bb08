#include "contcount/counters.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "contcount/errors.h"

namespace contcount {

namespace {

int CeilLog2(int n) {
  int levels = 0;
  while ((1LL << levels) < n) ++levels;
  return levels;
}

void CheckTreeOptions(const TreeSumOptions& o) {
  PrivacyBudget{o.epsilon, 0.0}.Validate();
  if (!(o.gamma > 0.0 && o.gamma < 1.0)) {
    throw ParameterError("gamma must be in (0, 1)");
  }
  if (!(o.c_tree > 0.0)) throw ParameterError("c_tree must be > 0");
}

}  // namespace

TreeSum::TreeSum(int n, int m, TreeSumOptions options, RandomSource rng)
    : CounterMechanism(n, m),
      options_(options),
      levels_(CeilLog2(n) + 1),
      node_scale_(0.0) {
  CheckTreeOptions(options_);
  node_scale_ = std::isinf(options_.epsilon) ? 0.0 : levels_ / options_.epsilon;
  coord_rngs_.reserve(m);
  for (int r = 0; r < m; ++r) coord_rngs_.push_back(rng.Fork(r));
  slots_.resize(levels_);
  live_.assign(levels_, false);
}

double TreeSum::AdditiveBound(int n, int m, double epsilon, double gamma,
                              double c_tree) {
  // log2(n) is floored at 1: a one-step tree still draws one noisy node.
  return c_tree * std::max(1.0, std::log2(static_cast<double>(n))) *
         std::log2(static_cast<double>(n) * m / gamma) / epsilon;
}

AccuracyEnvelope TreeSum::envelope() const {
  return {1.0,
          AdditiveBound(horizon(), dimension(), options_.epsilon,
                        options_.gamma, options_.c_tree),
          options_.gamma, false};
}

std::string TreeSum::Describe() const {
  std::ostringstream out;
  out << "treesum(eps=" << options_.epsilon << ",levels=" << levels_ << ")";
  return out.str();
}

void TreeSum::Step(std::span<const double> a, std::vector<double>& release) {
  const int t = time();
  const int m = dimension();
  // Exactly one node completes per step: the one at the lowest set bit of t.
  // It absorbs the live nodes below it, which are its dyadic children.
  const int level = std::countr_zero(static_cast<unsigned>(t));
  Node node;
  node.level = level;
  node.end = t;
  node.start = t - (1 << level) + 1;
  node.exact.assign(a.begin(), a.end());
  for (int l = 0; l < level; ++l) {
    if (!live_[l]) continue;
    for (int r = 0; r < m; ++r) node.exact[r] += slots_[l].exact[r];
    live_[l] = false;
  }
  node.noise.resize(m);
  for (int r = 0; r < m; ++r) node.noise[r] = Laplace(node_scale_, coord_rngs_[r]);
  slots_[level] = std::move(node);
  live_[level] = true;

  for (int r = 0; r < m; ++r) {
    double y = 0.0;
    for (int l = levels_ - 1; l >= 0; --l) {
      if (live_[l]) y += slots_[l].exact[r] + slots_[l].noise[r];
    }
    release[r] = y;
  }
}

std::vector<TreeSum::Node> TreeSum::CoveringNodes() const {
  std::vector<Node> nodes;
  for (int l = levels_ - 1; l >= 0; --l) {
    if (live_[l]) nodes.push_back(slots_[l]);
  }
  return nodes;
}

}  // namespace contcount
