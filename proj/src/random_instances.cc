#include <algorithm>
#include <cmath>

#include "contcount/errors.h"
#include "contcount/games.h"

namespace contcount::random_instances {

namespace {

int UniformInt(RandomSource& rng, int lo, int hi) {
  const uint64_t span = static_cast<uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng.NextU64() % span);
}

// Multiple of 1/64 in [lo, hi].
double Dyadic(RandomSource& rng, double lo, double hi) {
  const int a = static_cast<int>(std::ceil(lo * 64));
  const int b = static_cast<int>(std::floor(hi * 64));
  return UniformInt(rng, a, b) / 64.0;
}

std::vector<int> RandomSubset(int m, RandomSource& rng) {
  std::vector<int> set;
  for (int r = 0; r < m; ++r) {
    if (rng.UniformOpen() < 0.5) set.push_back(r);
  }
  if (set.empty()) set.push_back(UniformInt(rng, 0, m - 1));
  return set;
}

void CheckSizes(int n, int m) {
  if (n < 1) throw ParameterError("n must be >= 1");
  if (m < 1) throw ParameterError("m must be >= 1");
}

}  // namespace

ResourceSharingInstance Resource(int n, int m, RandomSource& rng) {
  CheckSizes(n, m);
  ResourceSharingInstance inst;
  inst.n = n;
  inst.m = m;
  for (int r = 0; r < m; ++r) {
    // Mix of shapes: steep drops, flat stretches, and zeros.
    ValueCurve c;
    double v = Dyadic(rng, 0.0, 4.0);
    for (int k = 0; k < n; ++k) {
      c.values.push_back(v);
      const double u = rng.UniformOpen();
      if (u < 0.3) {
        v = Dyadic(rng, 0.0, v);
      } else if (u < 0.4) {
        v = 0.0;
      }
    }
    inst.curves.push_back(c);
  }
  for (int i = 0; i < n; ++i) inst.action_sets.push_back(RandomSubset(m, rng));
  inst.Validate();
  return inst;
}

CutInstance Cut(int n, double p, RandomSource& rng) {
  CheckSizes(n, 1);
  CutInstance inst;
  inst.n = n;
  inst.adj.resize(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.UniformOpen() < p) {
        inst.adj[u].push_back(v);
        inst.adj[v].push_back(u);
      }
    }
  }
  inst.Validate();
  return inst;
}

SchedulingInstance Scheduling(int n, int m, RandomSource& rng) {
  CheckSizes(n, m);
  SchedulingInstance inst;
  inst.n = n;
  inst.m = m;
  inst.sizes.assign(n, std::vector<double>(m));
  for (auto& row : inst.sizes) {
    for (double& t : row) t = Dyadic(rng, 0.0, 4.0);
  }
  inst.Validate();
  return inst;
}

CostSharingInstance CostSharing(int n, int m, RandomSource& rng) {
  CheckSizes(n, m);
  CostSharingInstance inst;
  inst.n = n;
  inst.m = m;
  for (int s = 0; s < m; ++s) inst.costs.push_back(Dyadic(rng, 1.0 / 64, 4.0));
  for (int i = 0; i < n; ++i) inst.allowed.push_back(RandomSubset(m, rng));
  inst.Validate();
  return inst;
}

ResourceSharingInstance Market(int n, int m, RandomSource& rng) {
  CheckSizes(n, m);
  ResourceSharingInstance inst;
  inst.n = n;
  inst.m = m;
  for (int r = 0; r < m; ++r) {
    inst.curves.push_back(instances::MarketCurve(Dyadic(rng, 1.0 / 64, 8.0), n));
  }
  for (int i = 0; i < n; ++i) inst.action_sets.push_back(RandomSubset(m, rng));
  inst.Validate();
  return inst;
}

ResourceSharingInstance Future(int n, int m, RandomSource& rng) {
  CheckSizes(n, m);
  ResourceSharingInstance inst;
  inst.n = n;
  inst.m = m;
  for (int r = 0; r < m; ++r) {
    // v(k) = v0 / (1 + k/s): shallow, with w growing like log n.
    const double v0 = Dyadic(rng, 1.0, 8.0);
    const double s = Dyadic(rng, 0.5, 4.0);
    ValueCurve c;
    for (int k = 0; k < n; ++k) c.values.push_back(v0 / (1.0 + k / s));
    inst.curves.push_back(c);
  }
  for (int i = 0; i < n; ++i) inst.action_sets.push_back(RandomSubset(m, rng));
  inst.Validate();
  return inst;
}

GameInstance Make(GameKind kind, int n, int m, RandomSource& rng) {
  GameInstance inst;
  inst.kind = kind;
  switch (kind) {
    case GameKind::kResource:
      inst.resource = Resource(n, m, rng);
      break;
    case GameKind::kCut:
      inst.cut = Cut(n, std::min(1.0, 4.0 / std::max(1, n - 1)), rng);
      break;
    case GameKind::kScheduling:
      inst.scheduling = Scheduling(n, m, rng);
      break;
    case GameKind::kCost:
      inst.cost = CostSharing(n, m, rng);
      break;
    case GameKind::kFuture:
      inst.resource = Future(n, m, rng);
      break;
  }
  return inst;
}

}  // namespace contcount::random_instances
