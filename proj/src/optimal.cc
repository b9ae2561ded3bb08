#include "contcount/optimal.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "contcount/errors.h"
#include "contcount/strategies.h"

namespace contcount {

namespace {

// Rectangular Hungarian algorithm (rows <= cols), minimizing total cost.
// Returns the column assigned to each row.
std::vector<int> Hungarian(const std::vector<std::vector<double>>& a) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(a[0].size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) col[p[j] - 1] = j - 1;
  }
  return col;
}

double CountAssignments(const std::vector<int>& sizes) {
  double total = 1.0;
  for (int s : sizes) total *= s;
  return total;
}

[[noreturn]] void TooLarge(const std::string& what) { throw SizeError(what); }

}  // namespace

bool IsMaximization(GameKind kind) {
  return kind != GameKind::kScheduling && kind != GameKind::kCost;
}

OptResult OptResourceSharing(const ResourceSharingInstance& inst, OptMode mode) {
  inst.Validate();
  if (mode == OptMode::kGreedyUpperBound) {
    PerfectCounter perfect(inst.n, inst.m);
    const PlayTrace trace =
        PlayResourceSharing(inst, perfect, Strategy::Greedy());
    OptResult res;
    res.value = 4.0 * trace.sw;
    for (const auto& rec : trace.players) res.witness.push_back(rec.action);
    res.method = "greedy-upper-bound";
    res.exact = false;
    return res;
  }

  // Slot columns: resource r gets one copy per player allowed to use it.
  std::vector<int> slot_resource;
  std::vector<int> slot_copy;
  std::vector<int> users(inst.m, 0);
  for (const auto& set : inst.action_sets) {
    for (int r : set) ++users[r];
  }
  for (int r = 0; r < inst.m; ++r) {
    for (int k = 0; k < std::min(users[r], inst.n); ++k) {
      slot_resource.push_back(r);
      slot_copy.push_back(k);
    }
  }
  const int cols = static_cast<int>(slot_resource.size());
  if (inst.n > 400 || cols > 20000 ||
      static_cast<double>(inst.n) * inst.n * cols > 4e9) {
    std::ostringstream msg;
    msg << "resource-sharing instance too large for exact matching (n="
        << inst.n << ", slots=" << cols << ")";
    TooLarge(msg.str());
  }

  double maxw = 0.0;
  for (const auto& c : inst.curves) maxw = std::max(maxw, c.values.front());
  const double forbidden = inst.n * maxw + 1.0;
  std::vector<std::vector<double>> cost(inst.n, std::vector<double>(cols, forbidden));
  for (int i = 0; i < inst.n; ++i) {
    std::vector<char> ok(inst.m, 0);
    for (int r : inst.action_sets[i]) ok[r] = 1;
    for (int j = 0; j < cols; ++j) {
      if (ok[slot_resource[j]]) {
        cost[i][j] = maxw - inst.curves[slot_resource[j]].Value(slot_copy[j]);
      }
    }
  }
  const std::vector<int> col = Hungarian(cost);

  OptResult res;
  res.method = "matching";
  res.witness.resize(inst.n);
  for (int i = 0; i < inst.n; ++i) res.witness[i] = slot_resource[col[i]];
  // Curves are nonincreasing, so the lowest copies of each resource carry
  // the matched weight; re-evaluating the witness gives the optimum.
  res.value = ResourceWelfare(inst, res.witness);
  return res;
}

OptResult OptScheduling(const SchedulingInstance& inst) {
  inst.Validate();
  if (std::pow(static_cast<double>(inst.m), inst.n) > 1e7) {
    std::ostringstream msg;
    msg << "scheduling instance too large for exhaustive search (" << inst.m
        << "^" << inst.n << " placements)";
    TooLarge(msg.str());
  }
  OptResult res;
  res.method = "branch-and-bound";
  res.lower_bound = inst.SumMinSizes() / inst.m;

  // Seed the incumbent with every job on its fastest machine.
  std::vector<int> current(inst.n);
  for (int k = 0; k < inst.n; ++k) current[k] = inst.MinMachine(k);
  double best = Makespan(inst, current);
  std::vector<int> best_assign = current;

  std::vector<double> load(inst.m, 0.0);
  std::function<void(int, double)> dfs = [&](int k, double span) {
    if (span >= best) return;
    if (k == inst.n) {
      best = span;
      best_assign = current;
      return;
    }
    for (int q = 0; q < inst.m; ++q) {
      load[q] += inst.sizes[k][q];
      current[k] = q;
      dfs(k + 1, std::max(span, load[q]));
      load[q] -= inst.sizes[k][q];
    }
  };
  dfs(0, 0.0);
  res.witness = best_assign;
  res.value = Makespan(inst, res.witness);
  return res;
}

OptResult OptCut(const CutInstance& inst) {
  inst.Validate();
  OptResult res;

  // Two-coloring by BFS; success means every edge can be cut.
  std::vector<int> color(inst.n, -1);
  bool bipartite = true;
  for (int s = 0; s < inst.n && bipartite; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::queue<int> queue;
    queue.push(s);
    while (!queue.empty() && bipartite) {
      const int u = queue.front();
      queue.pop();
      for (int v : inst.adj[u]) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          queue.push(v);
        } else if (color[v] == color[u]) {
          bipartite = false;
        }
      }
    }
  }
  if (bipartite) {
    res.method = "closed-form";
    res.witness = color;
    res.value = CutWelfare(inst, color);
    return res;
  }

  if (inst.n > 24) {
    std::ostringstream msg;
    msg << "non-bipartite cut instance with " << inst.n
        << " nodes is too large for enumeration";
    TooLarge(msg.str());
  }
  // Node 0 stays color 0; Gray code over the rest flips one node per step.
  std::vector<int> cur(inst.n, 0);
  long long cut = 0;
  long long best = 0;
  std::vector<int> best_colors = cur;
  const long long steps = 1LL << (inst.n - 1);
  for (long long g = 1; g < steps; ++g) {
    const int u = 1 + __builtin_ctzll(static_cast<unsigned long long>(g));
    for (int v : inst.adj[u]) cut += cur[v] == cur[u] ? 1 : -1;
    cur[u] ^= 1;
    if (cut > best) {
      best = cut;
      best_colors = cur;
    }
  }
  res.method = "brute-force";
  res.witness = best_colors;
  res.value = CutWelfare(inst, best_colors);
  return res;
}

OptResult OptCostSharing(const CostSharingInstance& inst) {
  inst.Validate();
  std::vector<std::vector<int>> members(inst.m);
  for (int i = 0; i < inst.n; ++i) {
    for (int s : inst.allowed[i]) members[s].push_back(i);
  }
  // Incumbent from greedy set cover: repeatedly take the set with the lowest
  // cost per newly covered player.
  std::vector<int> cover(inst.n, 0);
  double best = 0.0;
  std::vector<char> best_family(inst.m, 0);
  {
    std::vector<char> covered(inst.n, 0);
    int left = inst.n;
    while (left > 0) {
      int pick = -1;
      double pick_ratio = 0.0;
      for (int s = 0; s < inst.m; ++s) {
        if (best_family[s]) continue;
        int fresh = 0;
        for (int i : members[s]) fresh += covered[i] ? 0 : 1;
        if (fresh == 0) continue;
        const double ratio = inst.costs[s] / fresh;
        if (pick < 0 || ratio < pick_ratio) {
          pick = s;
          pick_ratio = ratio;
        }
      }
      best_family[pick] = 1;
      best += inst.costs[pick];
      for (int i : members[pick]) {
        if (!covered[i]) {
          covered[i] = 1;
          --left;
        }
      }
    }
  }

  long long nodes = 0;
  std::vector<char> family(inst.m, 0);
  std::function<void(double)> dfs = [&](double spent) {
    if (++nodes > 10000000) {
      TooLarge("cost-sharing search exceeded 1e7 nodes");
    }
    // Any uncovered player still needs one of its sets.
    int pick = -1;
    size_t fewest = 0;
    double need = 0.0;
    for (int i = 0; i < inst.n; ++i) {
      if (cover[i] > 0) continue;
      double cheapest = kInfinity;
      for (int s : inst.allowed[i]) cheapest = std::min(cheapest, inst.costs[s]);
      need = std::max(need, cheapest);
      if (pick < 0 || inst.allowed[i].size() < fewest) {
        pick = i;
        fewest = inst.allowed[i].size();
      }
    }
    if (spent + need >= best) return;
    if (pick < 0) {
      best = spent;
      best_family = family;
      return;
    }
    std::vector<int> options = inst.allowed[pick];
    std::sort(options.begin(), options.end(), [&](int x, int y) {
      return inst.costs[x] < inst.costs[y] || (inst.costs[x] == inst.costs[y] && x < y);
    });
    for (int s : options) {
      family[s] = 1;
      for (int i : members[s]) ++cover[i];
      dfs(spent + inst.costs[s]);
      for (int i : members[s]) --cover[i];
      family[s] = 0;
    }
  };
  dfs(0.0);

  OptResult res;
  res.method = "branch-and-bound";
  res.witness.resize(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    int pick = -1;
    for (int s : inst.allowed[i]) {
      if (best_family[s] && (pick < 0 || inst.costs[s] < inst.costs[pick])) pick = s;
    }
    res.witness[i] = pick;
  }
  res.value = CoverCost(inst, res.witness);
  return res;
}

OptResult OptFutureDependent(const ResourceSharingInstance& inst) {
  inst.Validate();
  std::vector<int> sizes;
  for (const auto& a : inst.action_sets) sizes.push_back(static_cast<int>(a.size()));
  if (CountAssignments(sizes) > 1e7) {
    TooLarge("future-dependent instance exceeds 1e7 assignments");
  }
  std::vector<int> current(inst.n, 0);
  std::vector<int> best_assign;
  double best = -1.0;
  std::function<void(int)> dfs = [&](int i) {
    if (i == inst.n) {
      const double w = FutureWelfare(inst, current);
      if (w > best) {
        best = w;
        best_assign = current;
      }
      return;
    }
    for (int r : inst.action_sets[i]) {
      current[i] = r;
      dfs(i + 1);
    }
  };
  dfs(0);
  OptResult res;
  res.method = "brute-force";
  res.witness = best_assign;
  res.value = best;
  return res;
}

OptResult Optimum(const GameInstance& inst, OptMode mode) {
  switch (inst.kind) {
    case GameKind::kResource:
      return OptResourceSharing(inst.resource, mode);
    case GameKind::kCut:
      return OptCut(inst.cut);
    case GameKind::kScheduling:
      return OptScheduling(inst.scheduling);
    case GameKind::kCost:
      return OptCostSharing(inst.cost);
    case GameKind::kFuture:
      return OptFutureDependent(inst.resource);
  }
  throw ValidationError("unknown game kind");
}

}  // namespace contcount
