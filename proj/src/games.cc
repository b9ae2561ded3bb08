#include "contcount/games.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "contcount/errors.h"
#include "contcount/strategies.h"

namespace contcount {

namespace {

void CheckMechanism(const CounterMechanism& mech, const CounterShape& shape) {
  if (mech.dimension() != shape.dimension) {
    std::ostringstream msg;
    msg << "counter dimension " << mech.dimension() << " does not match game ("
        << shape.dimension << ")";
    throw ValidationError(msg.str());
  }
  if (mech.horizon() - mech.time() < shape.horizon) {
    std::ostringstream msg;
    msg << "counter has " << mech.horizon() - mech.time()
        << " steps left, game needs " << shape.horizon;
    throw ValidationError(msg.str());
  }
  if (mech.l1_bound() < shape.l1_bound) {
    std::ostringstream msg;
    msg << "counter accepts updates of l1 norm " << mech.l1_bound()
        << ", game needs " << shape.l1_bound;
    throw ValidationError(msg.str());
  }
}

bool InsideEnvelope(const CounterMechanism& mech) {
  const AccuracyEnvelope env = mech.envelope();
  const auto& x = mech.TrueCounts();
  const auto& y = mech.Current();
  for (size_t r = 0; r < x.size(); ++r) {
    if (!env.Contains(x[r], y[r])) return false;
  }
  return true;
}

void CheckIndexList(const std::vector<int>& list, int bound, const char* what,
                    int owner) {
  if (list.empty()) {
    std::ostringstream msg;
    msg << what << " of player " << owner << " is empty";
    throw ValidationError(msg.str());
  }
  for (int j : list) {
    if (j < 0 || j >= bound) {
      std::ostringstream msg;
      msg << what << " of player " << owner << " has index " << j
          << " outside [0, " << bound << ")";
      throw ValidationError(msg.str());
    }
  }
}

}  // namespace

double ValueCurve::Value(long long k) const {
  if (k < 0) k = 0;
  if (k >= static_cast<long long>(values.size())) return values.back();
  return values[static_cast<size_t>(k)];
}

double ValueCurve::At(double y) const {
  if (!(y > 0.0)) return values.front();
  if (y >= static_cast<double>(values.size())) return values.back();
  return values[static_cast<size_t>(std::floor(y))];
}

void ValueCurve::Validate() const {
  if (values.empty()) throw ValidationError("value curve is empty");
  for (size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] >= 0.0) || !std::isfinite(values[k])) {
      throw ValidationError("value curve entries must be finite and >= 0");
    }
    if (k > 0 && values[k] > values[k - 1]) {
      std::ostringstream msg;
      msg << "value curve increases at index " << k;
      throw ValidationError(msg.str());
    }
  }
}

void ResourceSharingInstance::Validate() const {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (m < 1) throw ValidationError("m must be >= 1");
  if (static_cast<int>(curves.size()) != m) {
    throw ValidationError("expected one value curve per resource");
  }
  for (const auto& c : curves) c.Validate();
  if (static_cast<int>(action_sets.size()) != n) {
    throw ValidationError("expected one action set per player");
  }
  for (int i = 0; i < n; ++i) CheckIndexList(action_sets[i], m, "action set", i);
}

int CutInstance::EdgeCount() const {
  int twice = 0;
  for (const auto& nb : adj) twice += static_cast<int>(nb.size());
  return twice / 2;
}

int CutInstance::MaxDegree() const {
  int d = 0;
  for (const auto& nb : adj) d = std::max(d, static_cast<int>(nb.size()));
  return d;
}

void CutInstance::Validate() const {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (static_cast<int>(adj.size()) != n) {
    throw ValidationError("adjacency list size differs from n");
  }
  for (int u = 0; u < n; ++u) {
    std::vector<int> sorted = adj[u];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("graph has a repeated edge");
    }
    for (int v : adj[u]) {
      if (v < 0 || v >= n) throw ValidationError("edge endpoint out of range");
      if (v == u) throw ValidationError("graph has a self-loop");
      if (std::find(adj[v].begin(), adj[v].end(), u) == adj[v].end()) {
        throw ValidationError("adjacency is not symmetric");
      }
    }
  }
}

double SchedulingInstance::MinSize(int k) const {
  return *std::min_element(sizes[k].begin(), sizes[k].end());
}

int SchedulingInstance::MinMachine(int k) const {
  return static_cast<int>(std::min_element(sizes[k].begin(), sizes[k].end()) -
                          sizes[k].begin());
}

double SchedulingInstance::SumMinSizes() const {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += MinSize(k);
  return s;
}

double SchedulingInstance::MaxSize() const {
  double b = 0.0;
  for (const auto& row : sizes) {
    for (double t : row) b = std::max(b, t);
  }
  return b;
}

void SchedulingInstance::Validate() const {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (m < 1) throw ValidationError("m must be >= 1");
  if (static_cast<int>(sizes.size()) != n) {
    throw ValidationError("expected one size row per job");
  }
  for (const auto& row : sizes) {
    if (static_cast<int>(row.size()) != m) {
      throw ValidationError("size row has wrong number of machines");
    }
    for (double t : row) {
      if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("job sizes must be finite and >= 0");
      }
    }
  }
}

void CostSharingInstance::Validate() const {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (m < 1) throw ValidationError("m must be >= 1");
  if (static_cast<int>(costs.size()) != m) {
    throw ValidationError("expected one cost per set");
  }
  for (double c : costs) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw ValidationError("set costs must be finite and > 0");
    }
  }
  if (static_cast<int>(allowed.size()) != n) {
    throw ValidationError("expected one allowed-set list per player");
  }
  for (int i = 0; i < n; ++i) CheckIndexList(allowed[i], m, "allowed sets", i);
}

GameKind ParseGameKind(const std::string& name) {
  if (name == "resource") return GameKind::kResource;
  if (name == "cut") return GameKind::kCut;
  if (name == "scheduling") return GameKind::kScheduling;
  if (name == "cost") return GameKind::kCost;
  if (name == "future") return GameKind::kFuture;
  throw LookupError("unknown game '" + name +
                    "' (expected resource, cut, scheduling, cost or future)");
}

std::string GameKindName(GameKind kind) {
  switch (kind) {
    case GameKind::kResource:
      return "resource";
    case GameKind::kCut:
      return "cut";
    case GameKind::kScheduling:
      return "scheduling";
    case GameKind::kCost:
      return "cost";
    case GameKind::kFuture:
      return "future";
  }
  return "?";
}

int GameInstance::players() const {
  switch (kind) {
    case GameKind::kResource:
    case GameKind::kFuture:
      return resource.n;
    case GameKind::kCut:
      return cut.n;
    case GameKind::kScheduling:
      return scheduling.n;
    case GameKind::kCost:
      return cost.n;
  }
  return 0;
}

CounterShape ShapeFor(const GameInstance& inst) {
  switch (inst.kind) {
    case GameKind::kResource:
    case GameKind::kFuture:
      return {inst.resource.n, inst.resource.m, 1.0};
    case GameKind::kCut:
      // Coordinate 2v + c counts v's neighbors of color c; one player's
      // color touches deg(u) coordinates.
      return {inst.cut.n, 2 * inst.cut.n,
              std::max(1.0, static_cast<double>(inst.cut.MaxDegree()))};
    case GameKind::kScheduling:
      return {inst.scheduling.n, inst.scheduling.m,
              std::max(1.0, inst.scheduling.MaxSize())};
    case GameKind::kCost:
      return {inst.cost.n, inst.cost.m, 1.0};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Engines

PlayTrace PlayResourceSharing(const ResourceSharingInstance& inst,
                              CounterMechanism& mech, const Strategy& strategy,
                              const PlayOptions& options) {
  inst.Validate();
  if (options.quanta < 1) throw ParameterError("quanta must be >= 1");
  GameInstance wrapped{GameKind::kResource, inst, {}, {}, {}};
  CheckMechanism(mech, ShapeFor(wrapped));
  const AccuracyEnvelope env = mech.envelope();
  const double q = options.quanta;

  PlayTrace trace;
  trace.final_usage.assign(inst.m, 0.0);
  trace.envelope_pass = InsideEnvelope(mech);
  std::vector<double> update(inst.m);
  for (int i = 0; i < inst.n; ++i) {
    PlayerRecord rec;
    rec.displayed = mech.Current();
    rec.true_counts = trace.final_usage;
    rec.allocation.assign(inst.m, 0.0);
    const auto& actions = inst.action_sets[i];

    if (options.quanta == 1) {
      ResourceView view{&inst, i, rec.displayed, env, false};
      const int r = strategy.ChooseResource(view);
      rec.action = r;
      rec.allocation[r] = 1.0;
      rec.realized = inst.curves[r].Value(
          static_cast<long long>(trace.final_usage[r]));
      rec.perceived = inst.curves[r].At(rec.displayed[r]);
    } else {
      // Quantum j on r occupies [x + j/Q, x + (j+1)/Q) and is worth v at the
      // floor of its left end, divided by Q.
      std::vector<double> shifted = rec.displayed;
      std::vector<int> chunks(inst.m, 0);
      for (int j = 0; j < options.quanta; ++j) {
        ResourceView view{&inst, i, shifted, env, false};
        const int r = strategy.ChooseResource(view);
        rec.perceived += inst.curves[r].At(shifted[r]) / q;
        rec.realized += inst.curves[r].At(rec.true_counts[r] + chunks[r] / q) / q;
        ++chunks[r];
        shifted[r] = rec.displayed[r] + chunks[r] / q;
      }
      int best = actions.front();
      for (int r : actions) {
        if (chunks[r] > chunks[best]) best = r;
      }
      rec.action = best;
      for (int r = 0; r < inst.m; ++r) rec.allocation[r] = chunks[r] / q;
    }

    for (int r = 0; r < inst.m; ++r) {
      update[r] = rec.allocation[r];
      trace.final_usage[r] += rec.allocation[r];
    }
    trace.sw += rec.realized;
    trace.psw += rec.perceived;
    trace.players.push_back(std::move(rec));
    mech.Update(update);
    trace.envelope_pass = trace.envelope_pass && InsideEnvelope(mech);
  }
  trace.objective = trace.sw;
  return trace;
}

PlayTrace PlayCut(const CutInstance& inst, CounterMechanism& mech,
                  const Strategy& strategy) {
  inst.Validate();
  GameInstance wrapped;
  wrapped.kind = GameKind::kCut;
  wrapped.cut = inst;
  CheckMechanism(mech, ShapeFor(wrapped));
  const AccuracyEnvelope env = mech.envelope();

  PlayTrace trace;
  trace.envelope_pass = InsideEnvelope(mech);
  std::vector<int> colors(inst.n, -1);
  std::vector<double> true_counts(2 * inst.n, 0.0);
  std::vector<double> update(2 * inst.n, 0.0);
  for (int u = 0; u < inst.n; ++u) {
    PlayerRecord rec;
    const auto& y = mech.Current();
    rec.displayed = {y[2 * u], y[2 * u + 1]};
    rec.true_counts = {true_counts[2 * u], true_counts[2 * u + 1]};
    CutView view{&inst, u, rec.displayed[kRed], rec.displayed[kBlue], env};
    const int c = strategy.ChooseColor(view);
    if (c != kRed && c != kBlue) throw StateError("strategy returned no color");
    rec.action = c;
    colors[u] = c;
    rec.perceived = std::max(0.0, rec.displayed[1 - c]);

    std::fill(update.begin(), update.end(), 0.0);
    for (int v : inst.adj[u]) {
      update[2 * v + c] = 1.0;
      true_counts[2 * v + c] += 1.0;
    }
    trace.players.push_back(std::move(rec));
    mech.Update(update);
    trace.envelope_pass = trace.envelope_pass && InsideEnvelope(mech);
  }
  for (int u = 0; u < inst.n; ++u) {
    int opposite = 0;
    for (int v : inst.adj[u]) opposite += colors[v] != colors[u] ? 1 : 0;
    trace.players[u].realized = opposite;
    trace.sw += opposite;
    trace.psw += trace.players[u].perceived;
  }
  trace.final_usage = true_counts;
  trace.objective = trace.sw;
  return trace;
}

PlayTrace PlayScheduling(const SchedulingInstance& inst, CounterMechanism& mech,
                         const Strategy& strategy) {
  inst.Validate();
  GameInstance wrapped;
  wrapped.kind = GameKind::kScheduling;
  wrapped.scheduling = inst;
  CheckMechanism(mech, ShapeFor(wrapped));
  const AccuracyEnvelope env = mech.envelope();

  PlayTrace trace;
  trace.envelope_pass = InsideEnvelope(mech);
  trace.final_usage.assign(inst.m, 0.0);
  std::vector<double> update(inst.m, 0.0);
  for (int k = 0; k < inst.n; ++k) {
    PlayerRecord rec;
    rec.displayed = mech.Current();
    rec.true_counts = trace.final_usage;
    SchedulingView view{&inst, k, rec.displayed, env};
    const int q = strategy.ChooseMachine(view);
    rec.action = q;
    rec.perceived = -(rec.displayed[q] + inst.sizes[k][q]);
    std::fill(update.begin(), update.end(), 0.0);
    update[q] = inst.sizes[k][q];
    trace.final_usage[q] += inst.sizes[k][q];
    trace.players.push_back(std::move(rec));
    mech.Update(update);
    trace.envelope_pass = trace.envelope_pass && InsideEnvelope(mech);
  }
  for (auto& rec : trace.players) {
    rec.realized = -trace.final_usage[rec.action];
    trace.sw += rec.realized;
    trace.psw += rec.perceived;
  }
  trace.objective =
      *std::max_element(trace.final_usage.begin(), trace.final_usage.end());
  return trace;
}

PlayTrace PlayCostSharing(const CostSharingInstance& inst,
                          CounterMechanism& mech, const Strategy& strategy) {
  inst.Validate();
  GameInstance wrapped;
  wrapped.kind = GameKind::kCost;
  wrapped.cost = inst;
  CheckMechanism(mech, ShapeFor(wrapped));
  const AccuracyEnvelope env = mech.envelope();

  PlayTrace trace;
  trace.envelope_pass = InsideEnvelope(mech);
  trace.final_usage.assign(inst.m, 0.0);
  std::vector<double> update(inst.m, 0.0);
  for (int i = 0; i < inst.n; ++i) {
    PlayerRecord rec;
    rec.displayed = mech.Current();
    rec.true_counts = trace.final_usage;
    CostView view{&inst, i, rec.displayed, env};
    const int s = strategy.ChooseSet(view);
    rec.action = s;
    rec.perceived = inst.costs[s] / (std::max(0.0, rec.displayed[s]) + 1.0);
    std::fill(update.begin(), update.end(), 0.0);
    update[s] = 1.0;
    trace.final_usage[s] += 1.0;
    trace.players.push_back(std::move(rec));
    mech.Update(update);
    trace.envelope_pass = trace.envelope_pass && InsideEnvelope(mech);
  }
  for (auto& rec : trace.players) {
    rec.realized = inst.costs[rec.action] / trace.final_usage[rec.action];
    trace.sw += rec.realized;
    trace.psw += rec.perceived;
  }
  std::vector<int> assignment;
  for (const auto& rec : trace.players) assignment.push_back(rec.action);
  trace.objective = CoverCost(inst, assignment);
  return trace;
}

PlayTrace PlayFutureDependent(const ResourceSharingInstance& inst,
                              CounterMechanism& mech,
                              const Strategy& strategy) {
  inst.Validate();
  GameInstance wrapped{GameKind::kFuture, inst, {}, {}, {}};
  CheckMechanism(mech, ShapeFor(wrapped));
  const AccuracyEnvelope env = mech.envelope();

  PlayTrace trace;
  trace.envelope_pass = InsideEnvelope(mech);
  trace.final_usage.assign(inst.m, 0.0);
  std::vector<double> update(inst.m, 0.0);
  for (int i = 0; i < inst.n; ++i) {
    PlayerRecord rec;
    rec.displayed = mech.Current();
    rec.true_counts = trace.final_usage;
    ResourceView view{&inst, i, rec.displayed, env, true};
    const int r = strategy.ChooseResource(view);
    rec.action = r;
    rec.allocation.assign(inst.m, 0.0);
    rec.allocation[r] = 1.0;
    // v(displayed + 1) in 1-based counts.
    rec.perceived = inst.curves[r].At(rec.displayed[r]);
    std::fill(update.begin(), update.end(), 0.0);
    update[r] = 1.0;
    trace.final_usage[r] += 1.0;
    trace.players.push_back(std::move(rec));
    mech.Update(update);
    trace.envelope_pass = trace.envelope_pass && InsideEnvelope(mech);
  }
  for (auto& rec : trace.players) {
    const long long w = static_cast<long long>(trace.final_usage[rec.action]);
    rec.realized = inst.curves[rec.action].Value(w - 1);
    trace.sw += rec.realized;
    trace.psw += rec.perceived;
  }
  trace.objective = trace.sw;
  return trace;
}

PlayTrace Play(const GameInstance& inst, CounterMechanism& mech,
               const Strategy& strategy, const PlayOptions& options) {
  switch (inst.kind) {
    case GameKind::kResource:
      return PlayResourceSharing(inst.resource, mech, strategy, options);
    case GameKind::kCut:
      return PlayCut(inst.cut, mech, strategy);
    case GameKind::kScheduling:
      return PlayScheduling(inst.scheduling, mech, strategy);
    case GameKind::kCost:
      return PlayCostSharing(inst.cost, mech, strategy);
    case GameKind::kFuture:
      return PlayFutureDependent(inst.resource, mech, strategy);
  }
  throw ValidationError("unknown game kind");
}

// ---------------------------------------------------------------------------
// Welfare of fixed assignments

double ResourceWelfare(const ResourceSharingInstance& inst,
                       const std::vector<int>& assignment) {
  std::vector<long long> count(inst.m, 0);
  for (int r : assignment) ++count[r];
  double total = 0.0;
  for (int r = 0; r < inst.m; ++r) {
    for (long long k = 0; k < count[r]; ++k) total += inst.curves[r].Value(k);
  }
  return total;
}

double FutureWelfare(const ResourceSharingInstance& inst,
                     const std::vector<int>& assignment) {
  std::vector<long long> count(inst.m, 0);
  for (int r : assignment) ++count[r];
  double total = 0.0;
  for (int r = 0; r < inst.m; ++r) {
    if (count[r] > 0) total += count[r] * inst.curves[r].Value(count[r] - 1);
  }
  return total;
}

double CutWelfare(const CutInstance& inst, const std::vector<int>& colors) {
  double total = 0.0;
  for (int u = 0; u < inst.n; ++u) {
    for (int v : inst.adj[u]) total += colors[u] != colors[v] ? 1.0 : 0.0;
  }
  return total;
}

double Makespan(const SchedulingInstance& inst,
                const std::vector<int>& assignment) {
  std::vector<double> load(inst.m, 0.0);
  for (int k = 0; k < inst.n; ++k) load[assignment[k]] += inst.sizes[k][assignment[k]];
  return *std::max_element(load.begin(), load.end());
}

double CoverCost(const CostSharingInstance& inst,
                 const std::vector<int>& assignment) {
  std::vector<bool> used(inst.m, false);
  for (int s : assignment) used[s] = true;
  double total = 0.0;
  for (int s = 0; s < inst.m; ++s) {
    if (used[s]) total += inst.costs[s];
  }
  return total;
}

// ---------------------------------------------------------------------------
// Curve properties

bool ShallowCheck(const ValueCurve& curve, double w, int l) {
  if (!(w >= 1.0)) throw ParameterError("w must be >= 1");
  if (l < 0 || l > curve.size()) {
    throw ParameterError("l must lie in [0, curve length]");
  }
  double prefix = 0.0;
  for (int x = 1; x <= l; ++x) {
    prefix += curve.Value(x - 1);
    if (curve.Value(x - 1) < prefix / (w * x)) return false;
  }
  return true;
}

double MinimalShallowness(const ValueCurve& curve, int l) {
  if (l < 0 || l > curve.size()) {
    throw ParameterError("l must lie in [0, curve length]");
  }
  double w = 1.0;
  double prefix = 0.0;
  for (int x = 1; x <= l; ++x) {
    const double v = curve.Value(x - 1);
    prefix += v;
    if (v == 0.0) {
      if (prefix > 0.0) return kInfinity;
      continue;
    }
    w = std::max(w, prefix / (x * v));
  }
  return w;
}

Smoothness CurveSmoothness(const ValueCurve& curve, double alpha, double beta) {
  if (!(alpha >= 1.0)) throw ParameterError("alpha must be >= 1");
  if (!(beta >= 0.0)) throw ParameterError("beta must be >= 0");
  Smoothness s;
  for (int x = 0; x < curve.size(); ++x) {
    const double v = curve.Value(x);
    const double low = curve.At(std::max(0.0, x / (alpha * alpha) - 2.0 * beta / alpha));
    const double high = curve.At(alpha * alpha * x + 2.0 * alpha * beta);
    if (v == 0.0) {
      if (low > 0.0) s.psi = kInfinity;
      continue;
    }
    s.psi = std::max(s.psi, low / v);
    s.phi = std::min(s.phi, high / v);
  }
  return s;
}

}  // namespace contcount
