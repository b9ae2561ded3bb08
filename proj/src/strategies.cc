#include "contcount/strategies.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "contcount/errors.h"

namespace contcount {

namespace {

constexpr const char* kFearATwin = "fear-a-twin";
constexpr const char* kFlatTemptation = "flat-resource-temptation";
constexpr const char* kAllBlueCycle = "all-blue-cycle";
constexpr const char* kPessimisticScheduler = "pessimistic-scheduler";
constexpr const char* kPrivateSetBeliefs = "private-set-beliefs";

const ScriptInfo* FindScript(const std::string& name) {
  for (const auto& s : RegisteredScripts()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

[[noreturn]] void WrongGame(const std::string& script, const char* game) {
  const ScriptInfo* info = FindScript(script);
  throw ValidationError("script '" + script + "' plays the " + info->game +
                        " game, not " + game);
}

bool Contains(std::span<const int> actions, int r) {
  return std::find(actions.begin(), actions.end(), r) != actions.end();
}

// Value at the most pessimistic count in the belief interval.
double WorstValue(const ValueCurve& curve, const Belief& b) {
  return std::isinf(b.hi) ? curve.Tail() : curve.At(b.hi);
}

}  // namespace

int GreedyChoose(std::span<const int> actions, std::span<const double> displayed,
                 const std::vector<ValueCurve>& curves, double offset) {
  if (actions.empty()) throw ValidationError("empty action set");
  int best = -1;
  double best_value = 0.0;
  for (int r : actions) {
    const double v = curves[r].At(displayed[r] + offset);
    if (best < 0 || v > best_value || (v == best_value && r < best)) {
      best = r;
      best_value = v;
    }
  }
  return best;
}

int GreedyColor(double red, double blue) { return blue < red ? kBlue : kRed; }

int GreedyMachine(std::span<const double> loads,
                  std::span<const double> sizes) {
  if (loads.empty()) throw ValidationError("no machines");
  int best = 0;
  for (size_t q = 1; q < loads.size(); ++q) {
    if (loads[q] + sizes[q] < loads[best] + sizes[best]) best = static_cast<int>(q);
  }
  return best;
}

int GreedySet(std::span<const int> allowed, std::span<const double> displayed,
              const std::vector<double>& costs) {
  if (allowed.empty()) throw ValidationError("empty allowed-set list");
  int best = -1;
  double best_cost = 0.0;
  for (int s : allowed) {
    const double c = costs[s] / (std::max(0.0, displayed[s]) + 1.0);
    if (best < 0 || c < best_cost || (c == best_cost && s < best)) {
      best = s;
      best_cost = c;
    }
  }
  return best;
}

Belief BeliefRange(double displayed, const AccuracyEnvelope& env) {
  if (std::isinf(env.beta)) return {0.0, kInfinity};
  return {std::max(0.0, displayed / env.alpha - env.beta),
          std::max(0.0, env.alpha * displayed + env.beta)};
}

bool IsUndominated(int action, std::span<const int> actions,
                   std::span<const double> displayed,
                   const AccuracyEnvelope& env,
                   const std::vector<ValueCurve>& curves) {
  if (!Contains(actions, action)) {
    throw ValidationError("action is not in the action set");
  }
  const double best = curves[action].At(BeliefRange(displayed[action], env).lo);
  for (int r : actions) {
    if (r == action) continue;
    if (WorstValue(curves[r], BeliefRange(displayed[r], env)) > best) {
      return false;
    }
  }
  return true;
}

const std::vector<ScriptInfo>& RegisteredScripts() {
  static const std::vector<ScriptInfo> kScripts = {
      {kFearATwin, "resource",
       "every player takes shared resource 0, fearing a twin took its own "
       "resource (paper:noinfo)"},
      {kFlatTemptation, "resource",
       "every player takes the slowly decaying shared resource 0 "
       "(paper:noinfospecial)"},
      {kAllBlueCycle, "cut",
       "blue until more than half the neighbors are certainly blue "
       "(paper:cycle)"},
      {kPessimisticScheduler, "scheduling",
       "each job goes to the machine where it is largest (paper:sched2x2)"},
      {kPrivateSetBeliefs, "future",
       "take market 0, believing all later players join one's own market "
       "(paper:marketundom)"},
  };
  return kScripts;
}

Strategy::Strategy(StrategyKind kind, std::string script, double offset)
    : kind_(kind), script_(std::move(script)), offset_(offset) {}

Strategy Strategy::Greedy() { return Strategy(StrategyKind::kGreedy, "", 0.0); }

Strategy Strategy::Scripted(const std::string& name) {
  if (FindScript(name) == nullptr) {
    std::string known;
    for (const auto& s : RegisteredScripts()) known += " " + s.name;
    throw LookupError("unknown scripted strategy '" + name + "' (known:" +
                      known + ")");
  }
  return Strategy(StrategyKind::kScripted, name, 0.0);
}

Strategy Strategy::BeliefGreedy(double offset) {
  if (!std::isfinite(offset)) throw ParameterError("belief offset must be finite");
  return Strategy(StrategyKind::kBeliefGreedy, "", offset);
}

Strategy Strategy::Parse(const std::string& text) {
  if (text == "greedy") return Greedy();
  if (text.rfind("scripted:", 0) == 0) return Scripted(text.substr(9));
  if (text.rfind("belief:", 0) == 0) {
    const std::string num = text.substr(7);
    char* end = nullptr;
    const double offset = std::strtod(num.c_str(), &end);
    if (num.empty() || *end != '\0') {
      throw ParameterError("bad belief offset '" + num + "'");
    }
    return BeliefGreedy(offset);
  }
  throw LookupError("unknown strategy '" + text +
                    "' (expected greedy, scripted:<name> or belief:<offset>)");
}

std::string Strategy::Name() const {
  switch (kind_) {
    case StrategyKind::kGreedy:
      return "greedy";
    case StrategyKind::kScripted:
      return "scripted:" + script_;
    case StrategyKind::kBeliefGreedy: {
      std::ostringstream out;
      out << "belief:" << offset_;
      return out.str();
    }
  }
  return "?";
}

int Strategy::ChooseResource(const ResourceView& view) const {
  const ResourceSharingInstance& inst = *view.inst;
  const auto& actions = inst.action_sets[view.player];
  if (kind_ != StrategyKind::kScripted) {
    return GreedyChoose(actions, view.displayed, inst.curves, offset_);
  }
  if (script_ == kFearATwin || script_ == kFlatTemptation) {
    if (view.future_dependent) WrongGame(script_, "future");
    if (!Contains(actions, 0)) {
      throw ValidationError("script '" + script_ +
                            "' needs shared resource 0 in every action set");
    }
    if (!IsUndominated(0, actions, view.displayed, view.envelope, inst.curves)) {
      std::ostringstream msg;
      msg << "script '" << script_ << "': resource 0 is dominated for player "
          << view.player;
      throw StateError(msg.str());
    }
    return 0;
  }
  if (script_ == kPrivateSetBeliefs) {
    if (!view.future_dependent) WrongGame(script_, "resource");
    if (actions.size() != 2 || actions[0] != 0) {
      throw ValidationError("script '" + script_ +
                            "' needs action sets {0, own market}");
    }
    const int own = actions[1];
    const int later = inst.n - view.player - 1;
    const double shared = inst.curves[0].At(view.displayed[0]);
    const double mine = inst.curves[own].Value(
        static_cast<long long>(std::floor(std::max(0.0, view.displayed[own]))) +
        later);
    if (shared < mine) {
      std::ostringstream msg;
      msg << "script '" << script_ << "': market 0 is not a best response for "
          << "player " << view.player << " under its belief";
      throw StateError(msg.str());
    }
    return 0;
  }
  WrongGame(script_, view.future_dependent ? "future" : "resource");
}

int Strategy::ChooseColor(const CutView& view) const {
  if (kind_ != StrategyKind::kScripted) {
    return GreedyColor(view.red + offset_, view.blue + offset_);
  }
  if (script_ != kAllBlueCycle) WrongGame(script_, "cut");
  // Blue is dominated once the certainly-blue neighbors outnumber every
  // possible red one: worst case of red beats best case of blue.
  const double degree = static_cast<double>(view.inst->adj[view.player].size());
  const double blue_lo = std::min(degree, BeliefRange(view.blue, view.envelope).lo);
  return 2.0 * std::floor(blue_lo) > degree ? kRed : kBlue;
}

int Strategy::ChooseMachine(const SchedulingView& view) const {
  const auto& sizes = view.inst->sizes[view.player];
  if (kind_ != StrategyKind::kScripted) {
    return GreedyMachine(view.loads, sizes);
  }
  if (script_ != kPessimisticScheduler) WrongGame(script_, "scheduling");
  int best = 0;
  for (size_t q = 1; q < sizes.size(); ++q) {
    if (sizes[q] > sizes[best]) best = static_cast<int>(q);
  }
  return best;
}

int Strategy::ChooseSet(const CostView& view) const {
  if (kind_ == StrategyKind::kScripted) WrongGame(script_, "cost");
  std::vector<double> shifted(view.displayed.begin(), view.displayed.end());
  for (double& y : shifted) y += offset_;
  return GreedySet(view.inst->allowed[view.player], shifted, view.inst->costs);
}

}  // namespace contcount
