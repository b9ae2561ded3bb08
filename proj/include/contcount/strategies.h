#ifndef CONTCOUNT_STRATEGIES_H_
#define CONTCOUNT_STRATEGIES_H_

#include <span>
#include <string>
#include <vector>

#include "contcount/counters.h"
#include "contcount/games.h"

namespace contcount {

// What a resource-sharing player sees on arrival.
struct ResourceView {
  const ResourceSharingInstance* inst = nullptr;
  int player = 0;
  std::span<const double> displayed;
  AccuracyEnvelope envelope;
  bool future_dependent = false;
};

struct CutView {
  const CutInstance* inst = nullptr;
  int player = 0;
  double red = 0.0;   // displayed red neighbors
  double blue = 0.0;  // displayed blue neighbors
  AccuracyEnvelope envelope;
};

struct SchedulingView {
  const SchedulingInstance* inst = nullptr;
  int player = 0;
  std::span<const double> loads;
  AccuracyEnvelope envelope;
};

struct CostView {
  const CostSharingInstance* inst = nullptr;
  int player = 0;
  std::span<const double> displayed;
  AccuracyEnvelope envelope;
};

inline constexpr int kRed = 0;
inline constexpr int kBlue = 1;

// Greedy choices. Ties go to the lowest index; an empty action set throws
// ValidationError. The curve is evaluated at floor(max(0, displayed)).
int GreedyChoose(std::span<const int> actions, std::span<const double> displayed,
                 const std::vector<ValueCurve>& curves, double offset = 0.0);
int GreedyColor(double red, double blue);
int GreedyMachine(std::span<const double> loads,
                  std::span<const double> sizes);
int GreedySet(std::span<const int> allowed, std::span<const double> displayed,
              const std::vector<double>& costs);

// Belief interval for a true count given display y under env:
// [max(0, y/alpha - beta), alpha*y + beta].
struct Belief {
  double lo = 0.0;
  double hi = 0.0;
};
Belief BeliefRange(double displayed, const AccuracyEnvelope& env);

// True iff no alternative in `actions` has a worst-case value strictly above
// this action's best-case value, over the belief intervals.
bool IsUndominated(int action, std::span<const int> actions,
                   std::span<const double> displayed,
                   const AccuracyEnvelope& env,
                   const std::vector<ValueCurve>& curves);

enum class StrategyKind { kGreedy, kScripted, kBeliefGreedy };

class Strategy {
 public:
  static Strategy Greedy();
  // Throws LookupError for an unregistered script.
  static Strategy Scripted(const std::string& name);
  // Greedy on displayed + offset.
  static Strategy BeliefGreedy(double offset);
  // "greedy", "scripted:<name>" or "belief:<offset>".
  static Strategy Parse(const std::string& text);

  StrategyKind kind() const { return kind_; }
  const std::string& script() const { return script_; }
  double offset() const { return offset_; }
  std::string Name() const;

  // Throw ValidationError when a script is paired with the wrong game or a
  // mismatched instance, and StateError when a script's own undominatedness
  // check fails.
  int ChooseResource(const ResourceView& view) const;
  int ChooseColor(const CutView& view) const;
  int ChooseMachine(const SchedulingView& view) const;
  int ChooseSet(const CostView& view) const;

 private:
  Strategy(StrategyKind kind, std::string script, double offset);

  StrategyKind kind_;
  std::string script_;
  double offset_;
};

struct ScriptInfo {
  std::string name;
  std::string game;
  std::string construction;
};

const std::vector<ScriptInfo>& RegisteredScripts();

}  // namespace contcount

#endif  // CONTCOUNT_STRATEGIES_H_
