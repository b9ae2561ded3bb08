#ifndef CONTCOUNT_GAMES_H_
#define CONTCOUNT_GAMES_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "contcount/counters.h"

namespace contcount {

class Strategy;

// Nonincreasing, nonnegative value curve. values[k] is the value to the
// (k+1)-th chooser of the resource.
struct ValueCurve {
  std::vector<double> values;

  // v(k) for integer k >= 0, extended past the end by the last entry.
  double Value(long long k) const;
  // v(floor(max(0, y))) for a real, possibly noisy, count.
  double At(double y) const;
  // Value at an unbounded count: the last entry.
  double Tail() const { return values.back(); }
  int size() const { return static_cast<int>(values.size()); }
  void Validate() const;
};

// Unit-demand resource sharing: each player picks one resource from its
// action set. Also used for the future-dependent variant, where every player
// on resource r receives v_r(w_r - 1) in curve-index terms.
struct ResourceSharingInstance {
  int n = 0;
  int m = 0;
  std::vector<ValueCurve> curves;
  std::vector<std::vector<int>> action_sets;

  void Validate() const;
};

struct CutInstance {
  int n = 0;
  std::vector<std::vector<int>> adj;

  int EdgeCount() const;
  int MaxDegree() const;
  void Validate() const;
};

struct SchedulingInstance {
  int n = 0;
  int m = 0;
  // sizes[k][q]: size of job k on machine q.
  std::vector<std::vector<double>> sizes;

  double MinSize(int k) const;
  int MinMachine(int k) const;
  double SumMinSizes() const;
  double MaxSize() const;
  void Validate() const;
};

struct CostSharingInstance {
  int n = 0;
  int m = 0;
  std::vector<double> costs;
  std::vector<std::vector<int>> allowed;

  void Validate() const;
};

enum class GameKind { kResource, kCut, kScheduling, kCost, kFuture };

GameKind ParseGameKind(const std::string& name);
std::string GameKindName(GameKind kind);

// Any one of the instance types, tagged by game.
struct GameInstance {
  GameKind kind = GameKind::kResource;
  ResourceSharingInstance resource;  // kResource and kFuture
  CutInstance cut;
  SchedulingInstance scheduling;
  CostSharingInstance cost;

  int players() const;
};

// Horizon, dimension and per-update l1 bound of the counter a game needs.
struct CounterShape {
  int horizon = 1;
  int dimension = 1;
  double l1_bound = 1.0;
};

CounterShape ShapeFor(const GameInstance& inst);

struct PlayerRecord {
  std::vector<double> displayed;    // what the player was shown
  std::vector<double> true_counts;  // true state at arrival
  int action = -1;                  // resource / color / machine / set
  std::vector<double> allocation;   // investment split (resource games)
  double realized = 0.0;
  double perceived = 0.0;
};

struct PlayTrace {
  std::vector<PlayerRecord> players;
  // Sum of realized utilities (costs for the cost-sharing game, negative
  // loads for scheduling).
  double sw = 0.0;
  double psw = 0.0;
  // Headline metric: SW for welfare games, makespan for scheduling, total
  // cost for cost sharing.
  double objective = 0.0;
  std::vector<double> final_usage;
  // Every release shown during play was inside the mechanism's declared
  // envelope.
  bool envelope_pass = true;
};

struct PlayOptions {
  // Investment quanta per player; 1 is unit demand.
  int quanta = 1;
};

// The engines step players in index order, showing each the mechanism's
// current release and feeding the resulting action back as one update.
// They throw ValidationError when the mechanism does not match ShapeFor.
PlayTrace PlayResourceSharing(const ResourceSharingInstance& inst,
                              CounterMechanism& mech, const Strategy& strategy,
                              const PlayOptions& options = {});
PlayTrace PlayCut(const CutInstance& inst, CounterMechanism& mech,
                  const Strategy& strategy);
PlayTrace PlayScheduling(const SchedulingInstance& inst, CounterMechanism& mech,
                         const Strategy& strategy);
PlayTrace PlayCostSharing(const CostSharingInstance& inst,
                          CounterMechanism& mech, const Strategy& strategy);
PlayTrace PlayFutureDependent(const ResourceSharingInstance& inst,
                              CounterMechanism& mech,
                              const Strategy& strategy);

PlayTrace Play(const GameInstance& inst, CounterMechanism& mech,
               const Strategy& strategy, const PlayOptions& options = {});

// Welfare of a unit-demand assignment (player -> resource), for each model.
double ResourceWelfare(const ResourceSharingInstance& inst,
                       const std::vector<int>& assignment);
double FutureWelfare(const ResourceSharingInstance& inst,
                     const std::vector<int>& assignment);
// Twice the number of cut edges.
double CutWelfare(const CutInstance& inst, const std::vector<int>& colors);
double Makespan(const SchedulingInstance& inst,
                const std::vector<int>& assignment);
double CoverCost(const CostSharingInstance& inst,
                 const std::vector<int>& assignment);

// v(x) >= (v(1) + ... + v(x)) / (w * x) for 1 <= x <= l, counts 1-based
// (v(x) is curve index x - 1).
bool ShallowCheck(const ValueCurve& curve, double w, int l);
// Smallest w for which ShallowCheck(curve, w, l) holds; +inf if none.
double MinimalShallowness(const ValueCurve& curve, int l);

struct Smoothness {
  // Smallest psi with psi * v(x) >= v(max(0, x/alpha^2 - 2 beta/alpha)).
  double psi = 1.0;
  // Largest phi with v(alpha^2 x + 2 alpha beta) >= phi * v(x); the
  // undominated-play ratio scales with psi / phi.
  double phi = 1.0;
};

// Scans x = 0 .. size-1; real arguments are floored.
Smoothness CurveSmoothness(const ValueCurve& curve, double alpha, double beta);

// ---------------------------------------------------------------------------
// Instances: text files and built-in constructions.

ResourceSharingInstance ReadResourceSharing(std::istream& in);
CutInstance ReadCut(std::istream& in);
SchedulingInstance ReadScheduling(std::istream& in);
CostSharingInstance ReadCostSharing(std::istream& in);
GameInstance ReadInstance(GameKind kind, std::istream& in);
GameInstance LoadInstanceFile(GameKind kind, const std::string& path);

void WriteInstance(const GameInstance& inst, std::ostream& out);

using InstanceParams = std::map<std::string, double>;

struct NamedInstance {
  std::string name;
  GameKind kind;
  std::string description;
};

const std::vector<NamedInstance>& NamedInstances();

// Builds a named construction. Recognized parameters depend on the name
// (n, eps, H, w, rho, c); missing ones take the documented defaults.
// Throws LookupError for an unknown name.
GameInstance MakeNamedInstance(const std::string& name,
                               const InstanceParams& params = {});

// Resolves "paper:<name>" to a construction and anything else to a file.
GameInstance ResolveInstance(GameKind kind, const std::string& source,
                             const InstanceParams& params = {});

namespace instances {

// Public resource with v(k) = 1/(k+1) plus n private resources worth 1-eps.
ResourceSharingInstance Intro(int n, double eps);
// Twin construction: private r_i worth H once then 0, shared resource flat 1.
ResourceSharingInstance NoInfo(int n, double h);
// Shared v(k) = 1/(k+1), private v(k) = n/(k+1), every action set full.
ResourceSharingInstance NoInfoSpecial(int n);
// Two players; resource 0 worth 1 then 0, resource 1 flat rho; player 0 may
// use only resource 1.
ResourceSharingInstance LbUndom(double rho);
CutInstance Cycle(int nodes);
CutInstance CompleteBipartite(int a, int b);
SchedulingInstance SchedTwoByTwo();
// Public set (index 0) cost 1+eps, private sets cost 1.
CostSharingInstance CostPublicPrivate(int n, double eps);
// Future-dependent step curve (w, 1/2) against flat w - eps.
ResourceSharingInstance FutureLb(double w, double eps);
// One market of total value c, all players forced onto it.
ResourceSharingInstance SingleMarket(int n, double c);
// Market 0 of total value 1 plus market i of total (n-i+1)(1-eps)/i, each
// player i choosing between 0 and i.
ResourceSharingInstance MarketUndom(int n, double eps);
// Market-sharing curve v(x) = c / x in curve-index terms, length n.
ValueCurve MarketCurve(double c, int n);

}  // namespace instances

// Random instances for experiments and cross-checks. Values are multiples
// of 1/64 (costs and job sizes too) so that sums of them are exact in
// double precision.
namespace random_instances {

ResourceSharingInstance Resource(int n, int m, RandomSource& rng);
// Erdos-Renyi graph with edge probability p.
CutInstance Cut(int n, double p, RandomSource& rng);
SchedulingInstance Scheduling(int n, int m, RandomSource& rng);
CostSharingInstance CostSharing(int n, int m, RandomSource& rng);
// Market-sharing curves v(x) = c_r / x with random totals c_r.
ResourceSharingInstance Market(int n, int m, RandomSource& rng);
// Slowly decaying curves for the future-dependent model.
ResourceSharingInstance Future(int n, int m, RandomSource& rng);

GameInstance Make(GameKind kind, int n, int m, RandomSource& rng);

}  // namespace random_instances

}  // namespace contcount

#endif  // CONTCOUNT_GAMES_H_
