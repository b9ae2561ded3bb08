#ifndef CONTCOUNT_OPTIMAL_H_
#define CONTCOUNT_OPTIMAL_H_

#include <string>
#include <vector>

#include "contcount/games.h"

namespace contcount {

struct OptResult {
  // Welfare for maximization games, makespan or total cost otherwise.
  double value = 0.0;
  // Player -> resource / machine / set, or node -> color for cut games.
  std::vector<int> witness;
  // "matching", "brute-force", "branch-and-bound", "closed-form" or
  // "greedy-upper-bound".
  std::string method;
  // Scheduling only: sum of min job sizes / m, a lower bound on OPT.
  double lower_bound = 0.0;
  // False for the greedy-upper-bound mode, whose value only bounds OPT.
  bool exact = true;
};

enum class OptMode { kExact, kGreedyUpperBound };

// Exact max-weight matching of players to (resource, copy) slots. Throws
// SizeError above 400 players or 20000 slots in exact mode. The
// greedy-upper-bound mode reports 4x the perfect-information greedy welfare.
OptResult OptResourceSharing(const ResourceSharingInstance& inst,
                             OptMode mode = OptMode::kExact);

// Branch and bound over job placements; SizeError when m^n > 1e7.
OptResult OptScheduling(const SchedulingInstance& inst);

// Max of twice the cut. Bipartite graphs use the closed form 2|E|; others
// are enumerated in Gray-code order, SizeError above 2^24 colorings.
OptResult OptCut(const CutInstance& inst);

// Minimum-cost family of sets covering every player, by branch and bound.
// SizeError after 1e7 search nodes.
OptResult OptCostSharing(const CostSharingInstance& inst);

// Max of sum_r w_r * v_r(w_r) over assignments (curve index w_r - 1).
// SizeError when the product of action-set sizes exceeds 1e7.
OptResult OptFutureDependent(const ResourceSharingInstance& inst);

OptResult Optimum(const GameInstance& inst, OptMode mode = OptMode::kExact);

// True for games where larger objective is better.
bool IsMaximization(GameKind kind);

}  // namespace contcount

#endif  // CONTCOUNT_OPTIMAL_H_
