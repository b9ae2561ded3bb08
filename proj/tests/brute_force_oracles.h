// Exhaustive optima for tiny instances. Written against the instance data
// only, without the library's solvers or welfare helpers.
#ifndef CONTCOUNT_TESTS_BRUTE_FORCE_ORACLES_H_
#define CONTCOUNT_TESTS_BRUTE_FORCE_ORACLES_H_

#include "contcount/games.h"

namespace oracle {

double ResourceOpt(const contcount::ResourceSharingInstance& inst);
double FutureOpt(const contcount::ResourceSharingInstance& inst);
// Twice the max cut, matching the welfare convention.
double CutOpt(const contcount::CutInstance& inst);
double SchedulingOpt(const contcount::SchedulingInstance& inst);
double CostOpt(const contcount::CostSharingInstance& inst);

}  // namespace oracle

#endif  // CONTCOUNT_TESTS_BRUTE_FORCE_ORACLES_H_
