#ifndef CONTCOUNT_HARNESS_H_
#define CONTCOUNT_HARNESS_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "contcount/counters.h"
#include "contcount/games.h"
#include "contcount/optimal.h"

namespace contcount {

struct ExperimentConfig {
  GameKind game = GameKind::kResource;
  // "random" draws a fresh instance per trial; "paper:<name>" or a file path
  // fixes one instance for all trials.
  std::string instance = "random";
  InstanceParams params;
  // Sizes of random instances.
  int n = 10;
  int m = 4;
  MechanismSpec mechanism;
  std::string strategy = "greedy";
  int quanta = 1;
  int trials = 1;
  uint64_t seed = 1;
  // 0 picks the hardware concurrency.
  int threads = 0;
  OptMode opt_mode = OptMode::kExact;
  // Per-trial CSV destination; empty for none.
  std::string output;

  // Throws ParameterError.
  void Validate() const;

  // Flat "key = value" lines, '#' comments. Keys: game, instance, n, m,
  // mech, wrap (comma list), eps, alpha, gamma, ctree, warmup, zero_noise,
  // strategy, quanta, trials, seed, threads, opt (exact|greedy-upper),
  // output, and param.<name> for instance parameters.
  static ExperimentConfig Parse(std::istream& in);
  static ExperimentConfig Load(const std::string& path);
};

struct TrialResult {
  int trial = 0;
  uint64_t seed = 0;
  double sw = 0.0;
  double psw = 0.0;
  double objective = 0.0;
  double opt = 0.0;
  // OPT / objective for welfare games, objective / OPT for cost games.
  double ratio = 1.0;
  bool envelope_pass = true;
  std::vector<double> final_counts;
};

struct Summary {
  int trials = 0;
  double mean_ratio = 0.0;
  double max_ratio = 0.0;
  double p50_ratio = 0.0;
  double p90_ratio = 0.0;
  double p99_ratio = 0.0;
  double mean_objective = 0.0;
  double mean_opt = 0.0;
  double envelope_pass_rate = 0.0;
  // 1 - gamma of the mechanism's declared envelope.
  double envelope_target = 1.0;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;
  Summary summary;
  std::string mechanism;
  std::string opt_method;
};

// Ratio convention shared by the harness and the scenarios.
double CompetitiveRatio(GameKind kind, double objective, double opt);

// Deterministic for a given config regardless of thread count. Module errors
// are rethrown with the failing trial's seed prepended.
ExperimentResult RunExperiment(const ExperimentConfig& config);

Summary Summarize(const std::vector<TrialResult>& trials, double envelope_target);

void WriteTrialsCsv(const std::vector<TrialResult>& trials, std::ostream& out);
std::vector<TrialResult> ReadTrialsCsv(std::istream& in);

void WriteSummary(const Summary& s, std::ostream& out);
// Keys: trials, mean_ratio, max_ratio, p50_ratio, p90_ratio, p99_ratio,
// mean_objective, mean_opt, envelope_pass_rate, envelope_target.
std::string SummaryJson(const Summary& s);

// Nearest-rank quantile of `values` (copied and sorted), q in [0, 1].
double Quantile(std::vector<double> values, double q);

// Runs fn(i) for i in [0, count) on up to `threads` workers.
void ParallelFor(int count, int threads, const std::function<void(int)>& fn);

}  // namespace contcount

#endif  // CONTCOUNT_HARNESS_H_
