// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "brute_force_oracles.h"
#include "contcount/counters.h"
#include "contcount/envelope.h"
#include "contcount/games.h"
#include "contcount/noise.h"
#include "contcount/optimal.h"
#include "contcount/scenarios.h"

namespace {

using namespace contcount;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

int Below(RandomSource& rng, int k) { return static_cast<int>(rng.NextU64() % k); }

// Delta_m update whose entries are multiples of 1/1024, so prefix sums of up
// to 256 of them are exact in double precision whatever the summation order.
std::vector<double> DyadicUpdate(RandomSource& rng, int m) {
  std::vector<double> a(m, 0.0);
  int budget = Below(rng, 1025);
  switch (Below(rng, 3)) {
    case 0:
      break;
    case 1:
      a[Below(rng, m)] = 1.0;
      break;
    default:
      for (int r = 0; r < m && budget > 0; ++r) {
        const int k = Below(rng, budget + 1);
        a[r] = k / 1024.0;
        budget -= k;
      }
  }
  return a;
}

Outcome TreeSumExactness() {
  int bad = 0;
  for (int s = 0; s < 1000; ++s) {
    RandomSource rng(2024, s);
    const int n = 1 + Below(rng, 256);
    const int m = 1 + Below(rng, 8);
    TreeSum tree(n, m, {}, RandomSource::ZeroNoise(2024, s));
    std::vector<double> x(m, 0.0);
    for (int t = 0; t < n; ++t) {
      const auto a = DyadicUpdate(rng, m);
      for (int r = 0; r < m; ++r) x[r] += a[r];
      if (tree.Update(a) != x) {
        ++bad;
        break;
      }
    }
  }
  return {bad == 0, std::to_string(1000 - bad) +
                        "/1000 fuzzed streams bit-exact (n <= 256, m <= 8)"};
}

// Bernoulli(p) unit stream on a uniformly chosen coordinate.
std::vector<double> UnitUpdate(RandomSource& rng, int m, double p) {
  std::vector<double> a(m, 0.0);
  if (rng.UniformOpen() < p) a[Below(rng, m)] = 1.0;
  return a;
}

Outcome TreeSumEnvelope() {
  const int n = 1024, m = 2;
  const double bound = TreeSum::AdditiveBound(n, m, 1.0, 0.1, 4.0);
  int inside = 0;
  double worst = 0.0;
  for (int s = 0; s < 500; ++s) {
    RandomSource rng(31, s);
    const double p = rng.UniformOpen();
    TreeSum tree(n, m, {1.0, 0.1, 4.0}, rng.Fork(1));
    double err = 0.0;
    for (int t = 0; t < n; ++t) {
      const auto& y = tree.Update(UnitUpdate(rng, m, p));
      const auto& x = tree.TrueCounts();
      for (int r = 0; r < m; ++r) err = std::max(err, std::fabs(y[r] - x[r]));
    }
    worst = std::max(worst, err);
    inside += err <= bound;
  }
  return {inside >= 450, std::to_string(inside) + "/500 trials within " +
                             Fmt("%.4g", bound) + "; worst all-step error " +
                             Fmt("%.4g", worst)};
}

Outcome FtSumStructure() {
  // Hand simulation, noise off: thresholds log2(16) * 2^j = 4, 8, 16, ...
  const int n = 16;
  FtSum ft(n, 1, {1.0, 2.0, 0.1, 4.0}, RandomSource::ZeroNoise(5, 5));
  int flags = 0;
  double threshold = 4.0;
  bool sim_ok = true;
  int first_flag = -1;
  for (int t = 1; t <= n; ++t) {
    if (t > threshold) {
      ++flags;
      threshold *= 2.0;
      if (first_flag < 0) first_flag = t;
    }
    const double hand = flags == 0 ? 0.0 : 4.0 * std::pow(2.0, flags - 1);
    sim_ok &= ft.Update(std::vector<double>{1.0})[0] == hand && ft.flags(0) == flags;
  }
  sim_ok &= first_flag == 5;

  bool monotone = true;
  for (int s = 0; s < 1000 && monotone; ++s) {
    RandomSource rng(77, s);
    const int len = 2 + Below(rng, 255);
    const int m = 1 + Below(rng, 4);
    FtSum f(len, m, {1.0, 2.0, 0.1, 4.0}, rng.Fork(1));
    std::vector<double> last(m, 0.0);
    for (int t = 0; t < len; ++t) {
      const auto& y = f.Update(DyadicUpdate(rng, m));
      for (int r = 0; r < m; ++r) {
        if (f.in_phase_two(r)) continue;
        monotone &= y[r] >= last[r];
        last[r] = y[r];
      }
    }
  }

  bool budget = true;
  for (int len : {2, 16, 1024, 100000}) {
    for (int m : {1, 3, 10}) {
      for (double eps : {0.1, 1.0, 5.0}) {
        FtSum f(len, m, {eps, 2.0, 0.1, 4.0}, RandomSource(1, 1));
        const FtSumBudget& b = f.budget();
        budget &= std::fabs(b.per_comparison * 2 * m * (f.k() + 1) - eps) <= 1e-12 * eps;
        budget &= b.phase_one + eps / 2 <= eps * (1 + 1e-12);
        budget &= b.total <= eps * (1 + 1e-12);
      }
    }
  }
  return {sim_ok && monotone && budget,
          std::string("hand simulation ") + (sim_ok ? "matches" : "differs") +
              " (first flag t=" + std::to_string(first_flag) +
              ", 0 -> 4); phase one " + (monotone ? "nondecreasing" : "decreased") +
              " on 1000 streams; budget identity " + (budget ? "holds" : "broken")};
}

Outcome FtSumEnvelope() {
  const int n = 1024, m = 1;
  int inside = 0;
  double beta = 0.0;
  for (int s = 0; s < 500; ++s) {
    RandomSource rng(41, s);
    const double p = rng.UniformOpen();
    FtSum ft(n, m, {1.0, 2.0, 0.1, 4.0}, rng.Fork(1));
    const AccuracyEnvelope env = ft.envelope();
    beta = env.beta;
    bool ok = true;
    for (int t = 0; t < n; ++t) {
      const auto& y = ft.Update(UnitUpdate(rng, m, p));
      ok &= env.Contains(ft.TrueCounts()[0], y[0]);
    }
    inside += ok;
  }
  return {inside >= 450, std::to_string(inside) + "/500 trials inside (alpha 2, beta " +
                             Fmt("%.4g", beta) + ")"};
}

Outcome WrapperContracts() {
  // Underestimator: every y inside (alpha, beta) maps inside the
  // (alpha^2, 2 beta / alpha) underestimator envelope.
  const double alpha = 2.0, beta = 3.0;
  const AccuracyEnvelope inner{alpha, beta, 0.0, false};
  const AccuracyEnvelope under{alpha * alpha, 2 * beta / alpha, 0.0, true};
  int grid_bad = 0;
  for (int i = 0; i < 100; ++i) {
    const double x = i * 1.37;
    const double lo = x / alpha - beta, hi = alpha * x + beta;
    for (int j = 0; j < 100; ++j) {
      const double y = lo + (hi - lo) * j / 99.0;
      grid_bad += !inner.Contains(x, y) ||
                  !under.Contains(x, UnderestimatorWrapper::Shift(y, alpha, beta));
    }
  }

  int mono_bad = 0;
  for (int s = 0; s < 1000; ++s) {
    RandomSource rng(3, s);
    double rep = 0.0, x = 0.0;
    for (int t = 0; t < 200; ++t) {
      if (rng.UniformOpen() < 0.5) x += 1.0;
      const double next = MonotoneWrapper::Next(rep, x + rng.Uniform(-4.0, 4.0));
      mono_bad += next != std::floor(next) || next - rep < 0.0 || next - rep > 1.0;
      rep = next;
    }
  }

  int clamp_bad = 0;
  for (int s = 0; s < 10000; ++s) {
    RandomSource rng(9, s);
    // A tiny C_tree makes the inner envelope fail often.
    auto inner = std::make_unique<TreeSum>(32, 1, TreeSumOptions{1.0, 0.1, 0.01},
                                           rng.Fork(1));
    ZeroFailureWrapper w(std::move(inner));
    const AccuracyEnvelope env = w.envelope();
    for (int t = 0; t < 32; ++t) {
      const auto& y = w.Update(UnitUpdate(rng, 1, 0.5));
      clamp_bad += !env.Contains(w.TrueCounts()[0], y[0]);
    }
  }
  return {grid_bad == 0 && mono_bad == 0 && clamp_bad == 0,
          "underestimator grid " + std::to_string(grid_bad) +
              "/10000 violations; monotone " + std::to_string(mono_bad) +
              " bad steps; zero-failure " + std::to_string(clamp_bad) +
              " violations over 10000 trials"};
}

Outcome DpSmoke() {
  // One-step release on neighboring streams (0) and (1), TreeSum at eps = 1.
  const int samples = 100000, bins = 20;
  const double lo = -4.0, hi = 5.0, width = (hi - lo) / bins;
  std::vector<double> c0(bins, 0.0), c1(bins, 0.0);
  for (int i = 0; i < samples; ++i) {
    for (int side = 0; side < 2; ++side) {
      TreeSum tree(1, 1, {1.0, 0.1, 4.0}, RandomSource(13, 2 * i + side));
      const double y = tree.Update(std::vector<double>{side ? 1.0 : 0.0})[0];
      const int b = static_cast<int>(std::floor((y - lo) / width));
      if (b < 0 || b >= bins) continue;
      (side ? c1 : c0)[b] += 1.0;
    }
  }
  double worst_ratio = 0.0, worst_allowed = 0.0;
  bool ok = true;
  for (int b = 0; b < bins; ++b) {
    if (c0[b] == 0 || c1[b] == 0) {
      ok = false;
      continue;
    }
    const double ratio = std::max(c0[b] / c1[b], c1[b] / c0[b]);
    const double slack = std::sqrt(1.0 / c0[b] + 1.0 / c1[b]);
    const double allowed = std::exp(1.0) * (1.0 + 5.0 * slack);
    ok &= ratio <= allowed;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_allowed = allowed;
    }
  }
  return {ok, "max bin ratio " + Fmt("%.4f", worst_ratio) + " (allowed " +
                  Fmt("%.4f", worst_allowed) + " in that bin, e = 2.7183)"};
}

Outcome OptCrossCheck() {
  int bad = 0;
  for (int t = 0; t < 200; ++t) {
    RandomSource rng(55, t);
    const int n = 1 + Below(rng, 8);
    const int m = 1 + Below(rng, 4);
    switch (t % 4) {
      case 0: {
        const auto inst = random_instances::Resource(n, m, rng);
        bad += OptResourceSharing(inst).value != oracle::ResourceOpt(inst);
        break;
      }
      case 1: {
        const auto inst = random_instances::Cut(n, 0.5, rng);
        bad += OptCut(inst).value != oracle::CutOpt(inst);
        break;
      }
      case 2: {
        const auto inst = random_instances::Scheduling(n, m, rng);
        bad += OptScheduling(inst).value != oracle::SchedulingOpt(inst);
        break;
      }
      default: {
        const auto inst = random_instances::CostSharing(n, m, rng);
        bad += OptCostSharing(inst).value != oracle::CostOpt(inst);
      }
    }
  }
  return {bad == 0, std::to_string(200 - bad) +
                        "/200 instances equal to exhaustive search (n <= 8; "
                        "resource, cut, scheduling, cost)"};
}

// Runs registered scenarios; passes when all of them do.
Outcome RunScenarios(const std::vector<std::string>& names) {
  Outcome o{true, ""};
  for (const auto& name : names) {
    const ScenarioReport r = Reproduce(name, {});
    o.pass &= r.pass;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += name + (r.pass ? "" : " FAILED") + ": " + r.measured;
    for (const auto& note : r.details) o.detail += " (" + note + ")";
  }
  return o;
}

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "TreeSum zero-noise exactness", 10, TreeSumExactness},
      {2, "TreeSum envelope", 60, TreeSumEnvelope},
      {3, "FTSum structure", 0, FtSumStructure},
      {4, "FTSum envelope", 60, FtSumEnvelope},
      {5, "wrapper contracts", 0, WrapperContracts},
      {6, "greedy under perfect counters", 120,
       [] { return RunScenarios({"thm:greedy4"}); }},
      {7, "no-information introduction instance", 0,
       [] { return RunScenarios({"example:intro"}); }},
      {8, "perceived welfare", 0, [] { return RunScenarios({"lemma:perceived"}); }},
      {9, "worst-case constructions", 0,
       [] {
         return RunScenarios({"thm:noinfo", "lemma:cut-cycle", "lemma:sched-undom",
                           "lemma:cost-perfect", "lemma:future-lb",
                           "lemma:marketundom"});
       }},
      {10, "cut game under private counters", 0,
       [] { return RunScenarios({"thm:cut-private"}); }},
      {11, "scheduling under private and perfect counters", 0,
       [] { return RunScenarios({"thm:sched-private", "thm:sched-perfect"}); }},
      {12, "private beats perfect for cost sharing", 60,
       [] { return RunScenarios({"prop:private-beats-perfect"}); }},
      {13, "privacy smoke test", 0, DpSmoke},
      {14, "OPT solvers against brute force", 0, OptCrossCheck},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::string timing = Fmt("%.2f s", secs);
    if (c.time_limit > 0 && secs > c.time_limit) {
      o.pass = false;
      timing += " over the " + Fmt("%.0f s", c.time_limit) + " limit";
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
