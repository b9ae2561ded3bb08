#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "contcount/errors.h"
#include "contcount/harness.h"

namespace contcount {
namespace {

ExperimentConfig PrivateConfig(GameKind game, int trials) {
  ExperimentConfig c;
  c.game = game;
  c.n = 12;
  c.m = 3;
  c.trials = trials;
  c.seed = 99;
  c.mechanism.kind = MechanismKind::kTreeSum;
  c.mechanism.wrappers = {WrapperKind::kZeroFailure, WrapperKind::kUnderestimator};
  return c;
}

std::string Csv(const ExperimentResult& r) {
  std::ostringstream out;
  WriteTrialsCsv(r.trials, out);
  return out.str();
}

TEST(Config, ParsesKeys) {
  std::istringstream in(
      "# comment\n"
      "game = cut\n"
      "instance = paper:cycle\n"
      "param.n = 6   # trailing comment\n"
      "mech = ftsum\n"
      "wrap = clamp, under\n"
      "eps = 0.5\n"
      "alpha = 3\n"
      "trials = 7\n"
      "seed = 42\n"
      "strategy = belief:1\n"
      "opt = greedy-upper\n"
      "zero_noise = true\n");
  const ExperimentConfig c = ExperimentConfig::Parse(in);
  EXPECT_EQ(c.game, GameKind::kCut);
  EXPECT_EQ(c.instance, "paper:cycle");
  EXPECT_EQ(c.params.at("n"), 6.0);
  EXPECT_EQ(c.mechanism.kind, MechanismKind::kFtSum);
  ASSERT_EQ(c.mechanism.wrappers.size(), 2u);
  EXPECT_EQ(c.mechanism.wrappers[0], WrapperKind::kZeroFailure);
  EXPECT_EQ(c.mechanism.epsilon, 0.5);
  EXPECT_EQ(c.mechanism.alpha, 3.0);
  EXPECT_EQ(c.trials, 7);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.opt_mode, OptMode::kGreedyUpperBound);
  EXPECT_TRUE(c.mechanism.zero_noise);
}

TEST(Config, Rejects) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return ExperimentConfig::Parse(in);
  };
  EXPECT_THROW(parse("trials = 0\n"), ParameterError);
  EXPECT_THROW(parse("colour = red\n"), ParameterError);
  EXPECT_THROW(parse("n = 2.5\n"), ParameterError);
  EXPECT_THROW(parse("just words\n"), ParameterError);
  EXPECT_THROW(parse("mech = ftsum\nalpha = 1\n"), ParameterError);
  EXPECT_THROW(parse("mech = treesum\neps = 0\n"), ParameterError);
  EXPECT_THROW(parse("strategy = clever\n"), LookupError);
  EXPECT_THROW(ExperimentConfig::Load("/nonexistent/cfg"), ValidationError);
}

TEST(Ratio, Conventions) {
  EXPECT_EQ(CompetitiveRatio(GameKind::kResource, 2.0, 8.0), 4.0);
  EXPECT_EQ(CompetitiveRatio(GameKind::kScheduling, 3.0, 2.0), 1.5);
  EXPECT_EQ(CompetitiveRatio(GameKind::kCost, 10.0, 1.1), 10.0 / 1.1);
  EXPECT_EQ(CompetitiveRatio(GameKind::kCut, 0.0, 0.0), 1.0);
  EXPECT_EQ(CompetitiveRatio(GameKind::kCut, 0.0, 2.0), kInfinity);
  EXPECT_EQ(CompetitiveRatio(GameKind::kScheduling, 0.0, 0.0), 1.0);
}

TEST(Quantile, NearestRank) {
  const std::vector<double> v = {5, 1, 4, 2, 3};
  EXPECT_EQ(Quantile(v, 0.0), 1.0);
  EXPECT_EQ(Quantile(v, 0.2), 1.0);
  EXPECT_EQ(Quantile(v, 0.5), 3.0);
  EXPECT_EQ(Quantile(v, 0.9), 5.0);
  EXPECT_EQ(Quantile(v, 1.0), 5.0);
  EXPECT_EQ(Quantile({}, 0.5), 0.0);
}

TEST(Parallel, RethrowsAndCovers) {
  std::vector<int> hit(50, 0);
  ParallelFor(50, 4, [&](int i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(ParallelFor(10, 3,
                           [](int i) {
                             if (i == 7) throw std::runtime_error("x");
                           }),
               std::runtime_error);
  EXPECT_THROW(ParallelFor(10, 1,
                           [](int i) {
                             if (i == 2) throw std::runtime_error("x");
                           }),
               std::runtime_error);
}

TEST(Experiment, ReproducibleAcrossThreads) {
  for (GameKind game : {GameKind::kResource, GameKind::kCut,
                        GameKind::kScheduling, GameKind::kCost}) {
    ExperimentConfig c = PrivateConfig(game, 24);
    c.threads = 1;
    const std::string one = Csv(RunExperiment(c));
    EXPECT_EQ(one, Csv(RunExperiment(c)));
    c.threads = 4;
    EXPECT_EQ(one, Csv(RunExperiment(c)));
    c.seed = 100;
    EXPECT_NE(one, Csv(RunExperiment(c)));
  }
}

TEST(Experiment, CsvRoundTripAndSummary) {
  ExperimentConfig c = PrivateConfig(GameKind::kResource, 30);
  c.output = testing::TempDir() + "harness_trials.csv";
  const ExperimentResult r = RunExperiment(c);
  std::ifstream in(c.output);
  ASSERT_TRUE(in);
  const auto back = ReadTrialsCsv(in);
  ASSERT_EQ(back.size(), r.trials.size());
  for (size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].trial, r.trials[i].trial);
    EXPECT_EQ(back[i].sw, r.trials[i].sw);
    EXPECT_EQ(back[i].psw, r.trials[i].psw);
    EXPECT_EQ(back[i].opt, r.trials[i].opt);
    EXPECT_EQ(back[i].ratio, r.trials[i].ratio);
    EXPECT_EQ(back[i].envelope_pass, r.trials[i].envelope_pass);
    EXPECT_EQ(back[i].final_counts, r.trials[i].final_counts);
  }
  // The summary is a pure function of the per-trial rows.
  const Summary s = Summarize(back, r.summary.envelope_target);
  EXPECT_EQ(s.mean_ratio, r.summary.mean_ratio);
  EXPECT_EQ(s.max_ratio, r.summary.max_ratio);
  EXPECT_EQ(s.p90_ratio, r.summary.p90_ratio);
  EXPECT_EQ(s.envelope_pass_rate, r.summary.envelope_pass_rate);
  // Clamped mechanisms never leave their envelope.
  EXPECT_EQ(r.summary.envelope_pass_rate, 1.0);
  EXPECT_EQ(r.summary.envelope_target, 1.0);
}

TEST(Experiment, PerfectGreedyWithinFour) {
  ExperimentConfig c;
  c.game = GameKind::kResource;
  c.n = 8;
  c.m = 4;
  c.trials = 200;
  c.seed = 3;
  const ExperimentResult r = RunExperiment(c);
  EXPECT_LE(r.summary.max_ratio, 4.0 + 1e-9);
  EXPECT_EQ(r.opt_method, "matching");
  for (const auto& t : r.trials) EXPECT_EQ(t.sw, t.psw);
}

TEST(Experiment, FixedInstance) {
  ExperimentConfig c;
  c.game = GameKind::kResource;
  c.instance = "paper:intro";
  c.params = {{"n", 100}, {"eps", 0.01}};
  c.mechanism.kind = MechanismKind::kEmpty;
  const ExperimentResult r = RunExperiment(c);
  double h = 0.0;
  for (int k = 1; k <= 100; ++k) h += 1.0 / k;
  EXPECT_NEAR(r.trials[0].sw, h, 1e-9);
  EXPECT_NEAR(r.trials[0].opt, 99.01, 1e-9);
}

TEST(Experiment, ErrorsCarryTheSeed) {
  ExperimentConfig c;
  c.game = GameKind::kResource;
  c.trials = 20;
  c.seed = 1234;
  c.strategy = "scripted:fear-a-twin";
  try {
    RunExperiment(c);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("seed 1234"), std::string::npos)
        << e.what();
  }
}

TEST(Summary, JsonKeys) {
  Summary s;
  s.trials = 3;
  s.max_ratio = kInfinity;
  const auto j = nlohmann::json::parse(SummaryJson(s));
  for (const char* key : {"trials", "mean_ratio", "max_ratio", "p50_ratio",
                          "p90_ratio", "p99_ratio", "mean_objective",
                          "mean_opt", "envelope_pass_rate", "envelope_target"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["max_ratio"].is_null());
  EXPECT_EQ(j["trials"], 3);
  std::ostringstream text;
  WriteSummary(s, text);
  EXPECT_NE(text.str().find("envelope_pass_rate"), std::string::npos);
}

}  // namespace
}  // namespace contcount
