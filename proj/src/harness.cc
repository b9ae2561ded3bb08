#include "contcount/harness.h"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "contcount/errors.h"
#include "contcount/strategies.h"

namespace contcount {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ToDouble(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0') {
    throw ParameterError("config key '" + key + "': bad number '" + value + "'");
  }
  return v;
}

long long ToInt(const std::string& key, const std::string& value) {
  const double v = ToDouble(key, value);
  if (v != std::floor(v)) {
    throw ParameterError("config key '" + key + "' must be an integer");
  }
  return static_cast<long long>(v);
}

bool ToBool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw ParameterError("config key '" + key + "': expected a boolean");
}

std::string Fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (n < 1) throw ParameterError("n must be >= 1");
  if (m < 1) throw ParameterError("m must be >= 1");
  if (quanta < 1) throw ParameterError("quanta must be >= 1");
  if (threads < 0) throw ParameterError("threads must be >= 0");
  if (mechanism.warmup < 0) throw ParameterError("warmup must be >= 0");
  if (mechanism.kind == MechanismKind::kTreeSum ||
      mechanism.kind == MechanismKind::kFtSum) {
    PrivacyBudget{mechanism.epsilon, 0.0}.Validate();
    if (!(mechanism.gamma > 0.0 && mechanism.gamma < 1.0)) {
      throw ParameterError("gamma must be in (0, 1)");
    }
    if (!(mechanism.c_tree > 0.0)) throw ParameterError("c_tree must be > 0");
  }
  if (mechanism.kind == MechanismKind::kFtSum && !(mechanism.alpha > 1.0)) {
    throw ParameterError("alpha must be > 1");
  }
  Strategy::Parse(strategy);
}

ExperimentConfig ExperimentConfig::Parse(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config line " << line_no << ": expected key = value";
      throw ParameterError(msg.str());
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key == "game") {
      c.game = ParseGameKind(value);
    } else if (key == "instance") {
      c.instance = value;
    } else if (key == "n") {
      c.n = static_cast<int>(ToInt(key, value));
    } else if (key == "m") {
      c.m = static_cast<int>(ToInt(key, value));
    } else if (key == "mech") {
      c.mechanism.kind = ParseMechanismKind(value);
    } else if (key == "wrap") {
      c.mechanism.wrappers.clear();
      for (const auto& w : Split(value, ',')) {
        if (!Trim(w).empty()) c.mechanism.wrappers.push_back(ParseWrapperKind(Trim(w)));
      }
    } else if (key == "eps") {
      c.mechanism.epsilon = ToDouble(key, value);
    } else if (key == "alpha") {
      c.mechanism.alpha = ToDouble(key, value);
    } else if (key == "gamma") {
      c.mechanism.gamma = ToDouble(key, value);
    } else if (key == "ctree") {
      c.mechanism.c_tree = ToDouble(key, value);
    } else if (key == "warmup") {
      c.mechanism.warmup = static_cast<int>(ToInt(key, value));
    } else if (key == "zero_noise") {
      c.mechanism.zero_noise = ToBool(key, value);
    } else if (key == "strategy") {
      c.strategy = value;
    } else if (key == "quanta") {
      c.quanta = static_cast<int>(ToInt(key, value));
    } else if (key == "trials") {
      c.trials = static_cast<int>(ToInt(key, value));
    } else if (key == "seed") {
      c.seed = static_cast<uint64_t>(ToInt(key, value));
    } else if (key == "threads") {
      c.threads = static_cast<int>(ToInt(key, value));
    } else if (key == "opt") {
      if (value == "exact") {
        c.opt_mode = OptMode::kExact;
      } else if (value == "greedy-upper") {
        c.opt_mode = OptMode::kGreedyUpperBound;
      } else {
        throw ParameterError("config key 'opt': expected exact or greedy-upper");
      }
    } else if (key == "output") {
      c.output = value;
    } else if (key.rfind("param.", 0) == 0) {
      c.params[key.substr(6)] = ToDouble(key, value);
    } else {
      throw ParameterError("unknown config key '" + key + "'");
    }
  }
  c.Validate();
  return c;
}

ExperimentConfig ExperimentConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return Parse(in);
}

double CompetitiveRatio(GameKind kind, double objective, double opt) {
  double num = opt;
  double den = objective;
  if (!IsMaximization(kind)) std::swap(num, den);
  if (den > 0.0) return num / den;
  return num > 0.0 ? kInfinity : 1.0;
}

void ParallelFor(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  std::vector<std::exception_ptr> errors(count);
  if (threads == 1) {
    for (int i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const Strategy strategy = Strategy::Parse(config.strategy);
  const bool random = config.instance == "random";
  GameInstance fixed;
  OptResult fixed_opt;
  if (!random) {
    fixed = ResolveInstance(config.game, config.instance, config.params);
    fixed_opt = Optimum(fixed, config.opt_mode);
  }

  ExperimentResult result;
  result.trials.resize(config.trials);
  std::vector<std::string> methods(config.trials);
  std::vector<std::string> describe(config.trials);
  ParallelFor(config.trials, config.threads, [&](int t) {
    RandomSource trial_rng(config.seed, static_cast<uint64_t>(t));
    try {
      GameInstance drawn;
      OptResult opt;
      if (random) {
        RandomSource inst_rng = trial_rng.Fork(1);
        drawn = random_instances::Make(config.game, config.n, config.m, inst_rng);
        opt = Optimum(drawn, config.opt_mode);
      }
      const GameInstance& inst = random ? drawn : fixed;
      if (!random) opt = fixed_opt;
      const CounterShape shape = ShapeFor(inst);
      MechanismPtr mech = MakeMechanism(config.mechanism, shape.horizon,
                                        shape.dimension, shape.l1_bound,
                                        trial_rng.Fork(2));
      const PlayTrace trace =
          Play(inst, *mech, strategy, PlayOptions{config.quanta});
      TrialResult& r = result.trials[t];
      r.trial = t;
      r.seed = config.seed;
      r.sw = trace.sw;
      r.psw = trace.psw;
      r.objective = trace.objective;
      r.opt = opt.value;
      r.ratio = CompetitiveRatio(config.game, trace.objective, opt.value);
      r.envelope_pass = trace.envelope_pass;
      r.final_counts = trace.final_usage;
      methods[t] = opt.method;
      describe[t] = mech->Describe();
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "trial " << t << " (seed " << config.seed << ", stream " << t
          << "): " << e.what();
      throw Error(msg.str());
    }
  });

  // Target pass rate comes from the declared envelope of a probe mechanism.
  {
    CounterShape shape = random ? CounterShape{config.n, config.m, 1.0}
                                : ShapeFor(fixed);
    if (random && config.game == GameKind::kCut) shape.dimension = 2 * config.n;
    MechanismPtr probe = MakeMechanism(config.mechanism, shape.horizon,
                                       shape.dimension, 1.0,
                                       RandomSource(config.seed, ~0ULL));
    result.summary = Summarize(result.trials, 1.0 - probe->envelope().gamma);
  }
  result.mechanism = describe.front();
  result.opt_method = methods.front();

  if (!config.output.empty()) {
    std::ofstream out(config.output);
    if (!out) throw ValidationError("cannot write '" + config.output + "'");
    WriteTrialsCsv(result.trials, out);
  }
  return result;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(q * values.size());
  const size_t idx = rank < 1.0 ? 0 : static_cast<size_t>(rank) - 1;
  return values[std::min(idx, values.size() - 1)];
}

Summary Summarize(const std::vector<TrialResult>& trials, double envelope_target) {
  Summary s;
  s.trials = static_cast<int>(trials.size());
  s.envelope_target = envelope_target;
  if (trials.empty()) return s;
  std::vector<double> ratios;
  int passes = 0;
  for (const auto& t : trials) {
    ratios.push_back(t.ratio);
    s.mean_ratio += t.ratio;
    s.max_ratio = std::max(s.max_ratio, t.ratio);
    s.mean_objective += t.objective;
    s.mean_opt += t.opt;
    passes += t.envelope_pass ? 1 : 0;
  }
  s.mean_ratio /= s.trials;
  s.mean_objective /= s.trials;
  s.mean_opt /= s.trials;
  s.envelope_pass_rate = static_cast<double>(passes) / s.trials;
  s.p50_ratio = Quantile(ratios, 0.5);
  s.p90_ratio = Quantile(ratios, 0.9);
  s.p99_ratio = Quantile(ratios, 0.99);
  return s;
}

void WriteTrialsCsv(const std::vector<TrialResult>& trials, std::ostream& out) {
  out << "trial,seed,sw,psw,objective,opt,ratio,envelope_pass,final_counts\n";
  for (const auto& t : trials) {
    out << t.trial << ',' << t.seed << ',' << Fmt(t.sw) << ',' << Fmt(t.psw)
        << ',' << Fmt(t.objective) << ',' << Fmt(t.opt) << ',' << Fmt(t.ratio)
        << ',' << (t.envelope_pass ? 1 : 0) << ',';
    for (size_t r = 0; r < t.final_counts.size(); ++r) {
      out << (r ? ";" : "") << Fmt(t.final_counts[r]);
    }
    out << '\n';
  }
}

std::vector<TrialResult> ReadTrialsCsv(std::istream& in) {
  std::vector<TrialResult> trials;
  std::string line;
  if (!std::getline(in, line)) return trials;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto cells = Split(line, ',');
    if (cells.size() < 8) {
      std::ostringstream msg;
      msg << "csv line " << line_no << ": expected 9 columns";
      throw ValidationError(msg.str());
    }
    TrialResult t;
    t.trial = static_cast<int>(ToInt("trial", cells[0]));
    t.seed = std::strtoull(cells[1].c_str(), nullptr, 10);
    t.sw = ToDouble("sw", cells[2]);
    t.psw = ToDouble("psw", cells[3]);
    t.objective = ToDouble("objective", cells[4]);
    t.opt = ToDouble("opt", cells[5]);
    t.ratio = ToDouble("ratio", cells[6]);
    t.envelope_pass = cells[7] == "1";
    if (cells.size() > 8) {
      for (const auto& v : Split(cells[8], ';')) {
        t.final_counts.push_back(ToDouble("final_counts", v));
      }
    }
    trials.push_back(std::move(t));
  }
  return trials;
}

void WriteSummary(const Summary& s, std::ostream& out) {
  out << "trials              " << s.trials << '\n'
      << "mean_ratio          " << Fmt(s.mean_ratio) << '\n'
      << "max_ratio           " << Fmt(s.max_ratio) << '\n'
      << "p50_ratio           " << Fmt(s.p50_ratio) << '\n'
      << "p90_ratio           " << Fmt(s.p90_ratio) << '\n'
      << "p99_ratio           " << Fmt(s.p99_ratio) << '\n'
      << "mean_objective      " << Fmt(s.mean_objective) << '\n'
      << "mean_opt            " << Fmt(s.mean_opt) << '\n'
      << "envelope_pass_rate  " << Fmt(s.envelope_pass_rate) << " (target "
      << Fmt(s.envelope_target) << ")\n";
}

std::string SummaryJson(const Summary& s) {
  // JSON has no infinity; unbounded ratios are written as null.
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json j;
  j["trials"] = s.trials;
  j["mean_ratio"] = num(s.mean_ratio);
  j["max_ratio"] = num(s.max_ratio);
  j["p50_ratio"] = num(s.p50_ratio);
  j["p90_ratio"] = num(s.p90_ratio);
  j["p99_ratio"] = num(s.p99_ratio);
  j["mean_objective"] = num(s.mean_objective);
  j["mean_opt"] = num(s.mean_opt);
  j["envelope_pass_rate"] = s.envelope_pass_rate;
  j["envelope_target"] = s.envelope_target;
  return j.dump();
}

}  // namespace contcount
