#include "contcount/cli.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "contcount/counters.h"
#include "contcount/errors.h"
#include "contcount/games.h"
#include "contcount/harness.h"
#include "contcount/optimal.h"
#include "contcount/scenarios.h"
#include "contcount/strategies.h"

namespace contcount {

namespace {

struct MechFlags {
  std::string mech = "perfect";
  std::vector<std::string> wrap;
  double eps = 1.0;
  double alpha = 2.0;
  double gamma = 0.1;
  double ctree = 4.0;
  int warmup = 0;
  bool zero_noise = false;
};

struct Args {
  uint64_t seed = 1;
  bool json = false;

  // counter run
  MechFlags counter;
  int n = 0;
  int m = 1;
  std::string stream;
  std::string out;

  // game run
  std::string config;
  std::string game = "resource";
  std::string instance = "random";
  std::vector<std::string> params;
  int game_n = 10;
  int game_m = 4;
  MechFlags game_mech;
  std::string strategy = "greedy";
  int quanta = 1;
  int trials = 1;
  int threads = 0;
  std::string opt_mode = "exact";
  std::string game_out;

  // opt
  std::string opt_game;
  std::string opt_instance;
  std::vector<std::string> opt_params;
  std::string opt_mode_only = "exact";

  // reproduce
  std::string scenario;
  int scenario_trials = 0;
  int scenario_threads = 0;
};

void AddMechFlags(CLI::App* sub, MechFlags& f) {
  sub->add_option("--mech", f.mech, "treesum, ftsum, perfect or empty")
      ->capture_default_str();
  sub->add_option("--wrap", f.wrap,
                  "wrappers applied innermost first: under, mono, clamp")
      ->delimiter(',');
  sub->add_option("--eps", f.eps, "privacy epsilon")->capture_default_str();
  sub->add_option("--alpha", f.alpha, "FTSum multiplicative accuracy")
      ->capture_default_str();
  sub->add_option("--gamma", f.gamma, "failure probability of the envelope")
      ->capture_default_str();
  sub->add_option("--ctree", f.ctree, "TreeSum bound constant")
      ->capture_default_str();
  sub->add_option("--warmup", f.warmup, "randomized warm-up length")
      ->capture_default_str();
  sub->add_flag("--zero-noise", f.zero_noise, "replace every noise draw by 0");
}

MechanismSpec ToSpec(const MechFlags& f) {
  MechanismSpec s;
  s.kind = ParseMechanismKind(f.mech);
  for (const auto& w : f.wrap) s.wrappers.push_back(ParseWrapperKind(w));
  s.epsilon = f.eps;
  s.alpha = f.alpha;
  s.gamma = f.gamma;
  s.c_tree = f.ctree;
  s.warmup = f.warmup;
  s.zero_noise = f.zero_noise;
  if (s.warmup < 0) throw ParameterError("warmup must be >= 0");
  return s;
}

std::unique_ptr<CLI::App> BuildApp(Args& a) {
  auto app = std::make_unique<CLI::App>(
      "Private counters for sequential resource-sharing games", "contcount");
  app->require_subcommand(1);
  app->add_option("--seed", a.seed, "base random seed")->capture_default_str();
  app->add_flag("--json", a.json, "print the summary as one JSON object");

  auto* counter = app->add_subcommand("counter", "run a counter mechanism");
  counter->require_subcommand(1);
  counter->fallthrough();
  auto* crun = counter->add_subcommand(
      "run", "feed a stream to a counter and write every release as CSV");
  crun->fallthrough();
  AddMechFlags(crun, a.counter);
  crun->add_option("--n", a.n, "horizon (defaults to the stream length)");
  crun->add_option("--m", a.m, "number of coordinates")->capture_default_str();
  crun->add_option("--stream", a.stream,
                   "stream file: one line of m decimals per step, # comments");
  crun->add_option("--out", a.out, "CSV destination (stdout when omitted)");

  auto* game = app->add_subcommand("game", "play games under a counter");
  game->require_subcommand(1);
  game->fallthrough();
  auto* grun = game->add_subcommand(
      "run", "run Monte-Carlo trials and print the competitive-ratio summary");
  grun->fallthrough();
  grun->add_option("--config", a.config,
                   "key = value experiment file; other flags override it");
  grun->add_option("--game", a.game, "resource, cut, scheduling, cost, future")
      ->capture_default_str();
  grun->add_option("--instance", a.instance,
                   "random, paper:<name> or an instance file")
      ->capture_default_str();
  grun->add_option("--param", a.params, "instance parameter key=value");
  grun->add_option("--n", a.game_n, "players of random instances")
      ->capture_default_str();
  grun->add_option("--m", a.game_m, "resources of random instances")
      ->capture_default_str();
  AddMechFlags(grun, a.game_mech);
  grun->add_option("--strategy", a.strategy,
                   "greedy, scripted:<name> or belief:<offset>")
      ->capture_default_str();
  grun->add_option("--quanta", a.quanta, "investment quanta per player")
      ->capture_default_str();
  grun->add_option("--trials", a.trials, "number of trials")
      ->capture_default_str();
  grun->add_option("--threads", a.threads, "worker threads, 0 for all cores")
      ->capture_default_str();
  grun->add_option("--opt", a.opt_mode, "exact or greedy-upper")
      ->capture_default_str();
  grun->add_option("--out", a.game_out, "per-trial CSV destination");

  auto* opt = app->add_subcommand("opt", "solve an instance exactly");
  opt->fallthrough();
  opt->add_option("--game", a.opt_game, "resource, cut, scheduling, cost, future")
      ->required();
  opt->add_option("--instance", a.opt_instance, "paper:<name> or a file")
      ->required();
  opt->add_option("--param", a.opt_params, "instance parameter key=value");
  opt->add_option("--mode", a.opt_mode_only, "exact or greedy-upper")
      ->capture_default_str();

  auto* rep = app->add_subcommand("reproduce", "check one registered scenario");
  rep->fallthrough();
  rep->add_option("scenario", a.scenario, "scenario name")->required();
  rep->add_option("--trials", a.scenario_trials,
                  "override the scenario's trial count");
  rep->add_option("--threads", a.scenario_threads,
                  "worker threads, 0 for all cores");

  auto* list = app->add_subcommand("list-scenarios",
                                   "print every scenario with its claim");
  list->fallthrough();
  return app;
}

CLI::App* Find(CLI::App& app, const std::string& path) {
  CLI::App* cur = &app;
  std::istringstream in(path);
  std::string word;
  while (in >> word) cur = cur->get_subcommand(word);
  return cur;
}

std::string Fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

InstanceParams ParseParams(const std::vector<std::string>& items) {
  InstanceParams p;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParameterError("--param expects key=value, got '" + item + "'");
    }
    const std::string value = item.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') {
      throw ParameterError("--param " + item.substr(0, eq) + ": bad number");
    }
    p[item.substr(0, eq)] = v;
  }
  return p;
}

std::vector<std::vector<double>> ReadStream(const std::string& path, int m) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open stream file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::vector<double> a;
    std::string tok;
    while (row >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (*end != '\0') {
        throw ValidationError(path + ":" + std::to_string(line_no) +
                              ": bad number '" + tok + "'");
      }
      a.push_back(v);
    }
    if (a.empty()) continue;
    if (static_cast<int>(a.size()) != m) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(m) + " values, got " +
                            std::to_string(a.size()));
    }
    rows.push_back(std::move(a));
  }
  return rows;
}

int CounterRun(const Args& a, std::ostream& out) {
  if (a.m < 1) throw ParameterError("m must be >= 1");
  std::vector<std::vector<double>> stream;
  int n = a.n;
  if (!a.stream.empty()) {
    stream = ReadStream(a.stream, a.m);
    if (n == 0) n = static_cast<int>(stream.size());
    if (static_cast<int>(stream.size()) > n) {
      throw ValidationError("stream has " + std::to_string(stream.size()) +
                            " steps but n = " + std::to_string(n));
    }
  }
  if (n < 1) throw ParameterError("n must be >= 1");
  if (a.stream.empty()) {
    // Seeded demo stream: a unit update on a random coordinate half the time.
    RandomSource rng(a.seed, 0);
    for (int t = 0; t < n; ++t) {
      std::vector<double> row(a.m, 0.0);
      if (rng.UniformOpen() < 0.5) row[rng.NextU64() % a.m] = 1.0;
      stream.push_back(std::move(row));
    }
  }
  MechanismPtr mech =
      MakeMechanism(ToSpec(a.counter), n, a.m, 1.0, RandomSource(a.seed, 1));
  const AccuracyEnvelope env = mech->envelope();

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw ValidationError("cannot write '" + a.out + "'");
  }
  std::ostream& csv = a.out.empty() ? out : file;
  csv << "t,coord,true_x,released_y,in_envelope\n";
  long long violations = 0;
  double max_err = 0.0;
  for (size_t t = 0; t < stream.size(); ++t) {
    const std::vector<double>& y = mech->Update(stream[t]);
    const std::vector<double>& x = mech->TrueCounts();
    for (int r = 0; r < a.m; ++r) {
      const bool inside = env.Contains(x[r], y[r]);
      violations += !inside;
      max_err = std::max(max_err, std::fabs(y[r] - x[r]));
      csv << t + 1 << ',' << r << ',' << Fmt(x[r]) << ',' << Fmt(y[r]) << ','
          << (inside ? 1 : 0) << '\n';
    }
  }
  if (a.json) {
    nlohmann::json j = {{"mechanism", mech->Describe()},
                        {"steps", stream.size()},
                        {"coords", a.m},
                        {"alpha", env.alpha},
                        {"beta", env.beta},
                        {"gamma", env.gamma},
                        {"violations", violations},
                        {"max_abs_error", max_err}};
    out << j.dump() << "\n";
  } else if (!a.out.empty()) {
    out << "mechanism      " << mech->Describe() << "\n"
        << "steps          " << stream.size() << "\n"
        << "envelope       (" << env.alpha << ", " << env.beta << ", "
        << env.gamma << ")\n"
        << "violations     " << violations << "\n"
        << "max_abs_error  " << max_err << "\n";
  }
  return 0;
}

int GameRun(const Args& a, CLI::App& app, std::ostream& out) {
  CLI::App& grun = *Find(app, "game run");
  ExperimentConfig c;
  if (!a.config.empty()) c = ExperimentConfig::Load(a.config);
  auto given = [&](const char* flag) { return grun.count(flag) > 0; };
  if (given("--game")) c.game = ParseGameKind(a.game);
  if (given("--instance")) c.instance = a.instance;
  if (given("--param")) {
    for (const auto& [k, v] : ParseParams(a.params)) c.params[k] = v;
  }
  if (given("--n")) c.n = a.game_n;
  if (given("--m")) c.m = a.game_m;
  const MechFlags& f = a.game_mech;
  if (given("--mech")) c.mechanism.kind = ParseMechanismKind(f.mech);
  if (given("--wrap")) {
    c.mechanism.wrappers.clear();
    for (const auto& w : f.wrap) c.mechanism.wrappers.push_back(ParseWrapperKind(w));
  }
  if (given("--eps")) c.mechanism.epsilon = f.eps;
  if (given("--alpha")) c.mechanism.alpha = f.alpha;
  if (given("--gamma")) c.mechanism.gamma = f.gamma;
  if (given("--ctree")) c.mechanism.c_tree = f.ctree;
  if (given("--warmup")) c.mechanism.warmup = f.warmup;
  if (given("--zero-noise")) c.mechanism.zero_noise = f.zero_noise;
  if (given("--strategy")) c.strategy = a.strategy;
  if (given("--quanta")) c.quanta = a.quanta;
  if (given("--trials")) c.trials = a.trials;
  if (given("--threads")) c.threads = a.threads;
  if (given("--opt")) {
    if (a.opt_mode == "exact") {
      c.opt_mode = OptMode::kExact;
    } else if (a.opt_mode == "greedy-upper") {
      c.opt_mode = OptMode::kGreedyUpperBound;
    } else {
      throw ParameterError("--opt expects exact or greedy-upper");
    }
  }
  if (given("--out")) c.output = a.game_out;
  if (a.config.empty() || app.count("--seed") > 0) {
    c.seed = a.seed;
  }

  const ExperimentResult r = RunExperiment(c);
  if (!c.output.empty()) {
    std::ofstream csv(c.output);
    if (!csv) throw ValidationError("cannot write '" + c.output + "'");
    WriteTrialsCsv(r.trials, csv);
  }
  if (a.json) {
    out << SummaryJson(r.summary) << "\n";
  } else {
    out << "game           " << GameKindName(c.game) << "\n"
        << "mechanism      " << r.mechanism << "\n"
        << "strategy       " << c.strategy << "\n"
        << "opt            " << r.opt_method << "\n";
    WriteSummary(r.summary, out);
  }
  return 0;
}

int Opt(const Args& a, std::ostream& out) {
  OptMode mode;
  if (a.opt_mode_only == "exact") {
    mode = OptMode::kExact;
  } else if (a.opt_mode_only == "greedy-upper") {
    mode = OptMode::kGreedyUpperBound;
  } else {
    throw ParameterError("--mode expects exact or greedy-upper");
  }
  const GameKind kind = ParseGameKind(a.opt_game);
  const GameInstance inst =
      ResolveInstance(kind, a.opt_instance, ParseParams(a.opt_params));
  const OptResult r = Optimum(inst, mode);
  if (a.json) {
    nlohmann::json j = {{"value", r.value},
                        {"method", r.method},
                        {"exact", r.exact},
                        {"witness", r.witness}};
    if (kind == GameKind::kScheduling) j["lower_bound"] = r.lower_bound;
    out << j.dump() << "\n";
    return 0;
  }
  out << "value    " << Fmt(r.value) << "\n"
      << "method   " << r.method << (r.exact ? "" : " (upper bound)") << "\n";
  if (kind == GameKind::kScheduling) {
    out << "lower    " << Fmt(r.lower_bound) << "\n";
  }
  out << "witness ";
  for (int w : r.witness) out << ' ' << w;
  out << "\n";
  return 0;
}

int ReproduceCmd(const Args& a, std::ostream& out) {
  if (a.scenario_trials < 0) throw ParameterError("trials must be >= 0");
  if (a.scenario_threads < 0) throw ParameterError("threads must be >= 0");
  ScenarioOptions o;
  o.seed = a.seed;
  o.trials = a.scenario_trials;
  o.threads = a.scenario_threads;
  const ScenarioReport r = Reproduce(a.scenario, o);
  if (a.json) {
    nlohmann::json j = {{"scenario", r.name},  {"claim", r.claim},
                        {"bound", r.bound},    {"measured", r.measured},
                        {"notes", r.details}, {"pass", r.pass}};
    out << j.dump() << "\n";
  } else {
    PrintReport(r, out);
  }
  return r.pass ? 0 : 2;
}

int ListScenarios(const Args& a, std::ostream& out) {
  if (a.json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : Scenarios()) {
      j.push_back({{"scenario", s.name}, {"claim", s.claim}});
    }
    out << j.dump() << "\n";
    return 0;
  }
  size_t width = 0;
  for (const auto& s : Scenarios()) width = std::max(width, s.name.size());
  for (const auto& s : Scenarios()) {
    out << s.name << std::string(width + 2 - s.name.size(), ' ') << s.claim
        << "\n";
  }
  return 0;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Args a;
  auto app = BuildApp(a);
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app->parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app->help();
    return 1;
  }

  try {
    if (app->got_subcommand("counter")) return CounterRun(a, out);
    if (app->got_subcommand("game")) {
      return GameRun(a, *app, out);
    }
    if (app->got_subcommand("opt")) return Opt(a, out);
    if (app->got_subcommand("reproduce")) return ReproduceCmd(a, out);
    return ListScenarios(a, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

std::vector<std::string> CliCommands() {
  return {"", "counter run", "game run", "opt", "reproduce", "list-scenarios"};
}

std::string CliHelp(const std::string& path) {
  Args a;
  auto app = BuildApp(a);
  return Find(*app, path)->help();
}

std::vector<std::string> CliFlags(const std::string& path) {
  Args a;
  auto app = BuildApp(a);
  std::vector<std::string> flags;
  for (const CLI::Option* o : Find(*app, path)->get_options()) {
    for (const auto& name : o->get_lnames()) flags.push_back("--" + name);
  }
  return flags;
}

}  // namespace contcount
