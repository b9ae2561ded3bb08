#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "contcount/errors.h"
#include "contcount/games.h"

namespace contcount {

namespace {

// Reads non-empty, comment-stripped lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream Next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        return std::istringstream(line);
      }
    }
    std::ostringstream msg;
    msg << "unexpected end of input, expected " << what;
    throw ValidationError(msg.str());
  }

  int line() const { return line_no_; }

  [[noreturn]] void Fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "line " << line_no_ << ": " << what;
    throw ValidationError(msg.str());
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

template <typename T>
std::vector<T> ReadAll(std::istringstream& row, const LineReader& reader) {
  std::vector<T> out;
  T v;
  while (row >> v) out.push_back(v);
  if (!row.eof()) reader.Fail("malformed number");
  return out;
}

void ReadHeader(LineReader& reader, int& a, int& b, const char* what) {
  auto row = reader.Next(what);
  if (!(row >> a >> b)) reader.Fail(std::string("expected ") + what);
}

double Param(const InstanceParams& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

int IntParam(const InstanceParams& p, const std::string& key, int fallback) {
  const double v = Param(p, key, fallback);
  if (v != std::floor(v)) throw ParameterError(key + " must be an integer");
  return static_cast<int>(v);
}

}  // namespace

ResourceSharingInstance ReadResourceSharing(std::istream& in) {
  LineReader reader(in);
  ResourceSharingInstance inst;
  ReadHeader(reader, inst.n, inst.m, "header 'n m'");
  if (inst.n < 1 || inst.m < 1) reader.Fail("n and m must be >= 1");
  for (int r = 0; r < inst.m; ++r) {
    auto row = reader.Next("value curve");
    inst.curves.push_back({ReadAll<double>(row, reader)});
  }
  for (int i = 0; i < inst.n; ++i) {
    auto row = reader.Next("action set");
    inst.action_sets.push_back(ReadAll<int>(row, reader));
  }
  inst.Validate();
  return inst;
}

CutInstance ReadCut(std::istream& in) {
  LineReader reader(in);
  CutInstance inst;
  int edges = 0;
  ReadHeader(reader, inst.n, edges, "header 'n edges'");
  if (inst.n < 1 || edges < 0) reader.Fail("bad cut header");
  inst.adj.resize(inst.n);
  for (int e = 0; e < edges; ++e) {
    auto row = reader.Next("edge");
    int u = 0, v = 0;
    if (!(row >> u >> v)) reader.Fail("expected edge 'u v'");
    if (u < 0 || v < 0 || u >= inst.n || v >= inst.n) {
      reader.Fail("edge endpoint out of range");
    }
    inst.adj[u].push_back(v);
    if (u != v) inst.adj[v].push_back(u);
  }
  inst.Validate();
  return inst;
}

SchedulingInstance ReadScheduling(std::istream& in) {
  LineReader reader(in);
  SchedulingInstance inst;
  ReadHeader(reader, inst.n, inst.m, "header 'n m'");
  if (inst.n < 1 || inst.m < 1) reader.Fail("n and m must be >= 1");
  for (int k = 0; k < inst.n; ++k) {
    auto row = reader.Next("job sizes");
    inst.sizes.push_back(ReadAll<double>(row, reader));
  }
  inst.Validate();
  return inst;
}

CostSharingInstance ReadCostSharing(std::istream& in) {
  LineReader reader(in);
  CostSharingInstance inst;
  ReadHeader(reader, inst.n, inst.m, "header 'n m'");
  if (inst.n < 1 || inst.m < 1) reader.Fail("n and m must be >= 1");
  auto costs = reader.Next("set costs");
  inst.costs = ReadAll<double>(costs, reader);
  for (int i = 0; i < inst.n; ++i) {
    auto row = reader.Next("allowed sets");
    inst.allowed.push_back(ReadAll<int>(row, reader));
  }
  inst.Validate();
  return inst;
}

GameInstance ReadInstance(GameKind kind, std::istream& in) {
  GameInstance inst;
  inst.kind = kind;
  switch (kind) {
    case GameKind::kResource:
    case GameKind::kFuture:
      inst.resource = ReadResourceSharing(in);
      break;
    case GameKind::kCut:
      inst.cut = ReadCut(in);
      break;
    case GameKind::kScheduling:
      inst.scheduling = ReadScheduling(in);
      break;
    case GameKind::kCost:
      inst.cost = ReadCostSharing(in);
      break;
  }
  return inst;
}

GameInstance LoadInstanceFile(GameKind kind, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file '" + path + "'");
  try {
    return ReadInstance(kind, in);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void WriteInstance(const GameInstance& inst, std::ostream& out) {
  out.precision(17);
  auto write_list = [&out](const auto& list) {
    for (size_t j = 0; j < list.size(); ++j) out << (j ? " " : "") << list[j];
    out << '\n';
  };
  switch (inst.kind) {
    case GameKind::kResource:
    case GameKind::kFuture:
      out << inst.resource.n << ' ' << inst.resource.m << '\n';
      for (const auto& c : inst.resource.curves) write_list(c.values);
      for (const auto& a : inst.resource.action_sets) write_list(a);
      break;
    case GameKind::kCut:
      out << inst.cut.n << ' ' << inst.cut.EdgeCount() << '\n';
      for (int u = 0; u < inst.cut.n; ++u) {
        for (int v : inst.cut.adj[u]) {
          if (u < v) out << u << ' ' << v << '\n';
        }
      }
      break;
    case GameKind::kScheduling:
      out << inst.scheduling.n << ' ' << inst.scheduling.m << '\n';
      for (const auto& row : inst.scheduling.sizes) write_list(row);
      break;
    case GameKind::kCost:
      out << inst.cost.n << ' ' << inst.cost.m << '\n';
      write_list(inst.cost.costs);
      for (const auto& a : inst.cost.allowed) write_list(a);
      break;
  }
}

// ---------------------------------------------------------------------------
// Constructions

namespace instances {

ResourceSharingInstance Intro(int n, double eps) {
  if (n < 1) throw ParameterError("n must be >= 1");
  ResourceSharingInstance inst;
  inst.n = n;
  inst.m = n + 1;
  ValueCurve pub;
  for (int k = 0; k < n; ++k) pub.values.push_back(1.0 / (k + 1));
  inst.curves.push_back(pub);
  for (int i = 0; i < n; ++i) {
    inst.curves.push_back({std::vector<double>(n, 1.0 - eps)});
    inst.action_sets.push_back({0, i + 1});
  }
  inst.Validate();
  return inst;
}

ResourceSharingInstance NoInfo(int n, double h) {
  if (n < 1) throw ParameterError("n must be >= 1");
  if (!(h >= 1.0)) throw ParameterError("H must be >= 1");
  ResourceSharingInstance inst;
  inst.n = n;
  inst.m = n + 1;
  inst.curves.push_back({std::vector<double>(n, 1.0)});
  for (int i = 0; i < n; ++i) {
    ValueCurve c{std::vector<double>(std::max(n, 2), 0.0)};
    c.values[0] = h;
    inst.curves.push_back(c);
    inst.action_sets.push_back({0, i + 1});
  }
  inst.Validate();
  return inst;
}

ResourceSharingInstance NoInfoSpecial(int n) {
  if (n < 1) throw ParameterError("n must be >= 1");
  ResourceSharingInstance inst;
  inst.n = n;
  inst.m = n + 1;
  ValueCurve shared;
  ValueCurve own;
  for (int k = 0; k < n; ++k) {
    shared.values.push_back(1.0 / (k + 1));
    own.values.push_back(static_cast<double>(n) / (k + 1));
  }
  inst.curves.push_back(shared);
  std::vector<int> all;
  for (int r = 0; r <= n; ++r) all.push_back(r);
  for (int i = 0; i < n; ++i) {
    inst.curves.push_back(own);
    inst.action_sets.push_back(all);
  }
  inst.Validate();
  return inst;
}

ResourceSharingInstance LbUndom(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must be in (0, 1)");
  ResourceSharingInstance inst;
  inst.n = 2;
  inst.m = 2;
  inst.curves = {{{1.0, 0.0}}, {{rho, rho}}};
  inst.action_sets = {{1}, {0, 1}};
  inst.Validate();
  return inst;
}

CutInstance Cycle(int nodes) {
  if (nodes < 3) throw ParameterError("a cycle needs at least 3 nodes");
  CutInstance inst;
  inst.n = nodes;
  inst.adj.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    inst.adj[i] = {(i + nodes - 1) % nodes, (i + 1) % nodes};
  }
  inst.Validate();
  return inst;
}

CutInstance CompleteBipartite(int a, int b) {
  if (a < 1 || b < 1) throw ParameterError("both sides must be nonempty");
  CutInstance inst;
  inst.n = a + b;
  inst.adj.resize(a + b);
  for (int u = 0; u < a; ++u) {
    for (int v = a; v < a + b; ++v) {
      inst.adj[u].push_back(v);
      inst.adj[v].push_back(u);
    }
  }
  inst.Validate();
  return inst;
}

SchedulingInstance SchedTwoByTwo() {
  SchedulingInstance inst;
  inst.n = 2;
  inst.m = 2;
  inst.sizes = {{0.0, 1.0}, {1.0, 0.0}};
  return inst;
}

CostSharingInstance CostPublicPrivate(int n, double eps) {
  if (n < 1) throw ParameterError("n must be >= 1");
  if (!(eps > 0.0)) throw ParameterError("eps must be > 0");
  CostSharingInstance inst;
  inst.n = n;
  inst.m = n + 1;
  inst.costs.assign(n + 1, 1.0);
  inst.costs[0] = 1.0 + eps;
  for (int i = 0; i < n; ++i) inst.allowed.push_back({0, i + 1});
  inst.Validate();
  return inst;
}

ResourceSharingInstance FutureLb(double w, double eps) {
  if (!(w >= 1.0)) throw ParameterError("w must be >= 1");
  if (!(eps > 0.0 && eps < w)) throw ParameterError("eps must be in (0, w)");
  ResourceSharingInstance inst;
  inst.n = 2;
  inst.m = 2;
  inst.curves = {{{w, 0.5}}, {{w - eps, w - eps}}};
  inst.action_sets = {{0, 1}, {0}};
  inst.Validate();
  return inst;
}

ValueCurve MarketCurve(double c, int n) {
  ValueCurve curve;
  for (int k = 0; k < n; ++k) curve.values.push_back(c / (k + 1));
  return curve;
}

ResourceSharingInstance SingleMarket(int n, double c) {
  if (n < 1) throw ParameterError("n must be >= 1");
  ResourceSharingInstance inst;
  inst.n = n;
  inst.m = 1;
  inst.curves = {MarketCurve(c, n)};
  inst.action_sets.assign(n, {0});
  inst.Validate();
  return inst;
}

ResourceSharingInstance MarketUndom(int n, double eps) {
  if (n < 1) throw ParameterError("n must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must be in (0, 1)");
  ResourceSharingInstance inst;
  inst.n = n;
  inst.m = n + 1;
  inst.curves.push_back(MarketCurve(1.0, n));
  for (int i = 1; i <= n; ++i) {
    inst.curves.push_back(
        MarketCurve(static_cast<double>(n - i + 1) * (1.0 - eps) / i, n));
    inst.action_sets.push_back({0, i});
  }
  inst.Validate();
  return inst;
}

}  // namespace instances

const std::vector<NamedInstance>& NamedInstances() {
  static const std::vector<NamedInstance> kAll = {
      {"intro", GameKind::kResource,
       "public v(k)=1/(k+1) vs n private resources worth 1-eps (n, eps)"},
      {"noinfo", GameKind::kResource,
       "twin construction: private worth H once, shared flat 1 (n, H)"},
      {"noinfospecial", GameKind::kResource,
       "shared 1/(k+1) vs private n/(k+1), full action sets (n)"},
      {"lb-undom", GameKind::kResource,
       "two players, one-shot resource vs flat rho (rho)"},
      {"cycle", GameKind::kCut, "cycle on 2n nodes (n)"},
      {"k33", GameKind::kCut, "complete bipartite K_{3,3}"},
      {"sched2x2", GameKind::kScheduling, "t1=(0,1), t2=(1,0)"},
      {"cost-public", GameKind::kCost,
       "public set 1+eps vs private unit sets (n, eps)"},
      {"future-lb", GameKind::kFuture,
       "step curve (w, 1/2) vs flat w-eps, two players (w, eps)"},
      {"market", GameKind::kFuture, "one market of total value c (n, c)"},
      {"marketundom", GameKind::kFuture,
       "market 0 worth 1 vs market i worth (n-i+1)(1-eps)/i (n, eps)"},
  };
  return kAll;
}

GameInstance MakeNamedInstance(const std::string& name,
                               const InstanceParams& params) {
  GameInstance inst;
  const int n = IntParam(params, "n", 100);
  if (name == "intro") {
    inst.kind = GameKind::kResource;
    inst.resource = instances::Intro(n, Param(params, "eps", 0.01));
  } else if (name == "noinfo") {
    inst.kind = GameKind::kResource;
    inst.resource = instances::NoInfo(n, Param(params, "H", 10.0));
  } else if (name == "noinfospecial") {
    inst.kind = GameKind::kResource;
    inst.resource = instances::NoInfoSpecial(n);
  } else if (name == "lb-undom") {
    inst.kind = GameKind::kResource;
    inst.resource = instances::LbUndom(Param(params, "rho", 0.01));
  } else if (name == "cycle") {
    inst.kind = GameKind::kCut;
    inst.cut = instances::Cycle(2 * IntParam(params, "n", 20));
  } else if (name == "k33") {
    inst.kind = GameKind::kCut;
    inst.cut = instances::CompleteBipartite(3, 3);
  } else if (name == "sched2x2") {
    inst.kind = GameKind::kScheduling;
    inst.scheduling = instances::SchedTwoByTwo();
  } else if (name == "cost-public") {
    inst.kind = GameKind::kCost;
    inst.cost = instances::CostPublicPrivate(IntParam(params, "n", 10),
                                             Param(params, "eps", 0.1));
  } else if (name == "future-lb") {
    inst.kind = GameKind::kFuture;
    inst.resource =
        instances::FutureLb(Param(params, "w", 5.0), Param(params, "eps", 0.1));
  } else if (name == "market") {
    inst.kind = GameKind::kFuture;
    inst.resource = instances::SingleMarket(n, Param(params, "c", 1.0));
  } else if (name == "marketundom") {
    inst.kind = GameKind::kFuture;
    inst.resource = instances::MarketUndom(n, Param(params, "eps", 0.01));
  } else {
    throw LookupError("unknown instance 'paper:" + name + "'");
  }
  return inst;
}

GameInstance ResolveInstance(GameKind kind, const std::string& source,
                             const InstanceParams& params) {
  const std::string prefix = "paper:";
  if (source.rfind(prefix, 0) == 0) {
    GameInstance inst = MakeNamedInstance(source.substr(prefix.size()), params);
    const bool compatible =
        inst.kind == kind ||
        (inst.kind == GameKind::kResource && kind == GameKind::kFuture) ||
        (inst.kind == GameKind::kFuture && kind == GameKind::kResource);
    if (!compatible) {
      throw ValidationError("instance '" + source + "' is a " +
                            GameKindName(inst.kind) + " game, not " +
                            GameKindName(kind));
    }
    inst.kind = kind;
    return inst;
  }
  return LoadInstanceFile(kind, source);
}

}  // namespace contcount
