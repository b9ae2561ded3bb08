#ifndef CONTCOUNT_SCENARIOS_H_
#define CONTCOUNT_SCENARIOS_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace contcount {

struct ScenarioOptions {
  uint64_t seed = 1;
  // 0 keeps each scenario's default trial count.
  int trials = 0;
  int threads = 0;
};

struct ScenarioReport {
  std::string name;
  std::string claim;
  std::string bound;
  std::string measured;
  bool pass = false;
  std::vector<std::string> details;
};

struct Scenario {
  std::string name;
  std::string claim;
  std::function<ScenarioReport(const ScenarioOptions&)> run;
};

const std::vector<Scenario>& Scenarios();

// Throws LookupError for an unknown name.
ScenarioReport Reproduce(const std::string& name,
                         const ScenarioOptions& options = {});

void PrintReport(const ScenarioReport& report, std::ostream& out);

}  // namespace contcount

#endif  // CONTCOUNT_SCENARIOS_H_
