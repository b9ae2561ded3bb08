#include "contcount/envelope.h"

#include <cmath>
#include <sstream>

#include "contcount/errors.h"

namespace contcount {

EnvelopeReport EnvelopeCheck(const Trace& true_counts, const Trace& released,
                             const AccuracyEnvelope& env) {
  if (true_counts.size() != released.size()) {
    std::ostringstream msg;
    msg << "trace length mismatch: " << true_counts.size() << " true rows vs "
        << released.size() << " released rows";
    throw ValidationError(msg.str());
  }
  EnvelopeReport report;
  report.violations.resize(true_counts.size());
  for (size_t t = 0; t < true_counts.size(); ++t) {
    const auto& x = true_counts[t];
    const auto& y = released[t];
    if (x.size() != y.size()) {
      std::ostringstream msg;
      msg << "row " << t << " has " << x.size() << " true and " << y.size()
          << " released coordinates";
      throw ValidationError(msg.str());
    }
    report.violations[t].assign(x.size(), false);
    for (size_t r = 0; r < x.size(); ++r) {
      report.max_abs_error = std::max(report.max_abs_error, std::abs(y[r] - x[r]));
      if (!env.Contains(x[r], y[r])) {
        report.violations[t][r] = true;
        report.pass = false;
        if (report.first_violation < 0) report.first_violation = static_cast<int>(t);
      }
    }
  }
  return report;
}

}  // namespace contcount
