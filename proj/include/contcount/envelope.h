#ifndef CONTCOUNT_ENVELOPE_H_
#define CONTCOUNT_ENVELOPE_H_

#include <vector>

#include "contcount/counters.h"

namespace contcount {

// Rows are time steps, columns are coordinates.
using Trace = std::vector<std::vector<double>>;

struct EnvelopeReport {
  bool pass = true;
  // violations[t][r] is true when step t, coordinate r left the envelope.
  std::vector<std::vector<bool>> violations;
  // First violating step (0-based row), or -1.
  int first_violation = -1;
  // Largest |y - x| seen, for diagnostics.
  double max_abs_error = 0.0;
};

// Throws ValidationError when the traces differ in shape.
EnvelopeReport EnvelopeCheck(const Trace& true_counts, const Trace& released,
                             const AccuracyEnvelope& env);

}  // namespace contcount

#endif  // CONTCOUNT_ENVELOPE_H_
