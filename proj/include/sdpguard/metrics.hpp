#pragma once

#include "sdpguard/suspects.hpp"

namespace sdpguard {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Empty-set conventions: nothing predicted gives precision 1, nothing to find
// gives recall 1, and F1 is 0 whenever precision + recall is 0.
Prf precision_recall_f1(const IdSet& predicted, const IdSet& truth);

double harmonic_f1(double precision, double recall);

// |M| / N for an initial suspect split.
double malicious_ratio(const SuspectSets& sets);

}  // namespace sdpguard
