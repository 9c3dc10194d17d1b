#include "sdpguard/metrics.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace sdpguard {

double harmonic_f1(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

Prf precision_recall_f1(const IdSet& predicted, const IdSet& truth) {
  IdSet hit;
  std::set_intersection(predicted.begin(), predicted.end(), truth.begin(), truth.end(),
                        std::inserter(hit, hit.end()));
  Prf m;
  m.precision = predicted.empty() ? 1.0 : static_cast<double>(hit.size()) / predicted.size();
  m.recall = truth.empty() ? 1.0 : static_cast<double>(hit.size()) / truth.size();
  // with the conventions above a one-sided empty set already scores 1 and 0
  m.f1 = harmonic_f1(m.precision, m.recall);
  return m;
}

double malicious_ratio(const SuspectSets& sets) {
  const std::size_t n = sets.suspected.size() + sets.trusted.size();
  if (n == 0) throw std::invalid_argument("malicious_ratio of an empty swarm");
  return static_cast<double>(sets.suspected.size()) / static_cast<double>(n);
}

}  // namespace sdpguard
