#include <algorithm>
#include <random>
#include <stdexcept>
#include <tuple>

#include "sdpguard/detectors.hpp"
#include "sdpguard/rng.hpp"

namespace sdpguard {

IdSet nlos_baseline(const ReportedDistanceMatrix& e_r, const MeasurementSet& e_n, int m,
                    std::uint64_t seed, double tolerance_sq) {
  if (e_r.size() != e_n.size()) throw std::invalid_argument("matrix sizes differ");
  if (m < 0) throw std::invalid_argument("malicious count must be >= 0");

  struct Ranked {
    double score;
    DirectedPair pair;
  };
  std::vector<Ranked> ranked;
  for (const auto& [p, r] : e_n.entries()) {
    const auto e = e_r.find(p.from, p.to);
    if (!e) continue;
    const double score = squared_discrepancy(r, *e);
    if (score >= tolerance_sq) ranked.push_back({score, p});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return std::tie(b.score, a.pair) < std::tie(a.score, b.pair);
  });

  // candidates in order of first appearance, weighted by 1 / rank of that pair
  std::vector<int> pool;
  std::vector<double> weight;
  IdSet seen;
  for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
    for (int id : {ranked[rank].pair.from, ranked[rank].pair.to}) {
      if (seen.insert(id).second) {
        pool.push_back(id);
        weight.push_back(1.0 / static_cast<double>(rank + 1));
      }
    }
  }
  if (static_cast<std::size_t>(m) >= pool.size()) return IdSet(pool.begin(), pool.end());

  auto gen = rng::engine(seed, "baseline.nlos");
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  IdSet out;
  for (int draw = 0; draw < m; ++draw) {
    double total = 0.0;
    for (double w : weight) total += w;
    double u = u01(gen) * total;
    std::size_t pick = 0;
    for (; pick + 1 < pool.size(); ++pick) {
      if (weight[pick] > 0.0 && u < weight[pick]) break;
      u -= weight[pick];
    }
    while (weight[pick] == 0.0) --pick;  // round-off landed past the last live entry
    out.insert(pool[pick]);
    weight[pick] = 0.0;
  }
  return out;
}

IdSet random_baseline(const IdSet& suspected, int m, std::uint64_t seed) {
  if (m < 0) throw std::invalid_argument("malicious count must be >= 0");
  std::vector<int> ids(suspected.begin(), suspected.end());
  auto gen = rng::engine(seed, "baseline.random");
  std::shuffle(ids.begin(), ids.end(), gen);
  ids.resize(std::min<std::size_t>(ids.size(), static_cast<std::size_t>(m)));
  return IdSet(ids.begin(), ids.end());
}

}  // namespace sdpguard
