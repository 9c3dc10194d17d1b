#include "sdpguard/detectors.hpp"

#include <map>
#include <stdexcept>

namespace sdpguard {

std::string to_string(NeighborhoodRule rule) {
  switch (rule) {
    case NeighborhoodRule::kReportedGeometry: return "reported";
    case NeighborhoodRule::kMeasured: return "measured";
    case NeighborhoodRule::kUnion: return "union";
  }
  return "reported";
}

NeighborhoodRule neighborhood_rule_from_string(const std::string& s) {
  if (s == "reported") return NeighborhoodRule::kReportedGeometry;
  if (s == "measured") return NeighborhoodRule::kMeasured;
  if (s == "union") return NeighborhoodRule::kUnion;
  throw std::invalid_argument("unknown neighborhood rule '" + s + "'");
}

std::string to_string(Assessment kind) {
  switch (kind) {
    case Assessment::kTrustedBase: return "trusted_base";
    case Assessment::kNeighborhood: return "neighborhood";
    case Assessment::kIndividual: return "individual";
  }
  return "neighborhood";
}

IdSet detector_neighborhood(const AttackedScenario& scenario, int k, NeighborhoodRule rule) {
  switch (rule) {
    case NeighborhoodRule::kReportedGeometry: return reported_neighbors(scenario.swarm, k);
    case NeighborhoodRule::kMeasured: return neighbor_set(scenario.measurements, k);
    case NeighborhoodRule::kUnion: {
      IdSet out = reported_neighbors(scenario.swarm, k);
      IdSet m = neighbor_set(scenario.measurements, k);
      out.insert(m.begin(), m.end());
      return out;
    }
  }
  return {};
}

namespace {

class Run {
 public:
  Run(const SuspectSets& init, const AttackedScenario& scenario, const DetectorOptions& options,
      std::string algorithm)
      : scn_(scenario), opt_(options) {
    const int n = scenario.swarm.size();
    if (!init.is_partition_of(n)) throw std::invalid_argument("initial sets are not a partition of the swarm");
    if (scenario.measurements.size() != n) throw std::invalid_argument("measurement set does not match swarm");
    res_.algorithm = std::move(algorithm);
    res_.initial = init;
    sets_ = init;
    linked_.resize(n);
    for (const auto& [p, r] : scenario.measurements.entries()) {
      linked_[p.from].insert(p.to);
      linked_[p.to].insert(p.from);
    }
  }

  DetectionResult execute(bool ecdi) {
    if (sets_.suspected.empty()) return finish();

    if (opt_.check_trusted_base && !sets_.trusted.empty()) {
      const OracleStatus st = verdict(sets_.trusted, Assessment::kTrustedBase, -1);
      if (st != OracleStatus::kFeasible) {
        res_.trusted_base_infeasible = true;
        ++res_.passes;
        for (int p : snapshot()) individual(p);
        return finish();
      }
    }

    bool individuals = ecdi && opt_.schedule == EcdiSchedule::kInterleaved;
    for (;;) {
      ++res_.passes;
      bool changed = false;
      for (int k : snapshot()) {
        if (!sets_.suspected.count(k)) continue;
        IdSet cluster = detector_neighborhood(scn_, k, opt_.neighborhood);
        cluster.insert(k);
        IdSet T = sets_.trusted;
        T.insert(cluster.begin(), cluster.end());

        bool ok = false;
        if (!opt_.require_connectivity || has_link(k, T)) {
          ok = verdict(T, Assessment::kNeighborhood, k) == OracleStatus::kFeasible;
        } else {
          unverifiable(Assessment::kNeighborhood, k, T.size());
        }
        if (ok) {
          IdSet moved;
          for (int x : cluster)
            if (sets_.suspected.count(x) && (!opt_.require_connectivity || has_link(x, T))) moved.insert(x);
          res_.trace.back().exonerated = moved;
          changed |= move(moved);
        } else if (individuals) {
          for (int p : cluster) {
            if (sets_.suspected.count(p)) changed |= individual(p);
          }
        }
      }
      if (!changed) {
        if (ecdi && !individuals) {
          individuals = true;
          continue;
        }
        break;
      }
    }
    return finish();
  }

 private:
  std::vector<int> snapshot() const { return {sets_.suspected.begin(), sets_.suspected.end()}; }

  bool has_link(int x, const IdSet& others) const {
    for (int y : linked_[x])
      if (y != x && others.count(y)) return true;
    return false;
  }

  bool individual(int p) {
    if (opt_.require_connectivity && !has_link(p, sets_.trusted)) {
      unverifiable(Assessment::kIndividual, p, sets_.trusted.size() + 1);
      return false;
    }
    IdSet T = sets_.trusted;
    T.insert(p);
    if (verdict(T, Assessment::kIndividual, p) != OracleStatus::kFeasible) return false;
    res_.trace.back().exonerated = {p};
    return move({p});
  }

  OracleStatus verdict(const IdSet& T, Assessment kind, int assessed) {
    TraceEntry e;
    e.pass = res_.passes;
    e.kind = kind;
    e.assessed = assessed;
    e.subnetwork_size = static_cast<int>(T.size());
    std::vector<int> key(T.begin(), T.end());
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      e.status = it->second;
      e.cached = true;
    } else {
      const OracleResult r = check_feasibility(assemble(T, scn_, opt_.assembly), opt_.oracle);
      ++res_.oracle_calls;
      e.status = r.status;
      if (r.status == OracleStatus::kUnknown) res_.oracle_breakdown = true;
      if (r.status != OracleStatus::kUnknown || opt_.unknown == UnknownPolicy::kTreatAsInfeasible)
        cache_.emplace(std::move(key), r.status);
    }
    res_.trace.push_back(e);
    return *e.status;
  }

  void unverifiable(Assessment kind, int assessed, std::size_t size) {
    TraceEntry e;
    e.pass = res_.passes;
    e.kind = kind;
    e.assessed = assessed;
    e.subnetwork_size = static_cast<int>(size);
    res_.trace.push_back(e);
  }

  bool move(const IdSet& ids) {
    if (ids.empty()) return false;
    for (int x : ids) {
      sets_.suspected.erase(x);
      sets_.trusted.insert(x);
    }
    if (opt_.observer) opt_.observer(sets_);
    return true;
  }

  DetectionResult finish() {
    res_.predicted_malicious = sets_.suspected;
    return std::move(res_);
  }

  const AttackedScenario& scn_;
  const DetectorOptions& opt_;
  DetectionResult res_;
  SuspectSets sets_;
  std::vector<IdSet> linked_;
  std::map<std::vector<int>, OracleStatus> cache_;
};

}  // namespace

DetectionResult cdi(const SuspectSets& init, const AttackedScenario& scenario, const DetectorOptions& options) {
  return Run(init, scenario, options, "cdi").execute(false);
}

DetectionResult ecdi(const SuspectSets& init, const AttackedScenario& scenario, const DetectorOptions& options) {
  return Run(init, scenario, options, "ecdi").execute(true);
}

}  // namespace sdpguard
