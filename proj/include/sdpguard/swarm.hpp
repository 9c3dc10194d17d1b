#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sdpguard/types.hpp"

namespace sdpguard {

struct Uav {
  int id = 0;
  Position3 true_pos = Position3::Zero();
  Position3 reported_pos = Position3::Zero();
  bool malicious = false;
};

struct Swarm {
  std::vector<Uav> uavs;
  double comm_range = 0.3;
  double cube_half_width = 0.5;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(uavs.size()); }
  Matrix3X<double> true_positions() const;
  Matrix3X<double> reported_positions() const;
  IdSet malicious_ids() const;
  void validate() const;
};

struct NoiseParams {
  double pos_var = 1e-6;
  double dist_var = 1e-6;
  void validate() const;
};

struct DirectedPair {
  int from = 0;
  int to = 0;
  auto operator<=>(const DirectedPair&) const = default;
};

// Sparse directed distances keyed by (from, to). Shared by the measurement set
// and the reported-geometry matrix; the two are distinct types on purpose.
class PairDistances {
 public:
  PairDistances() = default;
  explicit PairDistances(int n);

  int size() const { return n_; }
  bool contains(int i, int j) const { return entries_.count({i, j}) != 0; }
  std::optional<double> find(int i, int j) const;
  double at(int i, int j) const;
  void set(int i, int j, double r);
  void erase(int i, int j) { entries_.erase({i, j}); }
  std::size_t entry_count() const { return entries_.size(); }
  const std::map<DirectedPair, double>& entries() const { return entries_; }

  // true if i and j share an entry in either direction
  bool linked(int i, int j) const { return contains(i, j) || contains(j, i); }

 protected:
  void check_ids(int i, int j) const;

 private:
  int n_ = 0;
  std::map<DirectedPair, double> entries_;
};

class MeasurementSet : public PairDistances {
 public:
  using PairDistances::PairDistances;
};

inline constexpr double kMinMeasuredDistance = 1e-12;

Swarm generate_swarm(int n, double cube_half_width, double comm_range, std::uint64_t seed);

// Perturbs reported positions of benign UAVs. Draws are consumed for every UAV
// so that marking someone malicious never shifts anybody else's noise.
Swarm apply_position_noise(Swarm swarm, const NoiseParams& noise, std::uint64_t seed);

MeasurementSet measure_distances(const Swarm& swarm, const NoiseParams& noise, std::uint64_t seed);

// Symmetrized measurement neighbours of k.
IdSet neighbor_set(const MeasurementSet& measurements, int k);

// UAVs whose reported position lies within comm_range of k's reported position.
IdSet reported_neighbors(const Swarm& swarm, int k);

}  // namespace sdpguard
