#include "sdpguard/swarm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "sdpguard/rng.hpp"

namespace sdpguard {

Matrix3X<double> Swarm::true_positions() const {
  Matrix3X<double> out(3, size());
  for (const auto& u : uavs) out.col(u.id) = u.true_pos;
  return out;
}

Matrix3X<double> Swarm::reported_positions() const {
  Matrix3X<double> out(3, size());
  for (const auto& u : uavs) out.col(u.id) = u.reported_pos;
  return out;
}

IdSet Swarm::malicious_ids() const {
  IdSet out;
  for (const auto& u : uavs)
    if (u.malicious) out.insert(u.id);
  return out;
}

void Swarm::validate() const {
  if (!(comm_range > 0.0)) throw std::invalid_argument("comm_range must be positive");
  if (!(cube_half_width > 0.0)) throw std::invalid_argument("cube_half_width must be positive");
  for (int i = 0; i < size(); ++i) {
    if (uavs[i].id != i) throw std::invalid_argument("UAV ids must be 0..N-1 in order");
    if (!uavs[i].true_pos.allFinite() || !uavs[i].reported_pos.allFinite())
      throw std::invalid_argument("non-finite position for UAV " + std::to_string(i));
  }
}

void NoiseParams::validate() const {
  if (!(pos_var >= 0.0) || !std::isfinite(pos_var))
    throw std::invalid_argument("pos_var must be finite and non-negative");
  if (!(dist_var >= 0.0) || !std::isfinite(dist_var))
    throw std::invalid_argument("dist_var must be finite and non-negative");
}

PairDistances::PairDistances(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("negative swarm size");
}

void PairDistances::check_ids(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::out_of_range("pair (" + std::to_string(i) + "," + std::to_string(j) +
                            ") outside swarm of size " + std::to_string(n_));
  if (i == j) throw std::invalid_argument("self pair " + std::to_string(i));
}

std::optional<double> PairDistances::find(int i, int j) const {
  auto it = entries_.find({i, j});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double PairDistances::at(int i, int j) const {
  auto it = entries_.find({i, j});
  if (it == entries_.end())
    throw std::out_of_range("no entry for (" + std::to_string(i) + "," + std::to_string(j) + ")");
  return it->second;
}

void PairDistances::set(int i, int j, double r) {
  check_ids(i, j);
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument("distances must be positive and finite");
  entries_[{i, j}] = r;
}

Swarm generate_swarm(int n, double cube_half_width, double comm_range, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("swarm needs at least one UAV");
  if (!(cube_half_width > 0.0)) throw std::invalid_argument("cube_half_width must be positive");
  if (!(comm_range > 0.0)) throw std::invalid_argument("comm_range must be positive");

  auto gen = rng::engine(seed, "swarm.positions");
  std::uniform_real_distribution<double> coord(-cube_half_width, cube_half_width);

  Swarm s;
  s.comm_range = comm_range;
  s.cube_half_width = cube_half_width;
  s.seed = seed;
  s.uavs.resize(n);
  for (int i = 0; i < n; ++i) {
    Uav& u = s.uavs[i];
    u.id = i;
    for (int c = 0; c < 3; ++c) u.true_pos[c] = coord(gen);
    u.reported_pos = u.true_pos;
  }
  return s;
}

Swarm apply_position_noise(Swarm swarm, const NoiseParams& noise, std::uint64_t seed) {
  noise.validate();
  if (noise.pos_var == 0.0) return swarm;
  auto gen = rng::engine(seed, "swarm.position_noise");
  std::normal_distribution<double> n01(0.0, 1.0);
  const double sigma = std::sqrt(noise.pos_var);
  for (auto& u : swarm.uavs) {
    Position3 e;
    for (int c = 0; c < 3; ++c) e[c] = sigma * n01(gen);
    if (!u.malicious) u.reported_pos = u.true_pos + e;
  }
  return swarm;
}

MeasurementSet measure_distances(const Swarm& swarm, const NoiseParams& noise, std::uint64_t seed) {
  noise.validate();
  auto gen = rng::engine(seed, "swarm.distance_noise");
  std::normal_distribution<double> n01(0.0, 1.0);
  const double sigma = std::sqrt(noise.dist_var);

  const int n = swarm.size();
  MeasurementSet out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dist = (swarm.uavs[i].true_pos - swarm.uavs[j].true_pos).norm();
      if (dist > swarm.comm_range) continue;
      double r = dist;
      if (sigma > 0.0) r += sigma * n01(gen);
      out.set(i, j, std::max(r, kMinMeasuredDistance));
    }
  }
  return out;
}

IdSet neighbor_set(const MeasurementSet& measurements, int k) {
  if (k < 0 || k >= measurements.size()) throw std::out_of_range("neighbor_set: bad id");
  IdSet out;
  for (const auto& [p, r] : measurements.entries()) {
    if (p.from == k) out.insert(p.to);
    if (p.to == k) out.insert(p.from);
  }
  return out;
}

IdSet reported_neighbors(const Swarm& swarm, int k) {
  if (k < 0 || k >= swarm.size()) throw std::out_of_range("reported_neighbors: bad id");
  IdSet out;
  const Position3& xk = swarm.uavs[k].reported_pos;
  for (const auto& u : swarm.uavs) {
    if (u.id != k && (u.reported_pos - xk).norm() <= swarm.comm_range) out.insert(u.id);
  }
  return out;
}

}  // namespace sdpguard
