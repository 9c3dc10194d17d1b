#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sdpguard::ref {
namespace {

struct NodeRow {
  Position3 other;
  double lo;  // squared distance must be >= lo (may be -inf)
  double hi;  // and <= hi
};

std::vector<std::vector<NodeRow>> rows_by_node(const FeasibilityProblem& p) {
  std::vector<std::vector<NodeRow>> rows(p.node_order.size());
  const double d2 = p.comm_range * p.comm_range;
  for (const auto& c : p.pairs) {
    std::size_t li = 0, lj = 0;
    for (std::size_t k = 0; k < p.node_order.size(); ++k) {
      if (p.node_order[k] == c.i) li = k;
      if (p.node_order[k] == c.j) lj = k;
    }
    const double r2 = c.r_hat * c.r_hat;
    rows[li].push_back({p.reported[lj], r2 - p.tolerance_sq + p.delta,
                        std::min(d2 - p.delta, r2 + p.tolerance_sq - p.delta)});
  }
  return rows;
}

double node_violation(const std::vector<NodeRow>& rows, const Position3& anchor, double eps, const Position3& x) {
  double v = (x - anchor).squaredNorm() - eps;
  for (const auto& r : rows) {
    const double s = (x - r.other).squaredNorm();
    v = std::max({v, s - r.hi, r.lo - s});
  }
  return v;
}

// projected gradient descent on the sum of squared hinge violations,
// restricted to the ε-ball around the anchor
Position3 polish(const std::vector<NodeRow>& rows, const Position3& anchor, double eps, Position3 x) {
  const double radius = std::sqrt(eps);
  auto energy = [&](const Position3& y) {
    double e = 0.0;
    for (const auto& r : rows) {
      const double s = (y - r.other).squaredNorm();
      e += std::pow(std::max(0.0, s - r.hi), 2) + std::pow(std::max(0.0, r.lo - s), 2);
    }
    return e;
  };
  auto project = [&](Position3 y) {
    const Position3 off = y - anchor;
    const double n = off.norm();
    return n > radius ? Position3(anchor + off * (radius / n)) : y;
  };
  double step = 1.0;
  for (int it = 0; it < 300; ++it) {
    Position3 g = Position3::Zero();
    for (const auto& r : rows) {
      const double s = (x - r.other).squaredNorm();
      if (s > r.hi) g += 4.0 * (s - r.hi) * (x - r.other);
      if (s < r.lo) g -= 4.0 * (r.lo - s) * (x - r.other);
    }
    if (g.squaredNorm() == 0.0) break;
    const double e0 = energy(x);
    bool moved = false;
    for (int b = 0; b < 60; ++b) {
      const Position3 y = project(x - step * g);
      if (energy(y) < e0) {
        x = y;
        step *= 1.5;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return x;
}

}  // namespace

double position_violation(const FeasibilityProblem& problem, const std::vector<Position3>& x) {
  const auto rows = rows_by_node(problem);
  double v = -1e300;
  for (std::size_t k = 0; k < rows.size(); ++k)
    v = std::max(v, node_violation(rows[k], problem.reported[k], problem.epsilon, x[k]));
  return v;
}

BruteForceResult brute_force(const FeasibilityProblem& problem) {
  const auto rows = rows_by_node(problem);
  const double radius = std::sqrt(problem.epsilon);
  const double h = problem.comm_range / 100.0;
  const int steps = static_cast<int>(std::floor(radius / h));

  BruteForceResult out;
  out.satisfiable = true;
  out.worst_violation = -1e300;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Position3& anchor = problem.reported[k];
    std::vector<std::pair<double, Position3>> grid;
    for (int a = -steps; a <= steps; ++a)
      for (int b = -steps; b <= steps; ++b)
        for (int c = -steps; c <= steps; ++c) {
          const Position3 x = anchor + h * Position3(a, b, c);
          if ((x - anchor).squaredNorm() > problem.epsilon) continue;
          grid.emplace_back(node_violation(rows[k], anchor, problem.epsilon, x), x);
        }
    // a few extra seeds on the ball surface along the axes
    for (int ax = 0; ax < 3; ++ax)
      for (double sgn : {-1.0, 1.0}) {
        Position3 x = anchor;
        x[ax] += sgn * radius * (1.0 - 1e-12);
        grid.emplace_back(node_violation(rows[k], anchor, problem.epsilon, x), x);
      }
    std::sort(grid.begin(), grid.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

    double best = grid.front().first;
    Position3 best_x = grid.front().second;
    for (std::size_t s = 0; s < std::min<std::size_t>(grid.size(), 8) && best > 0.0; ++s) {
      const Position3 x = polish(rows[k], anchor, problem.epsilon, grid[s].second);
      const double v = node_violation(rows[k], anchor, problem.epsilon, x);
      if (v < best) {
        best = v;
        best_x = x;
      }
    }
    out.witness.push_back(best_x);
    out.worst_violation = std::max(out.worst_violation, best);
    if (best > 0.0) out.satisfiable = false;
  }
  if (!out.satisfiable) out.witness.clear();
  return out;
}

double expected_neighbors(int n, double d, double h, int samples, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-h, h);
  long hits = 0;
  for (int s = 0; s < samples; ++s) {
    const Position3 a(u(gen), u(gen), u(gen)), b(u(gen), u(gen), u(gen));
    if ((a - b).norm() <= d) ++hits;
  }
  return (n - 1) * static_cast<double>(hits) / samples;
}

double hypergeometric_recall(int set_size, int hits_in_set, int m, int truth_size) {
  if (truth_size == 0) return 1.0;
  if (set_size == 0) return 0.0;
  const int draws = std::min(m, set_size);
  return static_cast<double>(draws) * hits_in_set / set_size / truth_size;
}

}  // namespace sdpguard::ref
