#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "gwn/basis.hpp"

namespace gwn::testing {

/// |a - b| <= rel * max(|a|, |b|) + abs
inline bool near(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs;
}

inline PointSetd three_points() { return PointSetd(std::vector<std::vector<double>>{{2, 2}, {-4, 1}, {2, 0}}); }

inline Term T(std::vector<int> e) { return Term(std::move(e)); }

inline Polynomiald P(std::size_t n, std::initializer_list<std::pair<std::vector<int>, double>> terms) {
  Polynomiald::Coefficients c;
  for (const auto& [e, v] : terms) c[Term(e)] += v;
  return Polynomiald(n, std::move(c));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// m distinct points with coordinates in [lo, hi].
inline PointSetd random_points(std::mt19937_64& rng, int m, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Eigen::MatrixXd P(m, static_cast<Eigen::Index>(n));
  for (int j = 0; j < m; ++j)
    for (std::size_t k = 0; k < n; ++k) P(j, static_cast<Eigen::Index>(k)) = uniform(rng, lo, hi);
  return PointSetd(std::move(P));
}

inline Term random_term(std::mt19937_64& rng, std::size_t n, int max_degree) {
  std::vector<int> e(n, 0);
  const int d = uniform_int(rng, 0, max_degree);
  for (int i = 0; i < d; ++i) ++e[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(n) - 1))];
  return Term(std::move(e));
}

inline Polynomiald random_polynomial(std::mt19937_64& rng, std::size_t n, int max_degree, int terms) {
  Polynomiald::Coefficients c;
  for (int i = 0; i < terms; ++i) c[random_term(rng, n, max_degree)] += uniform(rng, -2.0, 2.0);
  return Polynomiald(n, std::move(c));
}

/// Minimizes ||M v||^2 over v^T D^2 v = 1 by sampling the sphere and hill climbing.
/// Directions with zero weight are free; their best value is a 1-D least-squares fit.
inline double brute_force_min(const Eigen::MatrixXd& M, const Eigen::VectorXd& d, std::mt19937_64& rng,
                              int samples = 20000) {
  std::vector<Eigen::Index> free_cols, weighted;
  for (Eigen::Index c = 0; c < d.size(); ++c) (d(c) == 0.0 ? free_cols : weighted).push_back(c);
  const auto k = static_cast<Eigen::Index>(weighted.size());

  auto objective = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(M.rows());
    for (Eigen::Index i = 0; i < k; ++i) r += (u(i) / d(weighted[static_cast<std::size_t>(i)])) * M.col(weighted[static_cast<std::size_t>(i)]);
    for (Eigen::Index c : free_cols) {
      const double nn = M.col(c).squaredNorm();
      if (nn > 0) r -= (M.col(c).dot(r) / nn) * M.col(c);
    }
    return r.squaredNorm();
  };

  std::normal_distribution<double> gauss;
  auto random_unit = [&] {
    Eigen::VectorXd u(k);
    for (Eigen::Index i = 0; i < k; ++i) u(i) = gauss(rng);
    return Eigen::VectorXd(u.normalized());
  };

  Eigen::VectorXd best = random_unit();
  double best_val = objective(best);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd u = random_unit();
    const double v = objective(u);
    if (v < best_val) best_val = v, best = u;
  }
  double step = 0.1;
  int failures = 0;
  while (step > 1e-9) {
    Eigen::VectorXd u = best;
    for (Eigen::Index i = 0; i < k; ++i) u(i) += step * gauss(rng);
    u.normalize();
    const double v = objective(u);
    if (v < best_val) {
      best_val = v, best = u, failures = 0;
    } else if (++failures > 40) {
      step *= 0.5, failures = 0;
    }
  }
  return best_val;
}

}  // namespace gwn::testing
