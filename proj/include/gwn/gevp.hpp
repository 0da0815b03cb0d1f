#pragma once

// Minimal finite generalized eigenpair of (M^T M, D^2) with D diagonal and
// positive semi-definite. A zero weight is only admitted for the constant
// column: the matching row of M^T M v = lambda D^2 v forces 1^T M v = 0, so the
// constant coefficient is eliminated analytically and the remaining definite
// problem is the SVD of the centered, whitened matrix C M_- D_-^{-1}. Infinite
// eigenvalues never appear explicitly.

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gwn/errors.hpp"
#include "gwn/point_set.hpp"

namespace gwn {

template <typename Scalar>
struct GevpProblem {
  MatrixX<Scalar> M;                            // m x (s+1): O-columns then the trial column
  VectorX<Scalar> weights;                      // diagonal of D
  std::optional<Eigen::Index> constant_index;  // column of the term 1, if any

  Eigen::Index trial_index() const { return M.cols() - 1; }
};

template <typename Scalar>
struct GevpSolution {
  Scalar lambda_min{0};
  VectorX<Scalar> v_min;   // v^T D^2 v = 1, trial coefficient >= 0
  bool exact{false};       // lambda_min below the exact-zero threshold
  std::vector<Scalar> finite_spectrum;  // ascending
  Scalar exact_threshold{0};
  int tie_multiplicity{1};
  bool trial_coefficient_vanishes{false};
};

template <typename Scalar>
struct GevpEigenpair {
  Scalar lambda;
  VectorX<Scalar> v;
};

/// lambda counts as zero when sqrt(lambda) <= kExactZeroRelative * sqrt(1 + ||W||_F^2).
inline constexpr double kExactZeroRelative = 1e-10;

template <typename Scalar>
Scalar exact_zero_bound(Scalar frobenius_sq) {
  return Scalar(kExactZeroRelative) * Scalar(kExactZeroRelative) * (Scalar(1) + frobenius_sq);
}
inline constexpr double kTrialCoefficientFloor = 1e-10;

namespace detail {

template <typename Scalar>
struct Whitened {
  MatrixX<Scalar> W;         // (C) M_- D_-^{-1}
  MatrixX<Scalar> M_reduced;  // M_- (uncentered)
  VectorX<Scalar> weights_reduced;
  std::vector<Eigen::Index> columns;  // reduced index -> problem column
  std::optional<Eigen::Index> eliminated;
  Scalar threshold{0};
};

template <typename Scalar>
Whitened<Scalar> whiten(const GevpProblem<Scalar>& p) {
  const Eigen::Index cols = p.M.cols();
  if (p.M.rows() < 1 || cols < 1) throw std::invalid_argument("gevp: empty evaluation matrix");
  if (p.weights.size() != cols) throw DimensionMismatch("gevp: weight count does not match columns");
  if (p.constant_index && (*p.constant_index < 0 || *p.constant_index >= cols))
    throw std::out_of_range("gevp: constant index out of range");
  if (!p.M.allFinite() || !p.weights.allFinite()) throw std::invalid_argument("gevp: non-finite input");
  if (p.M.isZero(0)) throw GevpDegenerate("gevp: evaluation matrix is identically zero (degenerate point set)");

  Whitened<Scalar> w;
  for (Eigen::Index c = 0; c < cols; ++c) {
    const Scalar d = p.weights(c);
    if (d < Scalar(0)) throw std::invalid_argument("gevp: negative weight");
    if (d == Scalar(0)) {
      if (!p.constant_index || *p.constant_index != c)
        throw std::invalid_argument("gevp: zero weight outside the constant column");
      w.eliminated = c;
      continue;
    }
    w.columns.push_back(c);
  }
  if (w.columns.empty()) throw GevpDegenerate("gevp: no finite generalized eigenvalue (constant column only)");

  const auto k = static_cast<Eigen::Index>(w.columns.size());
  w.M_reduced.resize(p.M.rows(), k);
  w.weights_reduced.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    w.M_reduced.col(i) = p.M.col(w.columns[i]);
    w.weights_reduced(i) = p.weights(w.columns[i]);
  }
  w.W = w.M_reduced * w.weights_reduced.cwiseInverse().asDiagonal();
  w.threshold = exact_zero_bound(w.W.squaredNorm());
  if (w.eliminated) w.W.rowwise() -= w.W.colwise().mean();
  return w;
}

/// Maps a whitened reduced vector back to problem coordinates.
template <typename Scalar>
VectorX<Scalar> restore(const Whitened<Scalar>& w, const VectorX<Scalar>& reduced, Eigen::Index cols) {
  VectorX<Scalar> v_hat = reduced.cwiseQuotient(w.weights_reduced);
  VectorX<Scalar> v = VectorX<Scalar>::Zero(cols);
  for (std::size_t i = 0; i < w.columns.size(); ++i) v(w.columns[i]) = v_hat(static_cast<Eigen::Index>(i));
  if (w.eliminated) v(*w.eliminated) = -(w.M_reduced * v_hat).mean();
  return v;
}

/// Squared singular values ascending (padded with zeros when k > m) and the
/// matching right singular vectors as columns.
template <typename Scalar>
std::pair<std::vector<Scalar>, MatrixX<Scalar>> ascending_spectrum(const MatrixX<Scalar>& W) {
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(W, Eigen::ComputeFullV);
  const Eigen::Index k = W.cols();
  const auto& sv = svd.singularValues();
  std::vector<Scalar> lambdas(static_cast<std::size_t>(k));
  MatrixX<Scalar> V(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index src = k - 1 - i;
    lambdas[static_cast<std::size_t>(i)] = src < sv.size() ? sv(src) * sv(src) : Scalar(0);
    V.col(i) = svd.matrixV().col(src);
  }
  return {std::move(lambdas), std::move(V)};
}

}  // namespace detail

/// All finite generalized eigenpairs, ascending; eigenvectors satisfy v^T D^2 v = 1.
template <typename Scalar>
std::vector<GevpEigenpair<Scalar>> solve_all(const GevpProblem<Scalar>& problem) {
  const auto w = detail::whiten(problem);
  auto [lambdas, V] = detail::ascending_spectrum(w.W);
  std::vector<GevpEigenpair<Scalar>> out;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    out.push_back({lambdas[i], detail::restore(w, VectorX<Scalar>(V.col(static_cast<Eigen::Index>(i))),
                                               problem.M.cols())});
  return out;
}

/// Smallest finite generalized eigenvalue, or nothing when the only column has zero weight.
template <typename Scalar>
std::optional<Scalar> min_finite_eigenvalue(const GevpProblem<Scalar>& problem) {
  try {
    const auto w = detail::whiten(problem);
    return detail::ascending_spectrum(w.W).first.front();
  } catch (const GevpDegenerate&) {
    return std::nullopt;
  }
}

template <typename Scalar>
Scalar exact_zero_threshold(const GevpProblem<Scalar>& problem) {
  return detail::whiten(problem).threshold;
}

template <typename Scalar>
GevpSolution<Scalar> solve_min(const GevpProblem<Scalar>& problem) {
  const auto w = detail::whiten(problem);
  const Eigen::Index trial = problem.trial_index();
  const auto trial_pos = std::find(w.columns.begin(), w.columns.end(), trial);
  if (trial_pos == w.columns.end()) throw std::invalid_argument("gevp: trial column has zero weight");
  const auto trial_reduced = static_cast<Eigen::Index>(trial_pos - w.columns.begin());

  auto [lambdas, V] = detail::ascending_spectrum(w.W);

  GevpSolution<Scalar> sol;
  sol.exact_threshold = w.threshold;
  sol.lambda_min = std::max(Scalar(0), lambdas.front());
  sol.exact = sol.lambda_min <= w.threshold;

  std::vector<Eigen::Index> tied;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    if (lambdas[i] - lambdas.front() <= w.threshold) tied.push_back(static_cast<Eigen::Index>(i));
  sol.tie_multiplicity = static_cast<int>(tied.size());

  VectorX<Scalar> reduced = V.col(0);
  if (tied.size() > 1) {
    // Unit vector of the tied subspace with the largest trial component.
    VectorX<Scalar> combo = VectorX<Scalar>::Zero(V.rows());
    for (Eigen::Index i : tied) combo += V(trial_reduced, i) * V.col(i);
    if (combo.norm() > Scalar(1e-12)) reduced = combo.normalized();
  }
  sol.trial_coefficient_vanishes = std::abs(reduced(trial_reduced)) < Scalar(kTrialCoefficientFloor);

  sol.v_min = detail::restore(w, reduced, problem.M.cols());
  if (sol.v_min(trial) < Scalar(0)) sol.v_min = -sol.v_min;
  sol.finite_spectrum = std::move(lambdas);
  return sol;
}

template <typename Scalar>
struct NormalizedVector {
  VectorX<Scalar> v;
  bool zero_seminorm{false};  // exact vanishing, scaled to unit coefficient norm instead
};

/// Scales v to v^T D^2 v = 1 with v[trial] > 0.
template <typename Scalar>
NormalizedVector<Scalar> normalize_eigenvector(const VectorX<Scalar>& v, const VectorX<Scalar>& d,
                                               Eigen::Index trial_index) {
  if (v.size() != d.size()) throw DimensionMismatch("normalize_eigenvector: size mismatch");
  NormalizedVector<Scalar> out;
  const Scalar q = v.cwiseProduct(d).squaredNorm();
  const Scalar scale = v.squaredNorm() * std::max(Scalar(1), d.cwiseAbs2().maxCoeff());
  if (q > Scalar(1e-24) * scale) {
    out.v = v / std::sqrt(q);
  } else {
    out.v = v.normalized();
    out.zero_seminorm = true;
  }
  if (out.v(trial_index) < Scalar(0)) out.v = -out.v;
  return out;
}

enum class UncenteredReading {
  corrected,   // v_hat = D^{-1} v_s, v0 = mean(M_- v_hat)
  as_written,  // v_hat = D v_s, v0 = mean(sigma_min * v_hat)
};

/// SVD route without centering. Returns a solution over (1, O_-, b), constant first.
template <typename Scalar>
GevpSolution<Scalar> solve_uncentered_svd(const MatrixX<Scalar>& M_minus, const VectorX<Scalar>& d_minus,
                                         UncenteredReading reading = UncenteredReading::corrected) {
  if (M_minus.cols() != d_minus.size()) throw DimensionMismatch("solve_uncentered_svd: weight count mismatch");
  if (M_minus.cols() < 1 || M_minus.rows() < 1) throw std::invalid_argument("solve_uncentered_svd: empty matrix");
  if ((d_minus.array() <= Scalar(0)).any()) throw std::invalid_argument("solve_uncentered_svd: non-positive weight");

  const Eigen::Index m = M_minus.rows();
  const Eigen::Index s = M_minus.cols();
  const MatrixX<Scalar> W = M_minus * d_minus.cwiseInverse().asDiagonal();
  auto [lambdas, V] = detail::ascending_spectrum(W);
  const Scalar sigma_min = std::sqrt(std::max(Scalar(0), lambdas.front()));
  const VectorX<Scalar> v_s = V.col(0);

  VectorX<Scalar> v_hat;
  Scalar v0;
  if (reading == UncenteredReading::as_written) {
    v_hat = d_minus.cwiseProduct(v_s);
    v0 = (sigma_min * v_hat).mean();
  } else {
    v_hat = v_s.cwiseQuotient(d_minus);
    v0 = (M_minus * v_hat).mean();
  }

  GevpSolution<Scalar> sol;
  const Scalar ones_M_v = (M_minus * v_hat).sum();
  const Scalar lambda = v0 * v0 * Scalar(m) - Scalar(2) * v0 * ones_M_v + sigma_min * sigma_min;
  sol.lambda_min = std::max(Scalar(0), lambda);
  sol.exact_threshold = exact_zero_bound(W.squaredNorm());
  sol.exact = sol.lambda_min <= sol.exact_threshold;
  sol.v_min.resize(s + 1);
  sol.v_min(0) = -v0;
  sol.v_min.tail(s) = v_hat;
  if (sol.v_min(s) < Scalar(0)) sol.v_min = -sol.v_min;
  sol.finite_spectrum = std::move(lambdas);
  return sol;
}

}  // namespace gwn
