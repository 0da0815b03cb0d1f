#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "gwn/errors.hpp"

namespace gwn {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Ordered list of m points in R^n, stored one point per row.
template <typename Scalar>
class PointSet {
 public:
  using Matrix = MatrixX<Scalar>;

  explicit PointSet(Matrix points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1)
      throw std::invalid_argument("PointSet: need at least one point of positive dimension");
  }

  explicit PointSet(const std::vector<std::vector<Scalar>>& rows) : PointSet(from_rows(rows)) {}

  Eigen::Index size() const { return points_.rows(); }
  std::size_t dimension() const { return static_cast<std::size_t>(points_.cols()); }
  const Matrix& matrix() const { return points_; }
  auto point(Eigen::Index j) const { return points_.row(j); }
  auto coordinate(std::size_t k) const { return points_.col(static_cast<Eigen::Index>(k)); }

  PointSet scaled(Scalar alpha) const { return PointSet(Matrix(alpha * points_)); }

  /// max_j ||p_j||_inf
  Scalar max_abs() const { return points_.cwiseAbs().maxCoeff(); }

  bool has_duplicates() const {
    for (Eigen::Index i = 0; i < size(); ++i)
      for (Eigen::Index j = i + 1; j < size(); ++j)
        if (points_.row(i) == points_.row(j)) return true;
    return false;
  }

 private:
  static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows) {
    if (rows.empty()) throw std::invalid_argument("PointSet: need at least one point");
    const std::size_t n = rows.front().size();
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[j].size() != n) throw DimensionMismatch("PointSet: points have different dimensions");
      for (std::size_t k = 0; k < n; ++k)
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = rows[j][k];
    }
    return m;
  }

  Matrix points_;
};

using PointSetd = PointSet<double>;

}  // namespace gwn
