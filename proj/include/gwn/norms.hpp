#pragma once

#include <cmath>
#include <mutex>
#include <unordered_map>

#include "gwn/polynomial.hpp"

namespace gwn {

/// D(t) = sqrt(sum_k deg_k(t)^2); zero for t = 1.
inline double euclidean_degree(const Term& t) {
  double s = 0.0;
  for (int e : t.exponents()) s += double(e) * double(e);
  return std::sqrt(s);
}

/// ||grad t(X)||_2 / D(t), and 0 for t = 1.
template <typename Scalar>
Scalar gw_seminorm_term(const Term& t, const PointSet<Scalar>& X) {
  detail::check_points(t.dimension(), X);
  if (t.is_one()) return Scalar(0);
  Scalar sq(0);
  for (std::size_t k = 0; k < t.dimension(); ++k) {
    auto lower = t.divided_by_variable(k);
    if (!lower) continue;
    sq += Scalar(t.exponent(k) * t.exponent(k)) * eval_term(*lower, X).squaredNorm();
  }
  return std::sqrt(sq) / Scalar(euclidean_degree(t));
}

template <typename Scalar>
Scalar coeff_norm(const Polynomial<Scalar>& f) {
  Scalar sq(0);
  for (const auto& kv : f.coefficients()) sq += kv.second * kv.second;
  return std::sqrt(sq);
}

/// Below this a semi-norm of a degree-`degree` object counts as zero.
template <typename Scalar>
Scalar seminorm_zero_threshold(const PointSet<Scalar>& X, int degree) {
  const Scalar base = std::max(Scalar(1), X.max_abs());
  return Scalar(1e-12) * std::sqrt(Scalar(X.size())) * std::pow(base, Scalar(std::max(degree - 1, 0)));
}

/// Memoized term semi-norms for one immutable point set. Safe for concurrent use.
template <typename Scalar>
class SeminormCache {
 public:
  explicit SeminormCache(PointSet<Scalar> X) : X_(std::move(X)) {}

  SeminormCache(const SeminormCache& other) : X_(other.X_) {
    std::lock_guard lock(other.mutex_);
    memo_ = other.memo_;
  }

  const PointSet<Scalar>& points() const { return X_; }

  Scalar operator()(const Term& t) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    }
    const Scalar value = gw_seminorm_term(t, X_);
    std::lock_guard lock(mutex_);
    memo_.emplace(t, value);
    return value;
  }

  std::size_t cached() const {
    std::lock_guard lock(mutex_);
    return memo_.size();
  }

 private:
  PointSet<Scalar> X_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Term, Scalar, TermHash> memo_;
};

/// sqrt(sum_t c_t^2 ||t||^2)
template <typename Scalar>
Scalar gw_seminorm_poly(const Polynomial<Scalar>& f, const SeminormCache<Scalar>& cache) {
  detail::check_points(f.dimension(), cache.points());
  Scalar sq(0);
  for (const auto& [t, c] : f.coefficients()) {
    const Scalar w = cache(t);
    sq += c * c * w * w;
  }
  return std::sqrt(sq);
}

template <typename Scalar>
Scalar gw_seminorm_poly(const Polynomial<Scalar>& f, const PointSet<Scalar>& X) {
  return gw_seminorm_poly(f, SeminormCache<Scalar>(X));
}

/// f / ||f||; throws NotNormalizable when the semi-norm is zero.
template <typename Scalar>
Polynomial<Scalar> gw_normalize(const Polynomial<Scalar>& f, const SeminormCache<Scalar>& cache) {
  const Scalar s = gw_seminorm_poly(f, cache);
  const int deg = f.is_zero() ? 0 : f.degree();
  if (!(s > seminorm_zero_threshold(cache.points(), deg)))
    throw NotNormalizable("gradient-weighted semi-norm is zero: the constant-free part vanishes on X");
  return f * (Scalar(1) / s);
}

template <typename Scalar>
Polynomial<Scalar> gw_normalize(const Polynomial<Scalar>& f, const PointSet<Scalar>& X) {
  return gw_normalize(f, SeminormCache<Scalar>(X));
}

}  // namespace gwn
