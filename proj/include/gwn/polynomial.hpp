#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gwn/errors.hpp"
#include "gwn/point_set.hpp"
#include "gwn/term.hpp"

namespace gwn {

/// Relative drop tolerance applied after arithmetic.
inline constexpr double kCoefficientDropTolerance = 1e-14;

/// Sparse real polynomial in n indeterminates. No stored zero coefficients.
template <typename Scalar>
class Polynomial {
 public:
  using Coefficients = std::map<Term, Scalar>;

  Polynomial() = default;
  explicit Polynomial(std::size_t n) : n_(n) {}

  Polynomial(std::size_t n, Coefficients coeffs) : n_(n), coeffs_(std::move(coeffs)) {
    for (const auto& [t, c] : coeffs_)
      if (t.dimension() != n_) throw DimensionMismatch("Polynomial: term dimension mismatch");
    std::erase_if(coeffs_, [](const auto& kv) { return kv.second == Scalar(0); });
  }

  static Polynomial constant(std::size_t n, Scalar c) { return monomial(Term::one(n), c); }

  static Polynomial monomial(const Term& t, Scalar c = Scalar(1)) {
    return Polynomial(t.dimension(), Coefficients{{t, c}});
  }

  std::size_t dimension() const { return n_; }
  const Coefficients& coefficients() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }

  Scalar coefficient(const Term& t) const {
    auto it = coeffs_.find(t);
    return it == coeffs_.end() ? Scalar(0) : it->second;
  }

  TermList support() const {
    TermList out;
    out.reserve(coeffs_.size());
    for (const auto& kv : coeffs_) out.push_back(kv.first);
    return out;
  }

  /// Total degree. The zero polynomial has no degree.
  int degree() const {
    if (is_zero()) throw ZeroPolynomialError("degree of the zero polynomial is undefined");
    int d = 0;
    for (const auto& kv : coeffs_) d = std::max(d, kv.first.total_degree());
    return d;
  }

  /// Drops coefficients below `relative_tol * max|c|`.
  Polynomial& prune(Scalar relative_tol = Scalar(kCoefficientDropTolerance)) {
    Scalar biggest(0);
    for (const auto& kv : coeffs_) biggest = std::max(biggest, Scalar(std::abs(kv.second)));
    const Scalar cut = relative_tol * biggest;
    std::erase_if(coeffs_, [cut](const auto& kv) { return kv.second == Scalar(0) || std::abs(kv.second) < cut; });
    return *this;
  }

  Polynomial& operator+=(const Polynomial& other) {
    check_dimension(other);
    for (const auto& [t, c] : other.coeffs_) coeffs_[t] += c;
    return prune();
  }

  Polynomial& operator-=(const Polynomial& other) {
    check_dimension(other);
    for (const auto& [t, c] : other.coeffs_) coeffs_[t] -= c;
    return prune();
  }

  Polynomial& operator*=(Scalar s) {
    if (s == Scalar(0)) {
      coeffs_.clear();
      return *this;
    }
    for (auto& kv : coeffs_) kv.second *= s;
    return *this;
  }

  Polynomial times_term(const Term& t) const {
    if (t.dimension() != n_) throw DimensionMismatch("Polynomial::times_term: dimension mismatch");
    Coefficients out;
    for (const auto& [s, c] : coeffs_) out.emplace(s * t, c);
    return Polynomial(n_, std::move(out));
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Scalar s) { return a *= s; }
  friend Polynomial operator*(Scalar s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= Scalar(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_dimension(b);
    Coefficients out;
    for (const auto& [s, c] : a.coeffs_)
      for (const auto& [t, d] : b.coeffs_) out[s * t] += c * d;
    Polynomial p(a.n_, std::move(out));
    return p.prune();
  }

  /// d/dx_k, exact from exponents.
  Polynomial derivative(std::size_t k) const {
    Coefficients out;
    for (const auto& [t, c] : coeffs_) {
      if (auto lower = t.divided_by_variable(k)) out[*lower] += c * Scalar(t.exponent(k));
    }
    return Polynomial(n_, std::move(out));
  }

 private:
  void check_dimension(const Polynomial& other) const {
    if (other.n_ != n_) throw DimensionMismatch("Polynomial: dimension mismatch");
  }

  std::size_t n_{0};
  Coefficients coeffs_;
};

using Polynomiald = Polynomial<double>;

namespace detail {
template <typename Scalar>
void check_points(std::size_t n, const PointSet<Scalar>& X) {
  if (X.dimension() != n) throw DimensionMismatch("point dimension does not match the polynomial ring");
}
}  // namespace detail

/// t(p_j) for every point.
template <typename Scalar>
VectorX<Scalar> eval_term(const Term& t, const PointSet<Scalar>& X) {
  detail::check_points(t.dimension(), X);
  VectorX<Scalar> out = VectorX<Scalar>::Ones(X.size());
  for (std::size_t k = 0; k < t.dimension(); ++k) {
    const int e = t.exponent(k);
    if (e == 0) continue;
    auto col = X.coordinate(k);
    for (Eigen::Index j = 0; j < X.size(); ++j) {
      Scalar p(1);
      for (int i = 0; i < e; ++i) p *= col(j);
      out(j) *= p;
    }
  }
  return out;
}

template <typename Scalar>
VectorX<Scalar> eval(const Polynomial<Scalar>& f, const PointSet<Scalar>& X) {
  detail::check_points(f.dimension(), X);
  VectorX<Scalar> out = VectorX<Scalar>::Zero(X.size());
  for (const auto& [t, c] : f.coefficients()) out += c * eval_term(t, X);
  return out;
}

template <typename Scalar>
MatrixX<Scalar> eval_matrix(std::span<const Term> terms, const PointSet<Scalar>& X) {
  MatrixX<Scalar> M(X.size(), static_cast<Eigen::Index>(terms.size()));
  for (std::size_t i = 0; i < terms.size(); ++i) M.col(static_cast<Eigen::Index>(i)) = eval_term(terms[i], X);
  return M;
}

/// Stacked gradients (grad f(p_1); ...; grad f(p_m)), length m*n.
template <typename Scalar>
VectorX<Scalar> grad_eval(const Polynomial<Scalar>& f, const PointSet<Scalar>& X) {
  detail::check_points(f.dimension(), X);
  const auto n = static_cast<Eigen::Index>(f.dimension());
  VectorX<Scalar> out(X.size() * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    VectorX<Scalar> dk = eval(f.derivative(static_cast<std::size_t>(k)), X);
    for (Eigen::Index j = 0; j < X.size(); ++j) out(j * n + k) = dk(j);
  }
  return out;
}

/// Border prebasis indexed by border term.
template <typename Scalar>
using Prebasis = std::map<Term, Polynomial<Scalar>>;

/// (lcm/(c_i b_i)) g_i - (lcm/(c_j b_j)) g_j for neighboring border terms.
template <typename Scalar>
Polynomial<Scalar> s_polynomial(const Polynomial<Scalar>& gi, const Polynomial<Scalar>& gj, const Term& bi,
                                const Term& bj) {
  if (bi != bj && !are_neighbors(bi, bj))
    throw std::invalid_argument("s_polynomial: border terms are not neighbors");
  const Scalar ci = gi.coefficient(bi);
  const Scalar cj = gj.coefficient(bj);
  if (ci == Scalar(0) || cj == Scalar(0))
    throw std::invalid_argument("s_polynomial: zero border coefficient");
  const Term l = lcm(bi, bj);
  auto cofactor = [&](const Term& b) {
    std::vector<int> e(l.dimension());
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = l.exponent(k) - b.exponent(k);
    return Term(std::move(e));
  };
  Polynomial<Scalar> left = gi.times_term(cofactor(bi)) * (Scalar(1) / ci);
  Polynomial<Scalar> right = gj.times_term(cofactor(bj)) * (Scalar(1) / cj);
  // The lcm coefficients cancel exactly in exact arithmetic.
  Polynomial<Scalar> s = left - right;
  auto coeffs = s.coefficients();
  coeffs.erase(l);
  return Polynomial<Scalar>(s.dimension(), std::move(coeffs));
}

/// Eliminates every border term of f with the prebasis; result is supported by O.
template <typename Scalar>
Polynomial<Scalar> normal_remainder(const Polynomial<Scalar>& f, std::span<const Term> order_ideal,
                                    const Prebasis<Scalar>& G) {
  Polynomial<Scalar> r = f;
  // Prebasis members carry one border term each plus O-terms, so a single pass over
  // the border terms present in f suffices.
  for (const Term& t : f.support()) {
    if (contains(order_ideal, t)) continue;
    auto it = G.find(t);
    if (it == G.end())
      throw std::invalid_argument("normal_remainder: missing border polynomial for a term outside O");
    const Scalar c = r.coefficient(t);
    if (c == Scalar(0)) continue;
    const Polynomial<Scalar>& g = it->second;
    r -= g * (c / g.coefficient(t));
    auto coeffs = r.coefficients();
    coeffs.erase(t);
    r = Polynomial<Scalar>(r.dimension(), std::move(coeffs));
  }
  return r;
}

/// Terms in sigma-decreasing order, coefficients to `digits` significant digits.
template <typename Scalar>
std::string to_string(const Polynomial<Scalar>& f, const TermOrdering& ord, std::span<const std::string> names,
                      int digits = 4) {
  if (f.is_zero()) return "0";
  TermList terms = f.support();
  std::sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) { return ord.less(b, a); });
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double c = static_cast<double>(f.coefficient(terms[i]));
    const double mag = std::abs(c);
    if (i == 0) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::snprintf(buf, sizeof buf, "%.*g", digits, mag);
    if (terms[i].is_one()) {
      out += buf;
    } else {
      out += buf;
      out += "*";
      out += to_string(terms[i], names);
    }
  }
  return out;
}

}  // namespace gwn
