#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gwn {

/// Power product x_1^{e_1} ... x_n^{e_n}.
class Term {
 public:
  Term() = default;
  explicit Term(std::vector<int> exponents);

  static Term one(std::size_t n);
  static Term variable(std::size_t n, std::size_t k);

  std::size_t dimension() const { return exps_.size(); }
  int exponent(std::size_t k) const { return exps_[k]; }
  const std::vector<int>& exponents() const { return exps_; }

  int total_degree() const;
  bool is_one() const;

  Term times_variable(std::size_t k) const;
  /// t / x_k, or nothing when x_k does not divide t.
  std::optional<Term> divided_by_variable(std::size_t k) const;
  bool divides(const Term& other) const;

  Term operator*(const Term& other) const;

  // Storage order only (lexicographic on exponents); use TermOrdering for sigma.
  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;

 private:
  std::vector<int> exps_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

Term lcm(const Term& a, const Term& b);

enum class OrderingKind { degrevlex, deglex };

/// Degree-compatible term ordering. `precedence[0]` is the greatest variable.
class TermOrdering {
 public:
  TermOrdering(OrderingKind kind, std::vector<std::size_t> precedence);

  static TermOrdering degrevlex(std::size_t n);
  static TermOrdering deglex(std::size_t n);

  OrderingKind kind() const { return kind_; }
  const std::vector<std::size_t>& precedence() const { return precedence_; }
  std::size_t dimension() const { return precedence_.size(); }

  std::strong_ordering compare(const Term& s, const Term& t) const;
  bool less(const Term& s, const Term& t) const { return compare(s, t) < 0; }

 private:
  OrderingKind kind_;
  std::vector<std::size_t> precedence_;
};

inline std::strong_ordering compare(const Term& s, const Term& t, const TermOrdering& ord) {
  return ord.compare(s, t);
}

using TermList = std::vector<Term>;

bool contains(std::span<const Term> terms, const Term& t);

/// (U_k x_k O) \ O, sigma-increasing.
TermList border(std::span<const Term> order_ideal, const TermOrdering& ord);

bool is_order_ideal(std::span<const Term> terms);
bool is_connected_to_1(std::span<const Term> terms);

/// Degree-d members of border(O), sigma-increasing.
TermList trial_terms(std::span<const Term> order_ideal, int degree, const TermOrdering& ord);

bool are_next_door_neighbors(const Term& a, const Term& b);
bool are_across_the_street_neighbors(const Term& a, const Term& b);
inline bool are_neighbors(const Term& a, const Term& b) {
  return are_next_door_neighbors(a, b) || are_across_the_street_neighbors(a, b);
}

/// Default variable names: x, y, z for n <= 3, else x1..xn.
std::vector<std::string> default_variable_names(std::size_t n);

std::string to_string(const Term& t, std::span<const std::string> names);

}  // namespace gwn
