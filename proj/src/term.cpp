#include "gwn/term.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace gwn {

Term::Term(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int e : exps_)
    if (e < 0) throw std::invalid_argument("Term: negative exponent");
}

Term Term::one(std::size_t n) { return Term(std::vector<int>(n, 0)); }

Term Term::variable(std::size_t n, std::size_t k) {
  if (k >= n) throw std::out_of_range("Term::variable: index out of range");
  std::vector<int> e(n, 0);
  e[k] = 1;
  return Term(std::move(e));
}

int Term::total_degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0); }

bool Term::is_one() const {
  return std::all_of(exps_.begin(), exps_.end(), [](int e) { return e == 0; });
}

Term Term::times_variable(std::size_t k) const {
  Term r = *this;
  ++r.exps_.at(k);
  return r;
}

std::optional<Term> Term::divided_by_variable(std::size_t k) const {
  if (exps_.at(k) == 0) return std::nullopt;
  Term r = *this;
  --r.exps_[k];
  return r;
}

bool Term::divides(const Term& other) const {
  if (other.dimension() != dimension()) return false;
  for (std::size_t k = 0; k < exps_.size(); ++k)
    if (exps_[k] > other.exps_[k]) return false;
  return true;
}

Term Term::operator*(const Term& other) const {
  if (other.dimension() != dimension()) throw std::invalid_argument("Term product: dimension mismatch");
  Term r = *this;
  for (std::size_t k = 0; k < exps_.size(); ++k) r.exps_[k] += other.exps_[k];
  return r;
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (int e : t.exponents()) h = (h ^ static_cast<std::size_t>(e)) * 0x100000001b3ULL;
  return h;
}

Term lcm(const Term& a, const Term& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("lcm: dimension mismatch");
  std::vector<int> e(a.dimension());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::max(a.exponent(k), b.exponent(k));
  return Term(std::move(e));
}

TermOrdering::TermOrdering(OrderingKind kind, std::vector<std::size_t> precedence)
    : kind_(kind), precedence_(std::move(precedence)) {
  std::vector<std::size_t> sorted = precedence_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) throw std::invalid_argument("TermOrdering: precedence is not a permutation");
}

TermOrdering TermOrdering::degrevlex(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return TermOrdering(OrderingKind::degrevlex, std::move(p));
}

TermOrdering TermOrdering::deglex(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return TermOrdering(OrderingKind::deglex, std::move(p));
}

std::strong_ordering TermOrdering::compare(const Term& s, const Term& t) const {
  if (s.dimension() != dimension() || t.dimension() != dimension())
    throw std::invalid_argument("TermOrdering::compare: dimension mismatch");
  if (auto c = s.total_degree() <=> t.total_degree(); c != 0) return c;
  if (kind_ == OrderingKind::deglex) {
    for (std::size_t v : precedence_)
      if (auto c = s.exponent(v) <=> t.exponent(v); c != 0) return c;
  } else {
    // Smallest variable first; the smaller exponent wins.
    for (auto it = precedence_.rbegin(); it != precedence_.rend(); ++it)
      if (auto c = t.exponent(*it) <=> s.exponent(*it); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

bool contains(std::span<const Term> terms, const Term& t) {
  return std::find(terms.begin(), terms.end(), t) != terms.end();
}

TermList border(std::span<const Term> order_ideal, const TermOrdering& ord) {
  std::unordered_set<Term, TermHash> inside(order_ideal.begin(), order_ideal.end());
  std::unordered_set<Term, TermHash> seen;
  TermList out;
  for (const Term& t : order_ideal) {
    for (std::size_t k = 0; k < t.dimension(); ++k) {
      Term b = t.times_variable(k);
      if (!inside.contains(b) && seen.insert(b).second) out.push_back(std::move(b));
    }
  }
  std::sort(out.begin(), out.end(), [&](const Term& a, const Term& b) { return ord.less(a, b); });
  return out;
}

bool is_order_ideal(std::span<const Term> terms) {
  if (terms.empty()) return false;
  std::unordered_set<Term, TermHash> inside(terms.begin(), terms.end());
  for (const Term& t : terms)
    for (std::size_t k = 0; k < t.dimension(); ++k)
      if (auto p = t.divided_by_variable(k); p && !inside.contains(*p)) return false;
  return true;
}

bool is_connected_to_1(std::span<const Term> terms) {
  if (terms.empty()) return false;
  std::unordered_set<Term, TermHash> inside(terms.begin(), terms.end());
  if (!inside.contains(Term::one(terms.front().dimension()))) return false;
  for (const Term& t : terms) {
    if (t.is_one()) continue;
    bool has_predecessor = false;
    for (std::size_t k = 0; k < t.dimension() && !has_predecessor; ++k)
      if (auto p = t.divided_by_variable(k); p && inside.contains(*p)) has_predecessor = true;
    if (!has_predecessor) return false;
  }
  return true;
}

TermList trial_terms(std::span<const Term> order_ideal, int degree, const TermOrdering& ord) {
  if (degree < 1) throw std::invalid_argument("trial_terms: degree must be >= 1");
  TermList all = border(order_ideal, ord);
  TermList out;
  std::copy_if(all.begin(), all.end(), std::back_inserter(out),
               [degree](const Term& t) { return t.total_degree() == degree; });
  return out;
}

bool are_next_door_neighbors(const Term& a, const Term& b) {
  if (a.dimension() != b.dimension()) return false;
  int diff = b.total_degree() - a.total_degree();
  if (diff == 1) return a.divides(b);
  if (diff == -1) return b.divides(a);
  return false;
}

bool are_across_the_street_neighbors(const Term& a, const Term& b) {
  if (a.dimension() != b.dimension() || a == b) return false;
  // x_k a = x_l b with k != l  <=>  a - b = e_l - e_k.
  int plus = 0, minus = 0;
  for (std::size_t k = 0; k < a.dimension(); ++k) {
    int d = a.exponent(k) - b.exponent(k);
    if (d == 1) ++plus;
    else if (d == -1) ++minus;
    else if (d != 0) return false;
  }
  return plus == 1 && minus == 1;
}

std::vector<std::string> default_variable_names(std::size_t n) {
  if (n <= 3) {
    static const char* short_names[] = {"x", "y", "z"};
    return std::vector<std::string>(short_names, short_names + n);
  }
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= n; ++k) names.push_back("x" + std::to_string(k));
  return names;
}

std::string to_string(const Term& t, std::span<const std::string> names) {
  if (t.is_one()) return "1";
  std::string out;
  for (std::size_t k = 0; k < t.dimension(); ++k) {
    int e = t.exponent(k);
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += k < names.size() ? names[k] : "x" + std::to_string(k + 1);
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out;
}

}  // namespace gwn
