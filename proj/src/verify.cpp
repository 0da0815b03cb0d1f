#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "gwn/basis.hpp"
#include "internal.hpp"

namespace gwn {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kEpsSlack = 1e-9;

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

std::string name(const Term& t) { return to_string(t, default_variable_names(t.dimension())); }

bool order_ideal_clear(const SeminormCache<double>& cache, const TermList& O, double eps, Normalization norm,
                       std::optional<double>& lambda) {
  const auto problem = build_problem(O, cache, norm);
  lambda = min_finite_eigenvalue(problem);
  if (!lambda) return true;
  return *lambda > eps * eps * (1.0 - kEpsSlack) && *lambda > exact_zero_threshold(problem);
}

void check_members(const SeminormCache<double>& cache, const BasisResult& r, bool check_extent,
                   std::vector<std::string>& out, bool* norm_ok, bool* vanish_ok) {
  const auto& X = cache.points();
  for (const auto& g : r.G) {
    if (g.poly.dimension() != r.n) {
      out.push_back("member for " + name(g.border_term) + " has the wrong number of variables");
      *norm_ok = false;
      continue;
    }
    if (g.normalized) {
      const double s = basis_norm(g.poly, cache, r.normalization);
      if (std::abs(s - 1.0) > kNormTolerance) {
        out.push_back("member for " + name(g.border_term) + fmt(": semi-norm %.12g differs from %g", s, 1.0));
        *norm_ok = false;
      }
    }
    if (!check_extent) continue;
    const double extent = eval(g.poly, X).norm();
    const double allowed = detail::allowed_extent(cache, r.O, g.border_term, r.eps, r.normalization);
    if (!(extent <= allowed)) {
      out.push_back("member for " + name(g.border_term) + fmt(": extent %.6g exceeds %.6g", extent, allowed));
      *vanish_ok = false;
    }
  }
}

}  // namespace

namespace detail {

double allowed_extent(const SeminormCache<double>& cache, const TermList& O, const Term& b, double eps,
                      Normalization norm) {
  TermList columns = O;
  if (!contains(columns, b)) columns.push_back(b);
  const double threshold = exact_zero_threshold(build_problem(columns, cache, norm));
  return std::max(eps * (1.0 + kEpsSlack), std::sqrt(threshold));
}

void collect_invariant_violations(const SeminormCache<double>& cache, const BasisResult& partial,
                                  std::vector<std::string>& out) {
  if (!is_connected_to_1(partial.O)) out.push_back("O is not connected to 1");
  std::optional<double> lambda;
  if (!order_ideal_clear(cache, partial.O, partial.eps, partial.normalization, lambda))
    out.push_back("an O-supported polynomial is eps-vanishing");
  std::set<Term> seen;
  for (const auto& g : partial.G) {
    if (!seen.insert(g.border_term).second) out.push_back("duplicate border term " + name(g.border_term));
    if (!(g.poly.coefficient(g.border_term) > 0.0)) out.push_back("non-positive border coefficient");
    if (partial.normalization == Normalization::gradient_weighted && !(cache(g.border_term) > 0.0))
      out.push_back("border term with zero semi-norm");
  }
  bool norm_ok = true, vanish_ok = true;
  check_members(cache, partial, true, out, &norm_ok, &vanish_ok);
}

}  // namespace detail

VerificationReport verify_basis(const PointSetd& X, double eps, const BasisResult& result) {
  VerificationReport rep;
  if (X.dimension() != result.n) {
    rep.violations.push_back("point dimension does not match the basis");
    return rep;
  }
  const SeminormCache<double> cache(X);
  BasisResult r = result;
  r.eps = eps;

  rep.connected_to_1 = is_connected_to_1(r.O);
  if (!rep.connected_to_1) rep.violations.push_back("O is not connected to 1");
  rep.order_ideal = is_order_ideal(r.O);

  rep.normalization_ok = true;
  rep.vanishing_ok = true;
  check_members(cache, r, r.algorithm == Algorithm::abm, rep.violations, &rep.normalization_ok, &rep.vanishing_ok);

  if (r.algorithm == Algorithm::abm && rep.connected_to_1) {
    std::optional<double> lambda;
    rep.order_ideal_non_vanishing = order_ideal_clear(cache, r.O, eps, r.normalization, lambda);
    rep.order_ideal_min_eigenvalue = lambda;
    if (!rep.order_ideal_non_vanishing)
      rep.violations.push_back(fmt("O-only minimal eigenvalue %.6g is not above eps^2 = %.6g", lambda.value_or(0.0),
                                   eps * eps));
  } else {
    rep.order_ideal_non_vanishing = rep.connected_to_1;
  }

  rep.border_correspondence = true;
  std::set<Term> expected;
  if (rep.connected_to_1)
    for (const Term& b : border(r.O, r.ordering)) expected.insert(b);
  std::set<Term> got;
  for (const auto& g : r.G) {
    if (!got.insert(g.border_term).second) {
      rep.violations.push_back("duplicate border term " + name(g.border_term));
      rep.border_correspondence = false;
    }
    if (!(g.poly.coefficient(g.border_term) > 0.0)) {
      rep.violations.push_back("border coefficient of " + name(g.border_term) + " is not positive");
      rep.border_correspondence = false;
    }
    for (const Term& t : g.poly.support())
      if (t != g.border_term && !contains(r.O, t)) {
        rep.violations.push_back("member for " + name(g.border_term) + " uses " + name(t) + " outside O");
        rep.border_correspondence = false;
      }
  }
  if (got != expected) {
    rep.violations.push_back("border terms of G do not match the border of O");
    rep.border_correspondence = false;
  }
  return rep;
}

double prebasis_delta(const BasisResult& result) {
  if (!is_order_ideal(result.O)) throw std::invalid_argument("prebasis_delta: O is not an order ideal");
  Prebasis<double> G;
  for (const auto& g : result.G) G.emplace(g.border_term, g.poly);
  const TermList bd = border(result.O, result.ordering);
  for (const Term& b : bd)
    if (!G.count(b)) throw std::invalid_argument("prebasis_delta: no polynomial for border term " + name(b));

  double delta = 0.0;
  for (std::size_t i = 0; i < bd.size(); ++i)
    for (std::size_t j = i + 1; j < bd.size(); ++j) {
      if (!are_neighbors(bd[i], bd[j])) continue;
      const auto s = s_polynomial(G.at(bd[i]), G.at(bd[j]), bd[i], bd[j]);
      delta = std::max(delta, coeff_norm(normal_remainder(s, result.O, G)));
    }
  return delta;
}

}  // namespace gwn
