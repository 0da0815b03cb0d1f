#include <doctest.h>

#include <set>

#include "gwn/basis.hpp"
#include "support.hpp"

using namespace gwn;
using namespace gwn::testing;

namespace {

const auto ord2 = TermOrdering::degrevlex(2);
const Term one2 = Term::one(2);
const Term x = T({1, 0}), y = T({0, 1}), xy = T({1, 1}), x2 = T({2, 0}), y2 = T({0, 2});

TermList border_terms(const BasisResult& r) {
  TermList out;
  for (const auto& g : r.G) out.push_back(g.border_term);
  return out;
}

/// 1 - |<a, b>| / (|a| |b|) over the union of supports.
double misalignment(const Polynomiald& a, const Polynomiald& b) {
  std::set<Term> support;
  for (const auto& kv : a.coefficients()) support.insert(kv.first);
  for (const auto& kv : b.coefficients()) support.insert(kv.first);
  Eigen::VectorXd va(static_cast<Eigen::Index>(support.size())), vb(va.size());
  Eigen::Index i = 0;
  for (const Term& t : support) {
    va(i) = a.coefficient(t);
    vb(i) = b.coefficient(t);
    ++i;
  }
  return 1.0 - std::abs(va.dot(vb)) / (va.norm() * vb.norm());
}

std::vector<int> degree_counts(const BasisResult& r) {
  std::vector<int> c(16, 0);
  for (const auto& g : r.G) ++c[static_cast<std::size_t>(g.border_term.total_degree())];
  return c;
}

}  // namespace

TEST_CASE("middle tolerance on the three-point set") {
  const BasisResult r = abm(three_points(), 1.0, ord2, Normalization::gradient_weighted, {true});
  CHECK(r.O == TermList{one2, x});
  REQUIRE(border_terms(r) == TermList{y, xy, x2});

  const double s = 1.0 / std::sqrt(3.0);
  const Polynomiald& gy = r.G[0].poly;
  CHECK(gy.coefficient(y) == doctest::Approx(s));
  CHECK(gy.coefficient(one2) == doctest::Approx(-s));
  CHECK(r.G[0].extent == doctest::Approx(std::sqrt(2.0 / 3.0)));

  const Polynomiald& gxy = r.G[1].poly;
  CHECK(gxy.coefficient(xy) == doctest::Approx(0.2366).epsilon(5e-4));
  CHECK(gxy.coefficient(x) == doctest::Approx(-0.2507).epsilon(5e-4));
  CHECK(std::abs(gxy.coefficient(one2)) < 1e-12);
  CHECK(r.G[1].extent == doctest::Approx(std::sqrt(0.4525)).epsilon(1e-3));

  // x^2 + 2x - 8 vanishes on X; its semi-norm is sqrt(24 + 4*3) = 6.
  const Polynomiald& gx2 = r.G[2].poly;
  CHECK(gx2.coefficient(x2) == doctest::Approx(1.0 / 6.0));
  CHECK(gx2.coefficient(x) == doctest::Approx(2.0 / 6.0));
  CHECK(gx2.coefficient(one2) == doctest::Approx(-8.0 / 6.0));
  CHECK(r.G[2].exact);

  const std::vector<double> lambdas{2.0 / 3.0, 8.0, 0.4525, 0.0};
  REQUIRE(r.diagnostics.size() == 4);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.diagnostics[i].lambda == doctest::Approx(lambdas[i]).epsilon(1e-4));
  CHECK(r.diagnostics[3].lambda < 1e-12);
  CHECK(r.diagnostics[2].spectrum.back() == doctest::Approx(9.7544).epsilon(1e-4));
  CHECK(r.diagnostics[3].spectrum.back() == doctest::Approx(12.0));
  CHECK(r.diagnostics[1].decision == Decision::appended_to_order_ideal);

  const auto rep = verify_basis(three_points(), 1.0, r);
  CHECK(rep.passed());
  CHECK(rep.order_ideal);
}

TEST_CASE("zero tolerance gives the exact border basis") {
  const PointSetd X = three_points();
  const BasisResult r = abm(X, 0.0, ord2, Normalization::gradient_weighted, {true});
  CHECK(r.O == TermList{one2, y, x});
  REQUIRE(border_terms(r) == TermList{y2, xy, x2});
  const Polynomiald expected[] = {P(2, {{{0, 2}, 6}, {{1, 0}, -1}, {{0, 1}, -12}, {{0, 0}, 2}}),
                                  P(2, {{{1, 1}, 1}, {{0, 1}, -2}, {{1, 0}, -1}, {{0, 0}, 2}}),
                                  P(2, {{{2, 0}, 1}, {{1, 0}, 2}, {{0, 0}, -8}})};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(misalignment(r.G[i].poly, expected[i]) < 1e-12);
    CHECK(r.G[i].extent <= 1e-8);
    CHECK(r.G[i].exact);
    CHECK(eval(expected[i], X).norm() == 0.0);
  }
  CHECK(verify_basis(X, 0.0, r).passed());
  CHECK(prebasis_delta(r) <= 1e-8);
}

TEST_CASE("large tolerance keeps only the constant") {
  const BasisResult r = abm(three_points(), 3.0, ord2, Normalization::gradient_weighted, {true});
  CHECK(r.O == TermList{one2});
  REQUIRE(border_terms(r) == TermList{y, x});
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(r.G[0].poly.coefficient(y) == doctest::Approx(s));
  CHECK(r.G[0].poly.coefficient(one2) == doctest::Approx(-s));
  CHECK(r.G[1].poly.coefficient(x) == doctest::Approx(s));
  CHECK(r.G[1].poly.size() == 1);
  CHECK(verify_basis(three_points(), 3.0, r).passed());
}

TEST_CASE("coefficient normalization loses the order ideal") {
  const PointSetd X = three_points();
  const BasisResult r = abm(X, 1.0, ord2, Normalization::coefficient, {true});
  CHECK(r.O == TermList{one2, x, xy});
  CHECK_FALSE(is_order_ideal(r.O));
  CHECK(border_terms(r) == TermList{y, x2, T({1, 2}), T({2, 1})});
  CHECK(r.G[0].poly.coefficient(y) == doctest::Approx(0.5847).epsilon(5e-4));
  CHECK(r.G[0].poly.coefficient(one2) == doctest::Approx(-0.8112).epsilon(5e-4));
  CHECK(r.diagnostics[0].lambda == doctest::Approx(4.0 - std::sqrt(10.0)));
  REQUIRE(r.diagnostics[1].spectrum.size() == 2);
  CHECK(r.diagnostics[1].spectrum[0] == doctest::Approx(3.0));
  CHECK(r.diagnostics[1].spectrum[1] == doctest::Approx(24.0));
  const auto& s = r.diagnostics[2].spectrum;
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(3.0));
  CHECK(s[1] == doctest::Approx(3.6689).epsilon(1e-4));
  CHECK(s[2] == doctest::Approx(52.3311).epsilon(1e-4));
  // x^2 + 2x - 8 over its coefficient norm sqrt(69)
  CHECK(r.G[1].poly.coefficient(x2) == doctest::Approx(0.1204).epsilon(1e-3));

  const auto rep = verify_basis(X, 1.0, r);
  CHECK(rep.passed());
  CHECK_FALSE(rep.order_ideal);
  CHECK_THROWS_AS(prebasis_delta(r), std::invalid_argument);
}

TEST_CASE("verification catches a rescaled member") {
  const PointSetd X = three_points();
  BasisResult r = abm(X, 1.0, ord2, Normalization::gradient_weighted);
  r.G[1].poly *= 2.0;
  const auto rep = verify_basis(X, 1.0, r);
  CHECK_FALSE(rep.normalization_ok);
  CHECK_FALSE(rep.passed());
  CHECK_FALSE(rep.violations.empty());

  BasisResult missing = abm(X, 1.0, ord2, Normalization::gradient_weighted);
  missing.G.pop_back();
  CHECK_FALSE(verify_basis(X, 1.0, missing).border_correspondence);

  const BasisResult good = abm(X, 1.0, ord2, Normalization::gradient_weighted);
  CHECK_FALSE(verify_basis(X.scaled(2.0), 1.0, good).passed());
}

TEST_CASE("output is constant between the breakpoints") {
  const PointSetd X = three_points();
  const double b1 = std::sqrt(2.0 / 3.0), b2 = std::sqrt(8.0);
  const std::vector<std::pair<double, double>> bands{{0.0, b1}, {b1, b2}, {b2, 10.0}};
  for (const auto& [lo, hi] : bands) {
    const BasisResult ref = abm(X, 0.5 * (lo + hi), ord2, Normalization::gradient_weighted);
    for (double t : {0.01, 0.3, 0.6, 0.99}) {
      const double eps = lo + t * (hi - lo);
      INFO("eps = ", eps);
      const BasisResult r = abm(X, eps, ord2, Normalization::gradient_weighted);
      CHECK(r.O == ref.O);
      REQUIRE(border_terms(r) == border_terms(ref));
      for (std::size_t i = 0; i < r.G.size(); ++i) CHECK(misalignment(r.G[i].poly, ref.G[i].poly) < 1e-12);
    }
  }
}

TEST_CASE("prebasis delta") {
  const BasisResult mid = abm(three_points(), 1.0, ord2, Normalization::gradient_weighted);
  CHECK(prebasis_delta(mid) == doctest::Approx(0.48).epsilon(1e-3));

  const PointSetd line(std::vector<std::vector<double>>{{1.0}, {2.0}});
  const BasisResult single = abm(line, 5.0, TermOrdering::degrevlex(1), Normalization::gradient_weighted);
  REQUIRE(single.G.size() == 1);
  CHECK(prebasis_delta(single) == 0.0);
}

TEST_CASE("termination and invariants on random point sets") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 150; ++i) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 3));
    const int m = uniform_int(rng, 1, 10);
    const PointSetd X = random_points(rng, m, n);
    const double eps = i % 4 == 0 ? 0.0 : uniform(rng, 0.0, 1.5);
    const auto ord = TermOrdering::degrevlex(n);
    const BasisResult r = abm(X, eps, ord, Normalization::gradient_weighted, {true});
    CHECK(static_cast<int>(r.O.size()) <= m);
    CHECK(is_connected_to_1(r.O));
    CHECK(verify_basis(X, eps, r).passed());
    for (const auto& g : r.G) {
      CHECK(g.poly.coefficient(g.border_term) > 0.0);
      if (g.normalized) CHECK(g.extent <= eps + 1e-9);
    }
  }
}

TEST_CASE("scale invariance of the gradient-weighted output") {
  std::mt19937_64 rng(43);
  int compared = 0;
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 2, 3));
    const PointSetd X = random_points(rng, uniform_int(rng, 3, 9), n);
    const double eps = uniform(rng, 0.05, 1.0);
    const auto ord = TermOrdering::degrevlex(n);
    const BasisResult base = abm(X, eps, ord, Normalization::gradient_weighted);
    bool borderline = false;
    for (const auto& s : base.diagnostics)
      if (std::abs(s.sqrt_lambda - eps) < 1e-6 * eps) borderline = true;
    if (borderline) continue;
    for (double alpha : {0.01, 0.1, 10.0, 100.0}) {
      const BasisResult r = abm(X.scaled(alpha), alpha * eps, ord, Normalization::gradient_weighted);
      CHECK(r.O == base.O);
      REQUIRE(border_terms(r) == border_terms(base));
      for (std::size_t k = 0; k < r.G.size(); ++k) {
        const Polynomiald& c = base.G[k].poly;
        double biggest = 0.0;
        for (const auto& kv : c.coefficients()) biggest = std::max(biggest, std::abs(kv.second));
        std::set<Term> support;
        for (const auto& kv : c.coefficients()) support.insert(kv.first);
        for (const auto& kv : r.G[k].poly.coefficients()) support.insert(kv.first);
        for (const Term& t : support) {
          const double lifted = std::pow(alpha, t.total_degree() - 1) * r.G[k].poly.coefficient(t);
          CHECK(near(lifted, c.coefficient(t), 1e-6, 1e-9 * biggest));
        }
      }
      ++compared;
    }
  }
  CHECK(compared > 150);
}

TEST_CASE("coefficient normalization changes O under a constructed scaling") {
  std::mt19937_64 rng(45);
  int checked = 0;
  for (int i = 0; i < 200 && checked < 40; ++i) {
    const PointSetd X = random_points(rng, uniform_int(rng, 5, 10), 2, -3, 3);
    const double eps = uniform(rng, 0.05, 0.5);
    const BasisResult r = abm(X, eps, ord2, Normalization::coefficient);
    for (const Term& t : r.O) {
      if (t.total_degree() < 2) continue;
      const double gamma = eval_term(t, X).norm() / eps;
      const double alpha = 0.5 * std::pow(1.0 / gamma, 1.0 / (t.total_degree() - 1));
      const BasisResult scaled = abm(X.scaled(alpha), alpha * eps, ord2, Normalization::coefficient);
      CHECK(scaled.O != r.O);
      CHECK_FALSE(contains(scaled.O, t));
      ++checked;
      break;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("strictly vanishing members stay small under perturbation") {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 50; ++i) {
    const PointSetd X = random_points(rng, uniform_int(rng, 6, 10), 2);
    const double eps = uniform(rng, 0.1, 0.6);
    const BasisResult r = abm(X, eps, ord2, Normalization::gradient_weighted);
    for (double size : {1e-4, 1e-3}) {
      Eigen::MatrixXd D(X.size(), 2);
      for (Eigen::Index j = 0; j < D.rows(); ++j) {
        Eigen::Vector2d d(uniform(rng, -1, 1), uniform(rng, -1, 1));
        D.row(j) = size * uniform(rng, 0, 1) * d.normalized().transpose();
      }
      const PointSetd Y(Eigen::MatrixXd(X.matrix() + D));
      for (const auto& g : r.G) {
        if (!(g.extent < eps)) continue;
        double factor = 0.0;
        for (const auto& kv : g.poly.coefficients()) factor += euclidean_degree(kv.first) * euclidean_degree(kv.first);
        CHECK(eval(g.poly, Y).norm() <= eps + 2.0 * std::sqrt(factor) * size);
      }
    }
  }
}

TEST_CASE("duplicate points and invalid input") {
  const PointSetd dup(std::vector<std::vector<double>>{{1, 2}, {1, 2}, {0, 1}});
  const BasisResult r = abm(dup, 0.0, ord2, Normalization::gradient_weighted);
  CHECK(r.O.size() <= 2);
  CHECK(verify_basis(dup, 0.0, r).passed());
  CHECK_THROWS_AS(abm(dup, -1.0, ord2, Normalization::gradient_weighted), std::invalid_argument);
  CHECK_THROWS_AS(abm(dup, 1.0, TermOrdering::degrevlex(3), Normalization::gradient_weighted), DimensionMismatch);
}

TEST_CASE("degree cap stops early with identical low-degree decisions") {
  std::mt19937_64 rng(49);
  const PointSetd X = random_points(rng, 20, 2);
  const BasisResult full = abm(X, 0.05, ord2, Normalization::gradient_weighted);
  AbmOptions capped;
  capped.max_degree = 2;
  const BasisResult part = abm(X, 0.05, ord2, Normalization::gradient_weighted, capped);
  std::vector<int> a = degree_counts(full), b = degree_counts(part);
  for (int d = 0; d <= 2; ++d) CHECK(a[static_cast<std::size_t>(d)] == b[static_cast<std::size_t>(d)]);
  for (const auto& g : part.G) CHECK(g.border_term.total_degree() <= 2);
}
