#include "gwn/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "internal.hpp"

namespace gwn {

std::string to_string(Normalization n) {
  return n == Normalization::gradient_weighted ? "gradient_weighted" : "coefficient";
}

std::string to_string(Algorithm a) { return a == Algorithm::abm ? "abm" : "avi"; }

const BasisPolynomial* BasisResult::find(const Term& border_term) const {
  for (const auto& g : G)
    if (g.border_term == border_term) return &g;
  return nullptr;
}

GevpProblem<double> build_problem(std::span<const Term> columns, const SeminormCache<double>& cache,
                                  Normalization norm) {
  GevpProblem<double> p;
  p.M = eval_matrix(columns, cache.points());
  p.weights.resize(static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    if (norm == Normalization::coefficient) {
      p.weights(c) = 1.0;
    } else {
      p.weights(c) = cache(columns[i]);
      if (columns[i].is_one()) p.constant_index = c;
    }
  }
  return p;
}

double basis_norm(const Polynomiald& f, const SeminormCache<double>& cache, Normalization norm) {
  return norm == Normalization::coefficient ? coeff_norm(f) : gw_seminorm_poly(f, cache);
}

namespace detail {

Polynomiald polynomial_from(std::span<const Term> columns, const Eigen::VectorXd& v, std::size_t n) {
  Polynomiald::Coefficients c;
  for (std::size_t i = 0; i < columns.size(); ++i) c.emplace(columns[i], v(static_cast<Eigen::Index>(i)));
  Polynomiald p(n, std::move(c));
  return p.prune();
}

}  // namespace detail

namespace {

void check_inputs(const PointSetd& X, double eps, const TermOrdering& ordering) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be a finite number >= 0");
  if (ordering.dimension() != X.dimension())
    throw DimensionMismatch("term ordering dimension does not match the points");
  if (!X.matrix().allFinite()) throw std::invalid_argument("points contain non-finite coordinates");
}

}  // namespace

BasisResult abm(const PointSetd& X, double eps, const TermOrdering& ordering, Normalization norm,
                const AbmOptions& options) {
  check_inputs(X, eps, ordering);
  const std::size_t n = X.dimension();
  const SeminormCache<double> cache(X);

  BasisResult result(n, ordering);
  result.eps = eps;
  result.normalization = norm;
  result.algorithm = Algorithm::abm;
  result.O.push_back(Term::one(n));

  for (int d = 1; options.max_degree <= 0 || d <= options.max_degree; ++d) {
    const TermList trials = trial_terms(result.O, d, ordering);
    if (trials.empty()) break;
    for (const Term& b : trials) {
      TermList columns = result.O;
      columns.push_back(b);
      const auto problem = build_problem(columns, cache, norm);
      const auto sol = solve_min(problem);

      DiagnosticStep step;
      step.degree = d;
      step.trial = b;
      step.lambda = sol.lambda_min;
      step.sqrt_lambda = std::sqrt(sol.lambda_min);
      step.exact = sol.exact;
      step.tie_multiplicity = sol.tie_multiplicity;
      step.spectrum = sol.finite_spectrum;

      if (sol.exact || step.sqrt_lambda <= eps) {
        if (sol.trial_coefficient_vanishes)
          throw GevpDegenerate("abm: accepted eigenvector has a vanishing coefficient at trial term " +
                               to_string(b, default_variable_names(n)) + " (degree " + std::to_string(d) + ")");
        BasisPolynomial g;
        g.poly = detail::polynomial_from(columns, sol.v_min, n);
        g.border_term = b;
        g.extent = (problem.M * sol.v_min).norm();
        g.exact = sol.exact;
        g.normalized = true;
        result.G.push_back(std::move(g));
        step.decision = Decision::appended_to_basis;
      } else {
        result.O.push_back(b);
        step.decision = Decision::appended_to_order_ideal;
      }
      result.diagnostics.push_back(std::move(step));

      if (options.check_invariants) {
        std::vector<std::string> violations;
        detail::collect_invariant_violations(cache, result, violations);
        if (!violations.empty()) throw std::logic_error("abm invariant violated: " + violations.front());
      }
    }
  }
  return result;
}

}  // namespace gwn
