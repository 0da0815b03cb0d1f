#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gwn/basis.hpp"
#include "internal.hpp"

namespace gwn {

namespace {

constexpr int kDegreeGuard = 256;

struct Echelon {
  Eigen::MatrixXd R;
  std::vector<Eigen::Index> pivot_columns;  // pivot column of row i
};

/// Reduced row echelon form; a column whose best remaining entry is below tau gets no pivot.
Echelon thresholded_rref(Eigen::MatrixXd A, double tau) {
  Echelon e;
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < A.cols() && rank < A.rows(); ++c) {
    Eigen::Index best = rank;
    A.col(c).segment(rank, A.rows() - rank).cwiseAbs().maxCoeff(&best);
    best += rank;
    if (std::abs(A(best, c)) < tau) {
      A.col(c).segment(rank, A.rows() - rank).setZero();
      continue;
    }
    A.row(rank).swap(A.row(best));
    A.row(rank) /= A(rank, c);
    for (Eigen::Index r = 0; r < A.rows(); ++r)
      if (r != rank) A.row(r) -= A(r, c) * A.row(rank);
    e.pivot_columns.push_back(c);
    ++rank;
  }
  e.R = A.topRows(rank);
  return e;
}

}  // namespace

BasisResult avi_gwn(const PointSetd& X, double eps, double tau, const TermOrdering& ordering,
                    const AviOptions& options) {
  if (!(tau > 0.0) || !(eps > tau) || !std::isfinite(eps))
    throw std::invalid_argument("avi_gwn requires eps > tau > 0");
  if (ordering.dimension() != X.dimension())
    throw DimensionMismatch("term ordering dimension does not match the points");
  const std::size_t n = X.dimension();
  const SeminormCache<double> cache(X);

  BasisResult result(n, ordering);
  result.eps = eps;
  result.tau = tau;
  result.normalization = Normalization::gradient_weighted;
  result.algorithm = Algorithm::avi;
  if (X.max_abs() > 1.0) result.warnings.push_back("points lie outside [-1,1]^n; avi expects scaled data");
  result.O.push_back(Term::one(n));

  for (int d = 1; options.max_degree <= 0 || d <= options.max_degree; ++d) {
    TermList trials = trial_terms(result.O, d, ordering);
    if (trials.empty()) break;
    if (d > kDegreeGuard) throw std::runtime_error("avi_gwn: no termination within the degree guard");
    std::reverse(trials.begin(), trials.end());  // sigma-decreasing

    TermList columns = trials;
    columns.insert(columns.end(), result.O.begin(), result.O.end());
    const auto problem = build_problem(columns, cache, Normalization::gradient_weighted);
    const double threshold = exact_zero_threshold(problem);
    const auto pairs = solve_all(problem);

    std::vector<const GevpEigenpair<double>*> batch;
    for (const auto& p : pairs)
      if (p.lambda <= eps * eps || p.lambda <= threshold) batch.push_back(&p);

    const auto nd = static_cast<Eigen::Index>(trials.size());
    std::vector<bool> pivot(trials.size(), false);
    if (!batch.empty()) {
      Eigen::MatrixXd Bt(static_cast<Eigen::Index>(batch.size()), problem.M.cols());
      bool all_exact = true;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        Bt.row(static_cast<Eigen::Index>(i)) = batch[i]->v.transpose();
        all_exact = all_exact && batch[i]->lambda <= threshold;
      }
      const Echelon e = thresholded_rref(Bt, tau);
      for (std::size_t i = 0; i < e.pivot_columns.size(); ++i) {
        const Eigen::Index c = e.pivot_columns[i];
        if (c >= nd) continue;
        pivot[static_cast<std::size_t>(c)] = true;
        Polynomiald g = detail::polynomial_from(columns, e.R.row(static_cast<Eigen::Index>(i)).transpose(), n);
        const double s = gw_seminorm_poly(g, cache);
        BasisPolynomial bp;
        bp.border_term = trials[static_cast<std::size_t>(c)];
        if (s > seminorm_zero_threshold(X, d)) {
          bp.poly = g * (1.0 / s);
        } else {
          bp.poly = g * (1.0 / coeff_norm(g));
          bp.normalized = false;
        }
        bp.extent = eval(bp.poly, X).norm();
        bp.exact = all_exact;
        result.G.push_back(std::move(bp));
      }
    }

    const double smallest = pairs.empty() ? 0.0 : std::max(0.0, pairs.front().lambda);
    for (std::size_t j = 0; j < trials.size(); ++j) {
      DiagnosticStep step;
      step.degree = d;
      step.trial = trials[j];
      step.lambda = smallest;
      step.sqrt_lambda = std::sqrt(smallest);
      step.exact = smallest <= threshold;
      step.decision = pivot[j] ? Decision::appended_to_basis : Decision::appended_to_order_ideal;
      if (j == 0)
        for (const auto& p : pairs) step.spectrum.push_back(p.lambda);
      result.diagnostics.push_back(std::move(step));
    }
    for (std::size_t j = trials.size(); j-- > 0;)
      if (!pivot[j]) result.O.insert(result.O.begin(), trials[j]);
  }
  return result;
}

}  // namespace gwn
