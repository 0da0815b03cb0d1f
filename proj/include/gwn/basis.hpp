#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gwn/gevp.hpp"
#include "gwn/norms.hpp"
#include "gwn/polynomial.hpp"

namespace gwn {

enum class Normalization { gradient_weighted, coefficient };
enum class Algorithm { abm, avi };

std::string to_string(Normalization n);
std::string to_string(Algorithm a);

struct BasisPolynomial {
  Polynomiald poly;
  Term border_term;
  double extent{0};  // ||poly(X)||_2
  bool exact{false};
  bool normalized{true};
};

enum class Decision { appended_to_basis, appended_to_order_ideal };

struct DiagnosticStep {
  int degree{0};
  Term trial;
  double lambda{0};
  double sqrt_lambda{0};
  Decision decision{Decision::appended_to_order_ideal};
  bool exact{false};
  int tie_multiplicity{1};
  std::vector<double> spectrum;  // finite generalized eigenvalues, ascending
};

struct BasisResult {
  BasisResult(std::size_t n, TermOrdering ordering) : n(n), ordering(std::move(ordering)) {}

  std::size_t n;
  TermList O;
  std::vector<BasisPolynomial> G;
  double eps{0};
  double tau{0};
  Normalization normalization{Normalization::gradient_weighted};
  Algorithm algorithm{Algorithm::abm};
  TermOrdering ordering;
  std::vector<DiagnosticStep> diagnostics;
  std::vector<std::string> warnings;

  const BasisPolynomial* find(const Term& border_term) const;
};

struct AbmOptions {
  /// Re-checks the loop invariants after every step; throws std::logic_error on failure.
  bool check_invariants{false};
  /// Stop after this degree; 0 runs to termination. A capped result is not a complete basis.
  int max_degree{0};
};

BasisResult abm(const PointSetd& X, double eps, const TermOrdering& ordering, Normalization norm,
                const AbmOptions& options = {});

struct AviOptions {
  /// Stop after this degree; 0 runs to termination.
  int max_degree{0};
};

BasisResult avi_gwn(const PointSetd& X, double eps, double tau, const TermOrdering& ordering,
                    const AviOptions& options = {});

/// Columns (O..., trial) with weights for the chosen normalization.
GevpProblem<double> build_problem(std::span<const Term> columns, const SeminormCache<double>& cache,
                                  Normalization norm);

/// Semi-norm matching the normalization: gradient-weighted or coefficient norm.
double basis_norm(const Polynomiald& f, const SeminormCache<double>& cache, Normalization norm);

struct VerificationReport {
  bool connected_to_1{false};
  bool order_ideal{false};
  bool normalization_ok{false};
  bool vanishing_ok{false};
  bool order_ideal_non_vanishing{false};
  bool border_correspondence{false};
  std::optional<double> order_ideal_min_eigenvalue;
  std::vector<std::string> violations;

  /// All checks except the order-ideal flag, which is informational.
  bool passed() const {
    return connected_to_1 && normalization_ok && vanishing_ok && order_ideal_non_vanishing && border_correspondence;
  }
};

VerificationReport verify_basis(const PointSetd& X, double eps, const BasisResult& result);

/// Largest coefficient norm of the reduced neighbor S-polynomials; 0 without neighbor pairs.
double prebasis_delta(const BasisResult& result);

}  // namespace gwn
