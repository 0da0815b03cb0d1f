#pragma once

#include "gwn/basis.hpp"

namespace gwn::detail {

Polynomiald polynomial_from(std::span<const Term> columns, const Eigen::VectorXd& v, std::size_t n);

/// Largest extent of vanishing the checks accept for a member with border term b.
double allowed_extent(const SeminormCache<double>& cache, const TermList& O, const Term& b, double eps,
                      Normalization norm);

/// Appends violated loop invariants of a partial abm run to `out`.
void collect_invariant_violations(const SeminormCache<double>& cache, const BasisResult& partial,
                                  std::vector<std::string>& out);

}  // namespace gwn::detail
