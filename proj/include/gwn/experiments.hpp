#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gwn/basis.hpp"

namespace gwn {

enum class Variety { V1, V2, V3 };

struct VarietySpec {
  Variety id;
  std::string name;
  std::size_t dimension;
  int degree_cap;  // T
  std::vector<std::pair<double, double>> parameter_domain;
};

VarietySpec variety_spec(Variety id);
std::optional<Variety> parse_variety(const std::string& name);

/// Point of the variety at parameter (u, v); v is ignored for the curves.
/// V1 maps u to the angle pi*(u+1) so that [-1,1) covers the whole rose.
Eigen::VectorXd parametrize(Variety id, double u, double v = 0.0);

/// Generators of the variety's ideal in the original coordinates.
std::vector<Polynomiald> implicit_equations(Variety id);

/// Generator for (seed, run, purpose); distinct purposes give independent streams.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t run, std::uint64_t purpose);

enum Purpose : std::uint64_t { kSamplePurpose = 1, kNoisePurpose = 2 };

PointSetd sample_variety(const VarietySpec& spec, std::size_t count, std::mt19937_64& rng);
PointSetd sample_variety(const VarietySpec& spec, std::size_t count, std::uint64_t seed);

/// p -> scale * (p - shift)
struct AffineMap {
  Eigen::VectorXd shift;
  double scale{1};

  Eigen::VectorXd apply(const Eigen::VectorXd& p) const { return scale * (p - shift); }
  Eigen::VectorXd invert(const Eigen::VectorXd& q) const { return q / scale + shift; }
};

struct Preprocessed {
  PointSetd points;
  AffineMap map;
};

/// Centers and scales to unit average Euclidean norm.
Preprocessed preprocess(const PointSetd& X);

/// Adds N(0, nu I) noise and recenters.
PointSetd perturb(const PointSetd& X, double nu, std::mt19937_64& rng);
PointSetd perturb(const PointSetd& X, double nu, std::uint64_t seed);

/// Entry t counts members of total degree t for t = 0..T; `above` receives the rest.
std::vector<int> degreewise_counts(const std::vector<BasisPolynomial>& G, int T, int* above = nullptr);

struct AlgorithmSpec {
  Algorithm algorithm{Algorithm::abm};
  Normalization normalization{Normalization::gradient_weighted};
  double tau{1e-4};
  /// Stop after this degree (0 runs to termination). Counts up to the cap are unaffected.
  int max_degree{0};
};

BasisResult run_algorithm(const AlgorithmSpec& spec, const PointSetd& X, double eps);

struct ConsistencyOutcome {
  bool consistent{false};
  std::vector<int> star, perturbed, scaled;
};

ConsistencyOutcome consistency_test(const PointSetd& Xstar, const PointSetd& X, double alpha, double eps,
                                    const AlgorithmSpec& spec, int T);

/// Mean distance of unit coefficient vectors over border terms; sqrt(2) for unmatched terms.
double coefficient_distance(const std::vector<BasisPolynomial>& reference, const std::vector<BasisPolynomial>& G);

struct ExperimentConfig {
  std::vector<Variety> varieties{Variety::V1, Variety::V2, Variety::V3};
  std::size_t samples{50};
  std::vector<double> nus{0.01};
  std::vector<double> alphas{0.01, 0.1, 1.0, 10.0, 100.0};
  // Unscaled grid [start, end); alpha*X runs at alpha*eps.
  double eps_start{1e-5};
  double eps_end{1.0};
  double eps_step{1e-3};
  std::size_t runs{20};
  std::uint64_t seed{0};
  std::vector<Normalization> normalizations{Normalization::coefficient, Normalization::gradient_weighted};
  Algorithm algorithm{Algorithm::abm};
  double tau{1e-4};  // avi only, in units of alpha
  unsigned threads{0};  // 0 = hardware concurrency

  static ExperimentConfig desk();
  static ExperimentConfig full();

  std::vector<double> eps_grid() const;
  void validate() const;
};

struct EpsOutcome {
  double eps;  // unscaled grid value
  std::vector<int> star, perturbed;
  std::optional<std::vector<int>> scaled;
  bool passed{false};
};

struct RunRecord {
  Variety variety;
  double nu;
  std::size_t run;
  double alpha;
  Normalization normalization;
  std::vector<EpsOutcome> outcomes;
  bool success{false};
  double range_lo{0}, range_hi{0};  // in scaled units
  double extent{0};
  double coeff_dist{0};
};

struct ReportRow {
  std::string dataset;
  Normalization normalization;
  double nu;
  double alpha;
  double range_lo, range_hi, coeff_dist, ev;  // NaN when no run succeeded
  double success_rate;
  std::size_t succeeded, total;
};

struct SweepResult {
  std::vector<ReportRow> rows;
  std::vector<RunRecord> records;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

SweepResult sweep(const ExperimentConfig& config, const ProgressCallback& progress = {});

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);
std::string format_report(const std::vector<ReportRow>& rows);

}  // namespace gwn
