#include "gwn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

namespace gwn {

VarietySpec variety_spec(Variety id) {
  switch (id) {
    case Variety::V1:
      return {id, "V1", 2, 6, {{-1.0, 1.0}}};
    case Variety::V2:
      return {id, "V2", 3, 3, {{-2.5, 2.5}}};
    case Variety::V3:
      return {id, "V3", 3, 3, {{-1.0, 1.0}, {-1.0, 1.0}}};
  }
  throw std::invalid_argument("unknown variety");
}

std::optional<Variety> parse_variety(const std::string& name) {
  if (name == "V1" || name == "v1" || name == "1") return Variety::V1;
  if (name == "V2" || name == "v2" || name == "2") return Variety::V2;
  if (name == "V3" || name == "v3" || name == "3") return Variety::V3;
  return std::nullopt;
}

Eigen::VectorXd parametrize(Variety id, double u, double v) {
  switch (id) {
    case Variety::V1: {
      const double a = std::numbers::pi * (u + 1.0);
      return Eigen::Vector2d(std::cos(2 * a) * std::cos(a), std::cos(2 * a) * std::sin(a));
    }
    case Variety::V2: {
      const double x = 3.0 * (3.0 - u * u);
      const double y = u * (3.0 - u * u);
      return Eigen::Vector3d(x, y, x + y);
    }
    case Variety::V3:
      return Eigen::Vector3d(v * (u * u - v * v), u, u * u - v * v);
  }
  throw std::invalid_argument("unknown variety");
}

namespace {

Polynomiald term(std::vector<int> e, double c) { return Polynomiald::monomial(Term(std::move(e)), c); }

}  // namespace

std::vector<Polynomiald> implicit_equations(Variety id) {
  switch (id) {
    case Variety::V1: {
      // (x^2 + y^2)^3 - (x^2 - y^2)^2
      const Polynomiald r = term({2, 0}, 1) + term({0, 2}, 1);
      const Polynomiald d = term({2, 0}, 1) - term({0, 2}, 1);
      return {r * r * r - d * d};
    }
    case Variety::V2:
      return {term({1, 0, 0}, 1) + term({0, 1, 0}, 1) - term({0, 0, 1}, 1),
              term({3, 0, 0}, 1) - term({2, 0, 0}, 9) + term({0, 2, 0}, 27)};
    case Variety::V3:
      return {term({2, 0, 0}, 1) - term({0, 2, 2}, 1) + term({0, 0, 3}, 1)};
  }
  throw std::invalid_argument("unknown variety");
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t run, std::uint64_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

PointSetd sample_variety(const VarietySpec& spec, std::size_t count, std::mt19937_64& rng) {
  if (count < 1) throw std::invalid_argument("sample_variety: count must be >= 1");
  Eigen::MatrixXd P(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(spec.dimension));
  for (std::size_t j = 0; j < count; ++j) {
    double params[2] = {0.0, 0.0};
    for (std::size_t k = 0; k < spec.parameter_domain.size(); ++k) {
      std::uniform_real_distribution<double> dist(spec.parameter_domain[k].first, spec.parameter_domain[k].second);
      params[k] = dist(rng);
    }
    P.row(static_cast<Eigen::Index>(j)) = parametrize(spec.id, params[0], params[1]).transpose();
  }
  return PointSetd(std::move(P));
}

PointSetd sample_variety(const VarietySpec& spec, std::size_t count, std::uint64_t seed) {
  auto rng = make_rng(seed, 0, kSamplePurpose);
  return sample_variety(spec, count, rng);
}

Preprocessed preprocess(const PointSetd& X) {
  if (X.size() < 2) throw std::invalid_argument("preprocess: need at least two points (zero spread)");
  const Eigen::VectorXd mean = X.matrix().colwise().mean().transpose();
  Eigen::MatrixXd centered = X.matrix().rowwise() - mean.transpose();
  const double avg = centered.rowwise().norm().mean();
  if (!(avg > 0.0) || !std::isfinite(avg)) throw std::domain_error("preprocess: all points coincide (zero spread)");
  AffineMap map{mean, 1.0 / avg};
  centered *= map.scale;
  return {PointSetd(std::move(centered)), std::move(map)};
}

PointSetd perturb(const PointSetd& X, double nu, std::mt19937_64& rng) {
  if (!(nu >= 0.0)) throw std::invalid_argument("perturb: nu must be >= 0");
  Eigen::MatrixXd P = X.matrix();
  if (nu > 0.0) {
    std::normal_distribution<double> noise(0.0, std::sqrt(nu));
    for (Eigen::Index j = 0; j < P.rows(); ++j)
      for (Eigen::Index k = 0; k < P.cols(); ++k) P(j, k) += noise(rng);
  }
  P.rowwise() -= P.colwise().mean();
  return PointSetd(std::move(P));
}

PointSetd perturb(const PointSetd& X, double nu, std::uint64_t seed) {
  auto rng = make_rng(seed, 0, kNoisePurpose);
  return perturb(X, nu, rng);
}

std::vector<int> degreewise_counts(const std::vector<BasisPolynomial>& G, int T, int* above) {
  std::vector<int> counts(static_cast<std::size_t>(std::max(T, 0) + 1), 0);
  int extra = 0;
  for (const auto& g : G) {
    const int d = g.poly.is_zero() ? g.border_term.total_degree() : g.poly.degree();
    if (d <= T)
      ++counts[static_cast<std::size_t>(d)];
    else
      ++extra;
  }
  if (above) *above = extra;
  return counts;
}

BasisResult run_algorithm(const AlgorithmSpec& spec, const PointSetd& X, double eps) {
  const auto ordering = TermOrdering::degrevlex(X.dimension());
  if (spec.algorithm == Algorithm::avi) return avi_gwn(X, eps, spec.tau, ordering, AviOptions{spec.max_degree});
  AbmOptions options;
  options.max_degree = spec.max_degree;
  return abm(X, eps, ordering, spec.normalization, options);
}

ConsistencyOutcome consistency_test(const PointSetd& Xstar, const PointSetd& X, double alpha, double eps,
                                    const AlgorithmSpec& spec, int T) {
  if (!(alpha > 0.0)) throw std::invalid_argument("consistency_test: alpha must be positive");
  ConsistencyOutcome out;
  out.star = degreewise_counts(run_algorithm(spec, Xstar, eps).G, T);
  out.perturbed = degreewise_counts(run_algorithm(spec, X, eps).G, T);
  out.scaled = degreewise_counts(run_algorithm(spec, X.scaled(alpha), alpha * eps).G, T);
  out.consistent = out.star == out.perturbed && out.perturbed == out.scaled;
  return out;
}

double coefficient_distance(const std::vector<BasisPolynomial>& reference, const std::vector<BasisPolynomial>& G) {
  if (reference.empty() && G.empty()) throw std::invalid_argument("coefficient_distance: both bases are empty");
  std::map<Term, const Polynomiald*> a, b;
  for (const auto& g : reference) a.emplace(g.border_term, &g.poly);
  for (const auto& g : G) b.emplace(g.border_term, &g.poly);
  std::set<Term> keys;
  for (const auto& kv : a) keys.insert(kv.first);
  for (const auto& kv : b) keys.insert(kv.first);

  double total = 0.0;
  for (const Term& k : keys) {
    auto ia = a.find(k);
    auto ib = b.find(k);
    if (ia == a.end() || ib == b.end()) {
      total += std::numbers::sqrt2;
      continue;
    }
    std::set<Term> support;
    for (const auto& kv : ia->second->coefficients()) support.insert(kv.first);
    for (const auto& kv : ib->second->coefficients()) support.insert(kv.first);
    Eigen::VectorXd va(static_cast<Eigen::Index>(support.size())), vb(va.size());
    Eigen::Index i = 0;
    for (const Term& t : support) {
      va(i) = ia->second->coefficient(t);
      vb(i) = ib->second->coefficient(t);
      ++i;
    }
    total += (va.normalized() - vb.normalized()).norm();
  }
  return total / static_cast<double>(keys.size());
}

ExperimentConfig ExperimentConfig::desk() {
  ExperimentConfig c;
  c.runs = 5;
  c.alphas = {0.1, 1.0, 10.0};
  c.eps_step = 1e-2;
  c.nus = {0.01};
  return c;
}

ExperimentConfig ExperimentConfig::full() {
  ExperimentConfig c;
  c.nus = {0.01, 0.05};
  return c;
}

std::vector<double> ExperimentConfig::eps_grid() const {
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double e = eps_start + static_cast<double>(k) * eps_step;
    if (!(e < eps_end)) break;
    grid.push_back(e);
  }
  return grid;
}

void ExperimentConfig::validate() const {
  if (varieties.empty()) throw std::invalid_argument("experiment: no varieties");
  if (normalizations.empty()) throw std::invalid_argument("experiment: no normalizations");
  if (alphas.empty() || nus.empty()) throw std::invalid_argument("experiment: empty alpha or nu list");
  for (double a : alphas)
    if (!(a > 0.0)) throw std::invalid_argument("experiment: alpha must be positive");
  for (double nu : nus)
    if (!(nu >= 0.0)) throw std::invalid_argument("experiment: nu must be >= 0");
  if (runs < 1) throw std::invalid_argument("experiment: runs must be >= 1");
  if (samples < 2) throw std::invalid_argument("experiment: need at least two samples");
  if (!(eps_step > 0.0) || !(eps_start >= 0.0)) throw std::invalid_argument("experiment: invalid eps grid");
  if (eps_grid().empty()) throw std::invalid_argument("experiment: eps grid is empty");
  if (algorithm == Algorithm::avi && !(tau > 0.0)) throw std::invalid_argument("experiment: avi needs tau > 0");
}

namespace {

struct Cell {
  Variety variety;
  double nu;
  std::size_t run;
  Normalization normalization;
};

bool applicable(const AlgorithmSpec& spec, double eps) { return spec.algorithm == Algorithm::abm || eps > spec.tau; }

/// Degree-wise counts, or an empty vector when the algorithm aborts on a degenerate eigenvector.
std::vector<int> counts_or_abort(const AlgorithmSpec& spec, const PointSetd& X, double eps, int T) {
  try {
    return degreewise_counts(run_algorithm(spec, X, eps).G, T);
  } catch (const GevpDegenerate&) {
    return {};
  }
}

std::vector<RunRecord> run_cell(const ExperimentConfig& config, const Cell& cell, const std::vector<double>& grid) {
  const VarietySpec vs = variety_spec(cell.variety);
  const int T = vs.degree_cap;
  auto sample_rng = make_rng(config.seed, cell.run, kSamplePurpose);
  auto noise_rng = make_rng(config.seed, cell.run, kNoisePurpose);
  const PointSetd Xstar = preprocess(sample_variety(vs, config.samples, sample_rng)).points;
  const PointSetd X = perturb(Xstar, cell.nu, noise_rng);

  AlgorithmSpec spec{config.algorithm, cell.normalization, config.tau, T};
  std::vector<std::vector<int>> star(grid.size()), pert(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!applicable(spec, grid[k])) continue;
    star[k] = counts_or_abort(spec, Xstar, grid[k], T);
    pert[k] = counts_or_abort(spec, X, grid[k], T);
  }

  std::vector<RunRecord> records;
  for (double alpha : config.alphas) {
    RunRecord rec{cell.variety, cell.nu, cell.run, alpha, cell.normalization, {}, false, 0, 0, 0, 0};
    AlgorithmSpec scaled_spec = spec;
    scaled_spec.tau = spec.tau * alpha;
    const PointSetd aX = X.scaled(alpha);
    const PointSetd aXstar = Xstar.scaled(alpha);
    std::vector<std::size_t> passing;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      EpsOutcome o{grid[k], star[k], pert[k], std::nullopt, false};
      if (!pert[k].empty() && star[k] == pert[k]) {
        o.scaled = alpha == 1.0 ? pert[k] : counts_or_abort(scaled_spec, aX, alpha * grid[k], T);
        o.passed = *o.scaled == pert[k];
      }
      if (o.passed) passing.push_back(k);
      rec.outcomes.push_back(std::move(o));
    }
    if (!passing.empty()) {
      rec.success = true;
      rec.range_lo = alpha * grid[passing.front()];
      rec.range_hi = alpha * grid[passing.back()];
      const double eps = alpha * grid[passing[passing.size() / 2]];
      const BasisResult ghat = run_algorithm(scaled_spec, aX, eps);
      double ev = 0.0;
      for (const auto& g : ghat.G)
        if (g.poly.degree() <= T) ev = std::max(ev, eval(g.poly, aXstar).norm());
      rec.extent = ev;
      rec.coeff_dist = std::numeric_limits<double>::quiet_NaN();
      try {
        const BasisResult gref = run_algorithm(scaled_spec, aXstar, eps);
        if (!ghat.G.empty() || !gref.G.empty()) rec.coeff_dist = coefficient_distance(gref.G, ghat.G);
      } catch (const GevpDegenerate&) {
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string dataset_name(Variety v, double nu) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s/nu=%g", variety_spec(v).name.c_str(), nu);
  return buf;
}

}  // namespace

SweepResult sweep(const ExperimentConfig& config, const ProgressCallback& progress) {
  config.validate();
  const std::vector<double> grid = config.eps_grid();

  std::vector<Cell> cells;
  for (Variety v : config.varieties)
    for (double nu : config.nus)
      for (Normalization norm : config.normalizations)
        for (std::size_t r = 0; r < config.runs; ++r) cells.push_back({v, nu, r, norm});

  std::vector<std::vector<RunRecord>> per_cell(cells.size());
  std::atomic<std::size_t> next{0}, done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        per_cell[i] = run_cell(config, cells[i], grid);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, cells.size());
      }
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  for (auto& recs : per_cell)
    for (auto& r : recs) result.records.push_back(std::move(r));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (Variety v : config.varieties)
    for (double nu : config.nus)
      for (Normalization norm : config.normalizations)
        for (double alpha : config.alphas) {
          ReportRow row{dataset_name(v, nu), norm, nu, alpha, nan, nan, nan, nan, 0.0, 0, config.runs};
          double lo = 0, hi = 0, ev = 0, cd = 0;
          std::size_t cd_count = 0;
          for (const auto& r : result.records) {
            if (r.variety != v || r.nu != nu || r.normalization != norm || r.alpha != alpha || !r.success) continue;
            ++row.succeeded;
            lo += r.range_lo;
            hi += r.range_hi;
            ev += r.extent;
            if (!std::isnan(r.coeff_dist)) {
              cd += r.coeff_dist;
              ++cd_count;
            }
          }
          row.success_rate = static_cast<double>(row.succeeded) / static_cast<double>(row.total);
          if (row.succeeded > 0) {
            const double s = static_cast<double>(row.succeeded);
            row.range_lo = lo / s;
            row.range_hi = hi / s;
            row.ev = ev / s;
            if (cd_count > 0) row.coeff_dist = cd / static_cast<double>(cd_count);
          }
          result.rows.push_back(row);
        }
  return result;
}

namespace {

std::string num(double v, const char* pattern = "%.6g") {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "dataset,normalization,alpha,range_lo,range_hi,coeff_dist,ev,success_rate,succeeded,total\n";
  for (const auto& r : rows)
    out << r.dataset << ',' << to_string(r.normalization) << ',' << num(r.alpha) << ',' << num(r.range_lo) << ','
        << num(r.range_hi) << ',' << num(r.coeff_dist) << ',' << num(r.ev) << ',' << num(r.success_rate, "%.2f")
        << ',' << r.succeeded << ',' << r.total << '\n';
}

std::string format_report(const std::vector<ReportRow>& rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %-18s %8s  %-22s %10s %10s  %s\n", "dataset", "normalization", "alpha",
                "range", "coeff.dist", "e.v.", "success rate");
  out += buf;
  for (const auto& r : rows) {
    const std::string range =
        std::isnan(r.range_lo) ? "--" : "[" + num(r.range_lo, "%.3g") + ", " + num(r.range_hi, "%.3g") + "]";
    const std::string cd = std::isnan(r.coeff_dist) ? "--" : num(r.coeff_dist, "%.3g");
    const std::string ev = std::isnan(r.ev) ? "--" : num(r.ev, "%.3g");
    std::snprintf(buf, sizeof buf, "%-12s %-18s %8g  %-22s %10s %10s  %.2f [%02zu/%02zu]\n", r.dataset.c_str(),
                  to_string(r.normalization).c_str(), r.alpha, range.c_str(), cd.c_str(), ev.c_str(), r.success_rate,
                  r.succeeded, r.total);
    out += buf;
  }
  return out;
}

}  // namespace gwn
