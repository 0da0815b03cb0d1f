#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gwn/basis.hpp"
#include "gwn/experiments.hpp"
#include "gwn/io.hpp"

using namespace gwn;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;

struct ComputeArgs {
  std::string points, out, norm = "gw", algo = "abm", order = "degrevlex";
  double eps = 0.0, tau = 1e-4, alpha = 1.0;
  bool trace = false;
};

struct VerifyArgs {
  std::string basis, points;
  std::optional<double> eps;
  double alpha = 1.0;
};

struct SampleArgs {
  std::string variety = "V1", out;
  std::size_t count = 50;
  double nu = 0.0, alpha = 1.0;
  std::uint64_t seed = 0;
};

struct ExperimentArgs {
  std::string preset = "desk", config, out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool quiet = false;
};

Normalization parse_norm(const std::string& s) {
  if (s == "gw" || s == "gradient_weighted") return Normalization::gradient_weighted;
  if (s == "coeff" || s == "coefficient") return Normalization::coefficient;
  throw std::invalid_argument("unknown normalization '" + s + "'");
}

PointSetd scale_points(const PointSetd& X, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");
  return alpha == 1.0 ? X : X.scaled(alpha);
}

int run_compute(const ComputeArgs& a) {
  if (!(a.eps >= 0.0)) throw std::invalid_argument("--eps must be >= 0");
  const PointData data = read_points(a.points);
  const PointSetd X = scale_points(data.points, a.alpha);
  const TermOrdering ord = parse_ordering(a.order, data.names);
  BasisResult r = [&] {
    if (a.algo == "abm") return abm(X, a.eps, ord, parse_norm(a.norm));
    if (a.algo == "avi") {
      if (parse_norm(a.norm) != Normalization::gradient_weighted)
        throw std::invalid_argument("avi supports gradient-weighted normalization only");
      return avi_gwn(X, a.eps, a.tau, ord);
    }
    throw std::invalid_argument("unknown algorithm '" + a.algo + "'");
  }();
  std::cout << basis_summary(r, data.names, a.trace);
  if (!a.out.empty()) write_basis(a.out, r, data.names);
  return kOk;
}

int run_verify(const VerifyArgs& a) {
  std::vector<std::string> names;
  const BasisResult r = read_basis(a.basis, &names);
  const PointSetd X = scale_points(read_points(a.points).points, a.alpha);
  const double eps = a.eps.value_or(r.eps);
  const VerificationReport rep = verify_basis(X, eps, r);
  std::cout << verification_summary(rep);
  return rep.passed() ? kOk : kVerifyFailed;
}

int run_sample(const SampleArgs& a) {
  const auto id = parse_variety(a.variety);
  if (!id) throw std::invalid_argument("unknown variety '" + a.variety + "' (use V1, V2 or V3)");
  if (!(a.alpha > 0.0)) throw std::invalid_argument("--alpha must be positive");
  const VarietySpec spec = variety_spec(*id);
  auto sample_rng = make_rng(a.seed, 0, kSamplePurpose);
  auto noise_rng = make_rng(a.seed, 0, kNoisePurpose);
  const Preprocessed pre = preprocess(sample_variety(spec, a.count, sample_rng));
  const PointSetd X = perturb(pre.points, a.nu, noise_rng).scaled(a.alpha);

  const auto names = default_variable_names(spec.dimension);
  nlohmann::json meta = {{"variety", spec.name},
                         {"count", a.count},
                         {"seed", a.seed},
                         {"nu", a.nu},
                         {"alpha", a.alpha},
                         {"preprocess_shift", std::vector<double>(pre.map.shift.data(),
                                                                  pre.map.shift.data() + pre.map.shift.size())},
                         {"preprocess_scale", pre.map.scale},
                         {"transform", "p_out = alpha * (scale * (p - shift) + noise - mean(noise))"}};
  if (*id == Variety::V1) meta["parameter"] = "angle = pi * (u + 1), u uniform in [-1, 1)";

  if (a.out.empty()) {
    write_points_csv(std::cout, X, names);
  } else {
    std::ofstream out(a.out);
    if (!out) throw IoError("cannot write " + a.out);
    write_points_csv(out, X, names);
    std::ofstream side(a.out + ".meta.json");
    if (!side) throw IoError("cannot write " + a.out + ".meta.json");
    side << meta.dump(2) << '\n';
  }
  return kOk;
}

ExperimentConfig load_config(const ExperimentArgs& a) {
  ExperimentConfig c;
  if (a.preset == "desk")
    c = ExperimentConfig::desk();
  else if (a.preset == "full")
    c = ExperimentConfig::full();
  else
    throw std::invalid_argument("unknown preset '" + a.preset + "' (use desk or full)");
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw IoError("cannot open " + a.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
      if (j.contains("varieties")) {
        c.varieties.clear();
        for (const auto& v : j.at("varieties")) {
          auto id = parse_variety(v.get<std::string>());
          if (!id) throw std::invalid_argument("unknown variety in config");
          c.varieties.push_back(*id);
        }
      }
      if (j.contains("normalizations")) {
        c.normalizations.clear();
        for (const auto& v : j.at("normalizations")) c.normalizations.push_back(parse_norm(v.get<std::string>()));
      }
      c.samples = j.value("samples", c.samples);
      c.nus = j.value("nus", c.nus);
      c.alphas = j.value("alphas", c.alphas);
      c.eps_start = j.value("eps_start", c.eps_start);
      c.eps_end = j.value("eps_end", c.eps_end);
      c.eps_step = j.value("eps_step", c.eps_step);
      c.runs = j.value("runs", c.runs);
      c.seed = j.value("seed", c.seed);
      c.tau = j.value("tau", c.tau);
      if (j.contains("algorithm")) c.algorithm = j.at("algorithm").get<std::string>() == "avi" ? Algorithm::avi : Algorithm::abm;
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("malformed experiment config: ") + e.what());
    }
  }
  if (a.seed) c.seed = *a.seed;
  if (a.threads) c.threads = a.threads;
  c.validate();
  return c;
}

int run_experiment(const ExperimentArgs& a) {
  const ExperimentConfig c = load_config(a);
  ProgressCallback progress;
  if (!a.quiet)
    progress = [](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "\r%zu/%zu cells", done, total);
      if (done == total) std::fprintf(stderr, "\n");
    };
  const SweepResult res = sweep(c, progress);
  std::cout << format_report(res.rows);
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw IoError("cannot write " + a.out);
    write_report_csv(out, res.rows);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate border bases with gradient-weighted normalization"};
  app.require_subcommand(1);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Compute an approximate border basis of a point set");
  compute->add_option("points", ca.points, "Point file (CSV or JSON)")->required();
  compute->add_option("--eps", ca.eps, "Vanishing tolerance (>= 0)")->required();
  compute->add_option("--norm", ca.norm, "Normalization: gw or coeff")->check(CLI::IsMember({"gw", "coeff"}));
  compute->add_option("--algo", ca.algo, "Algorithm: abm or avi")->check(CLI::IsMember({"abm", "avi"}));
  compute->add_option("--tau", ca.tau, "Pivot threshold for avi");
  compute->add_option("--order", ca.order, "Term ordering, e.g. degrevlex:x,y,z");
  compute->add_option("--alpha", ca.alpha, "Scale the points by this factor first");
  compute->add_option("--out,-o", ca.out, "Write the basis as JSON");
  compute->add_flag("--trace", ca.trace, "Print every step");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a basis file against a point set");
  verify->add_option("basis", va.basis, "Basis JSON file")->required();
  verify->add_option("points", va.points, "Point file")->required();
  verify->add_option("--eps", va.eps, "Tolerance (default: the one stored in the basis)");
  verify->add_option("--alpha", va.alpha, "Scale the points by this factor first");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample, preprocess, perturb and scale points of V1, V2 or V3");
  sample->add_option("variety", sa.variety, "V1, V2 or V3")->required();
  sample->add_option("--count,-n", sa.count, "Number of points");
  sample->add_option("--nu", sa.nu, "Noise variance");
  sample->add_option("--seed", sa.seed, "Random seed");
  sample->add_option("--alpha", sa.alpha, "Scale factor");
  sample->add_option("--out,-o", sa.out, "Output CSV (metadata goes to <out>.meta.json)");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Run the scaling consistency sweep");
  experiment->add_option("--preset", ea.preset, "desk or full")->check(CLI::IsMember({"desk", "full"}));
  experiment->add_option("--config", ea.config, "JSON overrides for the preset");
  experiment->add_option("--seed", ea.seed, "Random seed");
  experiment->add_option("--threads", ea.threads, "Worker threads (0 = all cores)");
  experiment->add_option("--out,-o", ea.out, "Report CSV");
  experiment->add_flag("--quiet,-q", ea.quiet, "No progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*compute) return run_compute(ca);
    if (*verify) return run_verify(va);
    if (*sample) return run_sample(sa);
    if (*experiment) return run_experiment(ea);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
