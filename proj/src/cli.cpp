#include "bayeslin/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "bayeslin/bayes_risk.hpp"
#include "bayeslin/covariance.hpp"
#include "bayeslin/equivalence.hpp"
#include "bayeslin/error.hpp"
#include "bayeslin/estimators.hpp"
#include "bayeslin/matrix_ops.hpp"
#include "bayeslin/model.hpp"
#include "bayeslin/problem_io.hpp"
#include "bayeslin/random.hpp"
#include "bayeslin/scenarios.hpp"
#include "bayeslin/sufficiency.hpp"
#include "bayeslin/version.hpp"

namespace bayeslin::cli {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string problem_path;
  double tol_eq = ToleranceConfig{}.equality_rel_tol;
  double tol_rank = ToleranceConfig{}.rank_rel_tol;
  std::uint64_t seed = kDefaultWitnessSeed;
  std::vector<double> a_values;
  bool batch = false;
  std::string out_path;

  // estimate / rss / sufficiency / risk
  std::string phi_choice = "identity";
  std::string k_choice;
  std::string family = "bayes-linear";
  std::string y_literal;
  std::int64_t draws = 0;

  // simulate
  std::string kind;
  bool parametric = false;
  double a_single = 9.0;
  double rho = 0.1;
  int sim_n = 6;
  int sim_k = 2;

  ToleranceConfig tolerances() const {
    ToleranceConfig tol;
    tol.equality_rel_tol = tol_eq;
    tol.rank_rel_tol = tol_rank;
    tol.validate();
    return tol;
  }
};

ordered_json error_object(const std::string& kind, const std::string& message,
                          const std::string& field) {
  ordered_json err;
  err["kind"] = kind;
  err["message"] = message;
  if (!field.empty()) err["field"] = field;
  return err;
}

ordered_json meta_object(const Options& opts) {
  ordered_json meta;
  meta["version"] = kVersion;
  const ToleranceConfig tol = opts.tolerances();
  meta["tolerances"] = {{"rank_rel_tol", tol.rank_rel_tol},
                        {"equality_rel_tol", tol.equality_rel_tol},
                        {"psd_eig_tol", tol.psd_eig_tol}};
  meta["seed"] = opts.seed;
  return meta;
}

ordered_json digest_object(const Problem& problem) {
  ordered_json digests;
  digests["X"] = matrix_digest(problem.design.X);
  if (!problem.parametric()) {
    digests["Omega"] = matrix_digest(problem.design.Omega);
  }
  if (problem.design.Z) digests["Z"] = matrix_digest(*problem.design.Z);
  if (problem.K1) digests["K1"] = matrix_digest(*problem.K1);
  if (problem.K2) digests["K2"] = matrix_digest(*problem.K2);
  if (problem.W) digests["W"] = matrix_digest(*problem.W);
  if (problem.y) digests["y"] = matrix_digest(*problem.y);
  return digests;
}

ordered_json residuals_to_json(
    const std::vector<std::pair<std::string, double>>& residuals) {
  ordered_json out;
  for (const auto& [label, value] : residuals) out[label] = value;
  return out;
}

ordered_json equivalence_to_json(const EquivalenceReport& report) {
  ordered_json doc;
  doc["verdict"] = report.verdict;
  doc["theorem"] = report.theorem;
  doc["residuals"] = residuals_to_json(report.condition_residuals);
  doc["max_pointwise_gap"] = report.max_pointwise_gap;
  if (!report.witnesses.empty()) {
    ordered_json witnesses = ordered_json::array();
    for (const auto& w : report.witnesses) {
      witnesses.push_back({{"y", vector_to_json(w.y)}, {"gap", w.gap}});
    }
    doc["witnesses"] = witnesses;
  }
  return doc;
}

ordered_json validation_to_json(const ValidationReport& report) {
  ordered_json doc;
  doc["valid"] = report.valid;
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json check;
    check["name"] = c.name;
    check["passed"] = c.passed;
    check["residual"] = c.residual;
    if (!c.detail.empty()) check["detail"] = c.detail;
    checks.push_back(std::move(check));
  }
  doc["checks"] = checks;
  return doc;
}

/// Substitutes the a-grid value into a parametric problem; passes concrete
/// problems through untouched.
Problem instantiate(const Problem& raw, std::optional<double> a) {
  if (!raw.parametric()) {
    if (a) {
      throw invalid_input(
          "--a applies only to problems with a parametric omega_kind", "a");
    }
    return raw;
  }
  if (*raw.omega_kind != "example36") {
    throw invalid_input("unknown omega_kind: " + *raw.omega_kind,
                        "omega_kind");
  }
  if (!a) {
    throw invalid_input("parametric problem needs at least one --a value",
                        "a");
  }
  Problem problem = raw;
  problem.design.Omega = example_omega(*a);
  problem.omega_kind.reset();
  return problem;
}

const Eigen::MatrixXd& require_matrix(const std::optional<Eigen::MatrixXd>& m,
                                      const char* field) {
  if (!m) {
    throw invalid_input(std::string("problem file is missing ") + field,
                        field);
  }
  return *m;
}

Eigen::VectorXd resolve_y(const Problem& problem, const Options& opts) {
  if (!opts.y_literal.empty()) {
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(opts.y_literal);
    } catch (const nlohmann::json::parse_error&) {
      throw invalid_input("--y must be a JSON array of numbers", "y");
    }
    return vector_from_json(parsed, "y");
  }
  if (problem.y) return *problem.y;
  throw invalid_input("no observation vector: pass --y or put y in the file",
                      "y");
}

Eigen::MatrixXd resolve_phi(const Problem& problem, const Options& opts) {
  if (opts.phi_choice == "identity") {
    return Eigen::MatrixXd::Identity(problem.design.n(), problem.design.n());
  }
  if (opts.phi_choice == "omega") return problem.design.Omega;
  throw invalid_input("--phi must be 'identity' or 'omega'", "phi");
}

Eigen::MatrixXd resolve_k(const Problem& problem, const Options& opts,
                          const ToleranceConfig& tol) {
  const Eigen::Index k = problem.design.k();
  if (opts.k_choice == "K1") return require_matrix(problem.K1, "K1");
  if (opts.k_choice == "K2") return require_matrix(problem.K2, "K2");
  if (opts.k_choice == "zero") return Eigen::MatrixXd::Zero(k, k);
  if (opts.k_choice == "wstar") {
    PriorMoments prior{problem.gamma.value_or(1.0),
                       require_matrix(problem.W, "W")};
    if (!problem.gamma) {
      throw invalid_input("wstar needs gamma in the problem file", "gamma");
    }
    (void)tol;
    return prior_w_star(prior);
  }
  throw invalid_input("--k must be one of K1, K2, zero, wstar", "k");
}

// ---- subcommand handlers ------------------------------------------------

struct HandlerResult {
  ordered_json report;
  int code = 0;
};

HandlerResult run_validate(const Problem& problem, const Options& opts,
                           std::optional<double> a) {
  const Problem concrete = instantiate(problem, a);
  const ToleranceConfig tol = opts.tolerances();
  const ValidationReport report = validate_design(concrete.design, tol);
  ordered_json doc = validation_to_json(report);
  if (report.valid) return {std::move(doc), 0};
  for (const auto& c : report.checks) {
    if (!c.passed) {
      ordered_json wrapped;
      wrapped["error"] = error_object(validation_failure_kind(c.name),
                                      "design invariant failed", c.name);
      wrapped["report"] = std::move(doc);
      return {std::move(wrapped), 2};
    }
  }
  return {std::move(doc), 0};
}

HandlerResult run_decompose(const Problem& problem, const Options& opts,
                            std::optional<double> a) {
  const Problem concrete = instantiate(problem, a);
  const ToleranceConfig tol = opts.tolerances();
  const CovarianceDecomposition dec = decompose(concrete.design, tol);
  const Eigen::MatrixXd rebuilt = recompose(dec, tol);
  const double recomposition =
      (rebuilt - concrete.design.Omega).norm() /
      std::max(1.0, concrete.design.Omega.norm());

  ordered_json doc;
  doc["values"] = {{"Gamma", matrix_to_json(dec.Gamma)},
                   {"Xi", matrix_to_json(dec.Xi)},
                   {"Delta", matrix_to_json(dec.Delta)},
                   {"Z", matrix_to_json(dec.Z)}};
  doc["residuals"] = {{"recomposition", recomposition}};
  doc["values"]["rao_structure"] = has_rao_structure(concrete.design, tol);
  return {std::move(doc), 0};
}

HandlerResult run_estimate(const Problem& problem, const Options& opts,
                           std::optional<double> a) {
  const Problem concrete = instantiate(problem, a);
  const ToleranceConfig tol = opts.tolerances();
  const Eigen::MatrixXd phi = resolve_phi(concrete, opts);
  const Eigen::MatrixXd k = resolve_k(concrete, opts, tol);

  LinearEstimatorMap map;
  if (opts.family == "bayes-linear") {
    map = bayes_linear_map(concrete.design, phi, k, tol);
  } else if (opts.family == "bayes-linear-alt") {
    map = bayes_linear_alt_map(concrete.design, phi, k, tol);
  } else if (opts.family == "general-ridge") {
    map = general_ridge_map(concrete.design, phi, k, tol);
  } else {
    throw invalid_input(
        "--family must be bayes-linear, bayes-linear-alt, or general-ridge",
        "family");
  }

  ordered_json doc;
  doc["values"] = {{"family", to_string(map.family)},
                   {"L", matrix_to_json(map.L)}};
  if (!opts.y_literal.empty() || concrete.y) {
    const Eigen::VectorXd y = resolve_y(concrete, opts);
    doc["values"]["beta_hat"] = vector_to_json(apply_map(map, y));
  }
  return {std::move(doc), 0};
}

HandlerResult run_rss(const Problem& problem, const Options& opts,
                      std::optional<double> a) {
  const Problem concrete = instantiate(problem, a);
  const ToleranceConfig tol = opts.tolerances();
  const Eigen::MatrixXd phi = resolve_phi(concrete, opts);
  const Eigen::MatrixXd k = resolve_k(concrete, opts, tol);
  const Eigen::VectorXd y = resolve_y(concrete, opts);
  const double value = generalized_rss(concrete.design, phi, k, y, tol);
  ordered_json doc;
  doc["values"] = {{"rss", value}};
  return {std::move(doc), 0};
}

using CheckFn = std::function<EquivalenceReport(
    const GeneralLinearDesign&, const Eigen::MatrixXd&, const Eigen::MatrixXd&,
    const ToleranceConfig&, std::uint64_t)>;

HandlerResult run_check(const Problem& problem, const Options& opts,
                        std::optional<double> a, const CheckFn& check) {
  const Problem concrete = instantiate(problem, a);
  const ToleranceConfig tol = opts.tolerances();
  const EquivalenceReport report =
      check(concrete.design, require_matrix(concrete.K1, "K1"),
            require_matrix(concrete.K2, "K2"), tol, opts.seed);
  ordered_json doc = equivalence_to_json(report);
  if (a) doc["a"] = *a;
  return {std::move(doc), 0};
}

HandlerResult run_membership(const Problem& problem, const Options& opts,
                             std::optional<double> a) {
  const Problem concrete = instantiate(problem, a);
  const ToleranceConfig tol = opts.tolerances();
  const Eigen::MatrixXd& k1 = require_matrix(concrete.K1, "K1");
  const Eigen::MatrixXd& k2 = require_matrix(concrete.K2, "K2");
  const Eigen::VectorXd y = resolve_y(concrete, opts);
  const bool member = pointwise_membership(concrete.design, k1, k2, y, tol);
  const double residual = membership_residual(concrete.design, k1, k2, y, tol);
  ordered_json doc;
  doc["verdict"] = member;
  doc["theorem"] = "4.2";
  doc["residuals"] = {{"nullspace", residual}};
  return {std::move(doc), 0};
}

HandlerResult run_sufficiency(const Problem& problem, const Options& opts,
                              std::optional<double> a) {
  const Problem concrete = instantiate(problem, a);
  const ToleranceConfig tol = opts.tolerances();
  const std::string choice = opts.k_choice.empty() ? "K1" : opts.k_choice;
  Options k_opts = opts;
  k_opts.k_choice = choice;
  const Eigen::MatrixXd k = resolve_k(concrete, k_opts, tol);
  const SufficiencyVerdict verdict =
      classify_bayes_linear(concrete.design, k, tol);
  ordered_json doc;
  doc["theorem"] = "2.3";
  doc["values"] = {{"sufficient", verdict.sufficient},
                   {"complete", verdict.complete}};
  doc["residuals"] = {{"sufficient", verdict.residual_sufficient},
                      {"complete", verdict.residual_complete}};
  return {std::move(doc), 0};
}

HandlerResult run_risk(const Problem& problem, const Options& opts,
                       std::optional<double> a) {
  const Problem concrete = instantiate(problem, a);
  const ToleranceConfig tol = opts.tolerances();
  if (!concrete.gamma) {
    throw invalid_input("risk needs gamma in the problem file", "gamma");
  }
  const PriorMoments prior{*concrete.gamma, require_matrix(concrete.W, "W")};

  LinearEstimatorMap map;
  bool is_optimal = opts.k_choice.empty() || opts.k_choice == "wstar";
  if (is_optimal) {
    map = optimal_map(concrete.design, prior, tol);
  } else {
    Options k_opts = opts;
    const Eigen::MatrixXd k = resolve_k(concrete, k_opts, tol);
    const Eigen::MatrixXd phi = resolve_phi(concrete, opts);
    map = bayes_linear_map(concrete.design, phi, k, tol);
  }

  const RiskReport report =
      risk_report(map.L, concrete.design, prior, opts.draws, opts.seed, tol);
  ordered_json doc;
  doc["values"] = {{"closed_form", report.closed_form},
                   {"efficiency_vs_optimal", report.efficiency_vs_optimal},
                   {"family", to_string(map.family)}};
  if (report.monte_carlo) {
    doc["values"]["monte_carlo"] = {
        {"estimate", report.monte_carlo->estimate},
        {"standard_error", report.monte_carlo->standard_error},
        {"draws", report.monte_carlo->draws}};
  }
  const double grad_scale =
      std::max(1e-300, (prior.W * concrete.design.X.transpose()).norm());
  doc["residuals"] = {
      {"stationarity",
       0.5 * risk_gradient(map.L, concrete.design, prior, tol).norm() /
           grad_scale}};
  return {std::move(doc), 0};
}

Problem build_simulated(const Options& opts) {
  const ToleranceConfig tol = opts.tolerances();
  Problem problem;
  if (opts.kind == "example36") {
    if (opts.parametric) {
      const ExampleFixture fx = example_fixture(9.0);
      problem.design.X = fx.design.X;
      problem.omega_kind = "example36";
      problem.K1 = fx.K1;
      problem.K2 = fx.K2;
    } else {
      const ExampleFixture fx = example_fixture(opts.a_single);
      problem.design = fx.design;
      problem.K1 = fx.K1;
      problem.K2 = fx.K2;
    }
  } else if (opts.kind == "rao-mixed") {
    NormalSampler rng(opts.seed);
    GeneralLinearDesign base;
    base.X = random_design(opts.sim_n, opts.sim_k, rng);
    base.Omega = Eigen::MatrixXd::Identity(opts.sim_n, opts.sim_n);
    const Eigen::MatrixXd gamma_bar =
        random_psd_of_rank(opts.sim_k, opts.sim_k - 1, rng);
    const Eigen::MatrixXd delta_bar =
        random_spd(opts.sim_n - opts.sim_k, rng);
    problem.design.X = base.X;
    problem.design.Omega =
        rao_mixed_effects_omega(base, gamma_bar, delta_bar, tol);
    // K annihilating X^T X GammaBar pairs the estimator with itself across
    // the two weight matrices.
    const Eigen::MatrixXd product =
        base.X.transpose() * base.X * gamma_bar;
    const Eigen::MatrixXd basis = orthonormal_basis(product, tol);
    const Eigen::MatrixXd k =
        Eigen::MatrixXd::Identity(opts.sim_k, opts.sim_k) -
        basis * basis.transpose();
    problem.K1 = k;
    problem.K2 = k;
  } else if (opts.kind == "spatial-ar1") {
    NormalSampler rng(opts.seed);
    // Path-graph contiguity.
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(opts.sim_n, opts.sim_n);
    for (int i = 0; i + 1 < opts.sim_n; ++i) {
      c(i, i + 1) = 1.0;
      c(i + 1, i) = 1.0;
    }
    const SpatialWeights weights = row_normalized_weights(c);
    problem.design.X = random_design(opts.sim_n, opts.sim_k, rng);
    problem.design.Omega = spatial_ar1_omega(weights, opts.rho, tol);
    problem.K1 = Eigen::MatrixXd::Identity(opts.sim_k, opts.sim_k);
    problem.K2 = Eigen::MatrixXd::Identity(opts.sim_k, opts.sim_k);
  } else if (opts.kind == "spatial-null") {
    const SpatialNullInstance instance = spatial_null_instance();
    problem.design.X = instance.X;
    problem.design.Omega =
        spatial_ar1_omega(instance.weights, opts.rho, tol);
    problem.K1 = instance.K;
    problem.K2 = instance.K;
  } else {
    throw invalid_input(
        "--kind must be one of example36, rao-mixed, spatial-ar1, "
        "spatial-null",
        "kind");
  }
  problem.design.sigma2 = 1.0;
  problem.gamma = 1.0;
  problem.W = Eigen::MatrixXd::Identity(problem.design.k(),
                                        problem.design.k());
  return problem;
}

HandlerResult run_simulate(const Options& opts) {
  if (opts.out_path.empty()) {
    throw invalid_input("simulate needs --out for the problem file", "out");
  }
  const Problem problem = build_simulated(opts);
  save_problem(problem, opts.out_path);
  ordered_json doc;
  doc["values"] = {{"written", opts.out_path},
                   {"kind", opts.kind},
                   {"n", problem.design.n()},
                   {"k", problem.design.k()},
                   {"parametric", problem.parametric()}};
  doc["inputs"] = digest_object(problem);
  doc["meta"] = meta_object(opts);
  return {std::move(doc), 0};
}

using ProblemHandler =
    std::function<HandlerResult(const Problem&, const Options&,
                                std::optional<double>)>;

/// Runs a handler over the a-grid (or once, concretely) and assembles the
/// report with digests and meta.
HandlerResult run_on_problem(const std::string& path, const Options& opts,
                             const ProblemHandler& handler) {
  const Problem problem = load_problem(path);
  HandlerResult result;
  if (problem.parametric() && opts.a_values.size() != 1 &&
      !opts.a_values.empty()) {
    ordered_json per_a = ordered_json::array();
    bool all_true = true;
    bool any_verdict = false;
    int code = 0;
    for (double a : opts.a_values) {
      HandlerResult sub = handler(problem, opts, a);
      if (sub.report.contains("verdict")) {
        any_verdict = true;
        all_true = all_true && sub.report["verdict"].get<bool>();
      }
      code = std::max(code, sub.code);
      per_a.push_back(std::move(sub.report));
    }
    if (any_verdict) result.report["verdict"] = all_true;
    result.report["per_a"] = std::move(per_a);
    result.code = code;
  } else {
    std::optional<double> a;
    if (!opts.a_values.empty()) a = opts.a_values.front();
    result = handler(problem, opts, a);
  }
  result.report["inputs"] = digest_object(problem);
  result.report["meta"] = meta_object(opts);
  return result;
}

/// Directory mode: every *.json processed concurrently with per-file
/// isolation, output ordered by filename.
HandlerResult run_batch(const Options& opts, const ProblemHandler& handler) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(opts.problem_path)) {
    throw invalid_input("--batch needs a directory of problem files",
                        "problem_path");
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(opts.problem_path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::future<HandlerResult>> futures;
  futures.reserve(files.size());
  for (const auto& file : files) {
    futures.push_back(std::async(std::launch::async, [&, file]() {
      return run_on_problem(file, opts, handler);
    }));
  }

  ordered_json reports = ordered_json::array();
  int code = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    ordered_json entry;
    entry["file"] = fs::path(files[i]).filename().string();
    try {
      HandlerResult sub = futures[i].get();
      code = std::max(code, sub.code);
      entry["report"] = std::move(sub.report);
    } catch (const Error& e) {
      entry["error"] = error_object(e.kind(), e.what(), e.field());
      code = 2;
    } catch (const std::exception& e) {
      entry["error"] = error_object("internal", e.what(), "");
      code = 2;
    }
    reports.push_back(std::move(entry));
  }
  HandlerResult result;
  result.report["batch"] = std::move(reports);
  result.report["meta"] = meta_object(opts);
  result.code = code;
  return result;
}

int emit(const HandlerResult& result, const Options& opts, std::ostream& out) {
  const std::string text = dump_json(result.report);
  out << text << "\n";
  if (!opts.out_path.empty()) {
    std::ofstream file(opts.out_path);
    if (!file) {
      throw invalid_input("cannot write report to " + opts.out_path, "out");
    }
    file << text << "\n";
  }
  return result.code;
}

void add_common_flags(CLI::App* cmd, Options& opts, bool with_problem = true) {
  if (with_problem) {
    cmd->add_option("problem", opts.problem_path, "problem file (JSON)")
        ->required();
    cmd->add_flag("--batch", opts.batch,
                  "treat the problem path as a directory of problem files");
  }
  cmd->add_option("--tol-eq", opts.tol_eq, "equality tolerance override");
  cmd->add_option("--tol-rank", opts.tol_rank, "rank tolerance override");
  cmd->add_option("--seed", opts.seed, "seed for randomized cross-checks");
  cmd->add_option("--out", opts.out_path, "also write the report to a file");
  cmd->add_option("--a", opts.a_values,
                  "a-grid value for parametric problems (repeatable)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  Options opts;
  CLI::App app{"Bayes linear and general ridge estimation toolkit"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "check design invariants");
  add_common_flags(validate, opts);

  auto* decompose_cmd =
      app.add_subcommand("decompose", "covariance blocks in the (X, Z) basis");
  add_common_flags(decompose_cmd, opts);

  auto* estimate = app.add_subcommand("estimate", "build an estimator map");
  add_common_flags(estimate, opts);
  estimate->add_option("--phi", opts.phi_choice, "weight matrix: identity|omega");
  estimate->add_option("--k", opts.k_choice, "regularizer: K1|K2|zero|wstar")
      ->required();
  estimate->add_option("--family", opts.family,
                       "bayes-linear|bayes-linear-alt|general-ridge");
  estimate->add_option("--y", opts.y_literal, "observation as a JSON array");

  auto* rss = app.add_subcommand("rss", "generalized residual sum of squares");
  add_common_flags(rss, opts);
  rss->add_option("--phi", opts.phi_choice, "weight matrix: identity|omega");
  rss->add_option("--k", opts.k_choice, "regularizer: K1|K2|zero|wstar")
      ->required();
  rss->add_option("--y", opts.y_literal, "observation as a JSON array");

  auto* check_equal = app.add_subcommand(
      "check-equal", "estimator equality for all observations");
  add_common_flags(check_equal, opts);

  auto* check_rss = app.add_subcommand(
      "check-rss-equal", "residual-sum-of-squares equality for all observations");
  add_common_flags(check_rss, opts);

  auto* check_joint = app.add_subcommand(
      "check-joint", "simultaneous estimator and RSS equality");
  add_common_flags(check_joint, opts);

  auto* membership = app.add_subcommand(
      "membership", "pointwise equality at a given observation");
  add_common_flags(membership, opts);
  membership->add_option("--y", opts.y_literal, "observation as a JSON array");

  auto* sufficiency = app.add_subcommand(
      "sufficiency", "linear sufficiency and completeness classification");
  add_common_flags(sufficiency, opts);
  sufficiency->add_option("--k", opts.k_choice, "regularizer: K1|K2 (default K1)");

  auto* risk = app.add_subcommand("risk", "Bayes risk of an estimator map");
  add_common_flags(risk, opts);
  risk->add_option("--k", opts.k_choice,
                   "regularizer: K1|K2|zero (default: the optimal map)");
  risk->add_option("--phi", opts.phi_choice, "weight matrix: identity|omega");
  risk->add_option("--draws", opts.draws, "Monte-Carlo draws (0 disables)");

  auto* simulate =
      app.add_subcommand("simulate", "write a generated problem file");
  add_common_flags(simulate, opts, /*with_problem=*/false);
  simulate->add_option("--kind", opts.kind,
                       "example36|rao-mixed|spatial-ar1|spatial-null")
      ->required();
  simulate->add_flag("--parametric", opts.parametric,
                     "write omega_kind instead of a concrete Omega");
  simulate->add_option("--a-value", opts.a_single,
                       "covariance parameter for example36");
  simulate->add_option("--rho", opts.rho, "spatial correlation coefficient");
  simulate->add_option("--n", opts.sim_n, "rows for generated designs");
  simulate->add_option("--k-dim", opts.sim_k, "columns for generated designs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    ordered_json doc;
    doc["error"] = error_object("usage", e.what(), "");
    out << dump_json(doc) << "\n";
    return 2;
  }

  try {
    HandlerResult result;
    if (simulate->parsed()) {
      result = run_simulate(opts);
      // --out names the generated problem file here, not a report copy.
      opts.out_path.clear();
    } else {
      ProblemHandler handler;
      if (validate->parsed()) {
        handler = run_validate;
      } else if (decompose_cmd->parsed()) {
        handler = run_decompose;
      } else if (estimate->parsed()) {
        handler = run_estimate;
      } else if (rss->parsed()) {
        handler = run_rss;
      } else if (check_equal->parsed()) {
        handler = [](const Problem& p, const Options& o,
                     std::optional<double> a) {
          return run_check(p, o, a,
                           [](const GeneralLinearDesign& d,
                              const Eigen::MatrixXd& k1,
                              const Eigen::MatrixXd& k2,
                              const ToleranceConfig& tol, std::uint64_t seed) {
                             return equality_all_y(d, k1, k2, tol, seed);
                           });
        };
      } else if (check_rss->parsed()) {
        handler = [](const Problem& p, const Options& o,
                     std::optional<double> a) {
          return run_check(p, o, a,
                           [](const GeneralLinearDesign& d,
                              const Eigen::MatrixXd& k1,
                              const Eigen::MatrixXd& k2,
                              const ToleranceConfig& tol, std::uint64_t seed) {
                             return rss_equality_all_y(d, k1, k2, tol, seed);
                           });
        };
      } else if (check_joint->parsed()) {
        handler = [](const Problem& p, const Options& o,
                     std::optional<double> a) {
          return run_check(p, o, a,
                           [](const GeneralLinearDesign& d,
                              const Eigen::MatrixXd& k1,
                              const Eigen::MatrixXd& k2,
                              const ToleranceConfig& tol, std::uint64_t seed) {
                             return joint_equality(d, k1, k2, tol, seed);
                           });
        };
      } else if (membership->parsed()) {
        handler = run_membership;
      } else if (sufficiency->parsed()) {
        handler = run_sufficiency;
      } else if (risk->parsed()) {
        handler = run_risk;
      }
      result = opts.batch ? run_batch(opts, handler)
                          : run_on_problem(opts.problem_path, opts, handler);
    }
    return emit(result, opts, out);
  } catch (const Error& e) {
    ordered_json doc;
    doc["error"] = error_object(e.kind(), e.what(), e.field());
    out << dump_json(doc) << "\n";
    return 2;
  } catch (const std::exception& e) {
    ordered_json doc;
    doc["error"] = error_object("internal", e.what(), "");
    out << dump_json(doc) << "\n";
    return 2;
  }
}

}  // namespace bayeslin::cli
