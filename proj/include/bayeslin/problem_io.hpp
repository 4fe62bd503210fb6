#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include <json.hpp>

#include "bayeslin/model.hpp"

namespace bayeslin {

/// One problem file: the design plus whatever optional pieces the
/// subcommands need. Matrices are arrays of row arrays; `omega_kind` marks a
/// parametric covariance family to be instantiated from CLI grid values in
/// place of a concrete "Omega" entry.
struct Problem {
  GeneralLinearDesign design;
  std::optional<double> gamma;
  std::optional<Eigen::MatrixXd> W;
  std::optional<Eigen::MatrixXd> K1;
  std::optional<Eigen::MatrixXd> K2;
  std::optional<Eigen::VectorXd> y;
  std::optional<std::string> omega_kind;

  bool parametric() const { return omega_kind.has_value(); }
};

Eigen::MatrixXd matrix_from_json(const nlohmann::json& value,
                                 const std::string& field);
Eigen::VectorXd vector_from_json(const nlohmann::json& value,
                                 const std::string& field);
nlohmann::ordered_json matrix_to_json(const Eigen::MatrixXd& m);
nlohmann::ordered_json vector_to_json(const Eigen::VectorXd& v);

Problem parse_problem(const nlohmann::json& doc);
Problem load_problem(const std::string& path);
nlohmann::ordered_json problem_to_json(const Problem& problem);
void save_problem(const Problem& problem, const std::string& path);

/// Serializes with every floating-point number printed at 17 significant
/// digits, so written values round-trip exactly and reports are
/// byte-identical across runs.
std::string dump_json(const nlohmann::ordered_json& doc, int indent = 2);

/// FNV-1a over the dimensions and raw entry bytes, as a hex tag for report
/// traceability.
std::string matrix_digest(const Eigen::MatrixXd& m);

}  // namespace bayeslin
