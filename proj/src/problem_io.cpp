#include "bayeslin/problem_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bayeslin/error.hpp"

namespace bayeslin {

Eigen::MatrixXd matrix_from_json(const nlohmann::json& value,
                                 const std::string& field) {
  if (!value.is_array() || value.empty()) {
    throw Error("parse", field + " must be a nonempty array of row arrays",
                field);
  }
  const std::size_t rows = value.size();
  if (!value[0].is_array()) {
    throw Error("parse", field + " must be an array of row arrays", field);
  }
  const std::size_t cols = value[0].size();
  if (cols == 0) {
    throw Error("parse", field + " has an empty row", field);
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = value[i];
    if (!row.is_array() || row.size() != cols) {
      throw Error("parse", field + " rows have inconsistent lengths", field);
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!row[j].is_number()) {
        throw Error("parse", field + " has a non-numeric entry", field);
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          row[j].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& value,
                                 const std::string& field) {
  if (!value.is_array() || value.empty()) {
    throw Error("parse", field + " must be a nonempty array of numbers",
                field);
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) {
      throw Error("parse", field + " has a non-numeric entry", field);
    }
    v(static_cast<Eigen::Index>(i)) = value[i].get<double>();
  }
  return v;
}

nlohmann::ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::ordered_json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Problem parse_problem(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw Error("parse", "problem file must be a JSON object");
  }
  Problem problem;
  if (!doc.contains("X")) {
    throw Error("parse", "problem file is missing the required field X", "X");
  }
  problem.design.X = matrix_from_json(doc.at("X"), "X");

  if (doc.contains("omega_kind")) {
    if (doc.contains("Omega")) {
      throw Error("parse",
                  "problem file may not carry both Omega and omega_kind",
                  "omega_kind");
    }
    problem.omega_kind = doc.at("omega_kind").get<std::string>();
  } else {
    if (!doc.contains("Omega")) {
      throw Error("parse",
                  "problem file is missing the required field Omega", "Omega");
    }
    problem.design.Omega = matrix_from_json(doc.at("Omega"), "Omega");
  }

  if (doc.contains("Z")) {
    problem.design.Z = matrix_from_json(doc.at("Z"), "Z");
  }
  if (doc.contains("sigma2")) {
    problem.design.sigma2 = doc.at("sigma2").get<double>();
  }
  if (doc.contains("gamma")) problem.gamma = doc.at("gamma").get<double>();
  if (doc.contains("W")) problem.W = matrix_from_json(doc.at("W"), "W");
  if (doc.contains("K1")) problem.K1 = matrix_from_json(doc.at("K1"), "K1");
  if (doc.contains("K2")) problem.K2 = matrix_from_json(doc.at("K2"), "K2");
  if (doc.contains("y")) problem.y = vector_from_json(doc.at("y"), "y");
  return problem;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("parse", "cannot open problem file: " + path, "problem_path");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("parse", std::string("problem file is not valid JSON: ") +
                             e.what(),
                "problem_path");
  }
  return parse_problem(doc);
}

nlohmann::ordered_json problem_to_json(const Problem& problem) {
  nlohmann::ordered_json doc;
  doc["X"] = matrix_to_json(problem.design.X);
  if (problem.omega_kind) {
    doc["omega_kind"] = *problem.omega_kind;
  } else {
    doc["Omega"] = matrix_to_json(problem.design.Omega);
  }
  if (problem.design.Z) doc["Z"] = matrix_to_json(*problem.design.Z);
  if (problem.design.sigma2) doc["sigma2"] = *problem.design.sigma2;
  if (problem.gamma) doc["gamma"] = *problem.gamma;
  if (problem.W) doc["W"] = matrix_to_json(*problem.W);
  if (problem.K1) doc["K1"] = matrix_to_json(*problem.K1);
  if (problem.K2) doc["K2"] = matrix_to_json(*problem.K2);
  if (problem.y) doc["y"] = vector_to_json(*problem.y);
  return doc;
}

void save_problem(const Problem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw invalid_input("cannot write problem file: " + path, "out");
  }
  out << dump_json(problem_to_json(problem)) << "\n";
}

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_indent(std::string& out, int levels, int indent) {
  out += '\n';
  out.append(static_cast<std::size_t>(levels * indent), ' ');
}

void dump_value(const nlohmann::ordered_json& value, std::string& out,
                int level, int indent) {
  using value_t = nlohmann::ordered_json::value_t;
  switch (value.type()) {
    case value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, child] : value.items()) {
        if (!first) out += ',';
        first = false;
        append_indent(out, level + 1, indent);
        out += nlohmann::ordered_json(key).dump();
        out += ": ";
        dump_value(child, out, level + 1, indent);
      }
      append_indent(out, level, indent);
      out += '}';
      return;
    }
    case value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars print on one line; arrays of containers nest.
      bool scalar_only = true;
      for (const auto& child : value) {
        if (child.is_structured()) {
          scalar_only = false;
          break;
        }
      }
      out += '[';
      bool first = true;
      for (const auto& child : value) {
        if (!first) out += scalar_only ? ", " : ",";
        if (!scalar_only) append_indent(out, level + 1, indent);
        first = false;
        dump_value(child, out, level + 1, indent);
      }
      if (!scalar_only) append_indent(out, level, indent);
      out += ']';
      return;
    }
    case value_t::number_float:
      append_double(out, value.get<double>());
      return;
    default:
      out += value.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& doc, int indent) {
  std::string out;
  dump_value(doc, out, 0, indent);
  return out;
}

std::string matrix_digest(const Eigen::MatrixXd& m) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  const auto mix = [&hash](const unsigned char* bytes, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      hash ^= bytes[i];
      hash *= 0x100000001b3ULL;
    }
  };
  const std::int64_t dims[2] = {m.rows(), m.cols()};
  mix(reinterpret_cast<const unsigned char*>(dims), sizeof(dims));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof(double));
      mix(bytes, sizeof(double));
    }
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace bayeslin
