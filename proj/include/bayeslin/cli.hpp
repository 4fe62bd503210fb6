#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bayeslin::cli {

/// Parses and runs one invocation. Writes exactly one JSON document to
/// `out`. Returns 0 when the computation completed (verdicts, true or
/// false, are payload, not exit status) and 2 on validation or parse
/// errors, which carry a machine-readable {"error": ...} object.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace bayeslin::cli
