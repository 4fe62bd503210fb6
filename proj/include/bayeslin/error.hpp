#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bayeslin {

/// Library error with a machine-readable kind. The kind string is mirrored
/// verbatim into CLI error objects; `field` names the offending input when
/// there is one.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message, std::string field = {})
      : std::runtime_error(message),
        kind_(std::move(kind)),
        field_(std::move(field)) {}

  const std::string& kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string kind_;
  std::string field_;
};

inline Error invalid_input(const std::string& msg, std::string field = {}) {
  return Error("invalid-input", msg, std::move(field));
}

inline Error rank_deficient(const std::string& msg, std::string field = {}) {
  return Error("rank-deficient", msg, std::move(field));
}

inline Error unsupported(const std::string& msg) {
  return Error("unsupported", msg);
}

inline Error precondition_failed(const std::string& msg,
                                 std::string field = {}) {
  return Error("precondition", msg, std::move(field));
}

/// Two independent routes to the same verdict disagreed beyond tolerance.
/// This is a tolerance miscalibration, never a legitimate runtime outcome,
/// so it surfaces as a hard error.
inline Error consistency_failure(const std::string& msg) {
  return Error("internal-consistency", msg);
}

}  // namespace bayeslin
