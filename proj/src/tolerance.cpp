#include "bayeslin/tolerance.hpp"

#include "bayeslin/error.hpp"

namespace bayeslin {

void ToleranceConfig::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !(v <= 1e-3)) {
      throw invalid_input("tolerance must lie in (0, 1e-3]", name);
    }
  };
  check(rank_rel_tol, "rank_rel_tol");
  check(equality_rel_tol, "equality_rel_tol");
  check(psd_eig_tol, "psd_eig_tol");
}

}  // namespace bayeslin
