/**
 * @file verify.hpp
 * @brief Self-contained verification suites: velocity-map identities, the
 * radial change-of-variables identity, the self-similar wave identity with a
 * negative control, manufactured elliptic convergence, the end-to-end wave
 * limit check and the pusher order study.
 */
#pragma once

#include <string>
#include <vector>

namespace rvm {

enum class Suite { fast, full };

Suite suite_from_string(const std::string& s);

struct VerifyOptions {
  Suite suite = Suite::fast;
  double budget_minutes = 10.0;
  bool corrupt_L = false;  ///< test hook: drop the zeroth-order term of L in the self-similar study
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool over_budget = false;
  std::string warning;

  bool pass() const;
  std::string text() const;
};

/// Individual checks, exposed so tests and the acceptance driver can call them.
CheckResult check_kinematics_identities(int samples = 1000, unsigned seed = 7);
CheckResult check_gs_sweep(int draws = 10, unsigned seed = 11);
CheckResult check_self_similar(bool corrupt_L = false, int points = 50, unsigned seed = 13);
CheckResult check_elliptic_convergence(const std::vector<int>& cells, double gamma = 0.75);
CheckResult check_lwave(bool full);
CheckResult check_pusher_order();

VerifyReport run_verify(const VerifyOptions& opt);

}  // namespace rvm
