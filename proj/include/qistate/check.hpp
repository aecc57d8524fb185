#pragma once

#include <string>
#include <vector>

namespace qistate {

/// One verified identity: the measured residual against its threshold.
///
/// `asserted == false` marks diagnostics that are measured and reported but
/// never make a suite fail (e.g. quantities with no proven bound).
struct CheckResult {
  std::string name;
  std::string anchor;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = true;
  bool asserted = true;
};

using CheckList = std::vector<CheckResult>;

/// Residual-below-threshold check (strict inequality, NaN fails).
inline CheckResult make_check(std::string name, std::string anchor, double residual, double threshold,
                              bool asserted = true) {
  return {std::move(name), std::move(anchor), residual, threshold, residual < threshold, asserted};
}

/// Diagnostic entry that is reported but never fails.
inline CheckResult make_diagnostic(std::string name, std::string anchor, double value) {
  return {std::move(name), std::move(anchor), value, 0.0, true, false};
}

inline bool all_pass(const CheckList& checks) {
  for (const auto& c : checks)
    if (c.asserted && !c.pass) return false;
  return true;
}

inline void append(CheckList& into, const CheckList& more) { into.insert(into.end(), more.begin(), more.end()); }

}  // namespace qistate
