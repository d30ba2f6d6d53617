#pragma once

#include <map>
#include <string>
#include <vector>

namespace altlin {

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;  // optional, e.g. why a check was skipped
};

/// Named residual checks plus free-form metadata.
struct Report {
  std::vector<Check> checks;
  std::map<std::string, std::string> info;

  /// Passes when residual <= tolerance (NaN fails).
  Check& add(std::string name, double residual, double tolerance, std::string note = {});
  /// Boolean check; residual is 0 on pass and 1 on failure.
  Check& flag(std::string name, bool ok, std::string note = {});
  void merge(const Report& other, const std::string& prefix = {});

  bool pass() const;
  const Check* find(const std::string& name) const;
  double max_residual() const;
};

}  // namespace altlin
