#include "altlin/report.hpp"

#include <algorithm>
#include <cmath>

namespace altlin {

Check& Report::add(std::string name, double residual, double tolerance, std::string note) {
  const bool ok = std::isfinite(residual) && residual <= tolerance;
  checks.push_back({std::move(name), residual, tolerance, ok, std::move(note)});
  return checks.back();
}

Check& Report::flag(std::string name, bool ok, std::string note) {
  checks.push_back({std::move(name), ok ? 0.0 : 1.0, 0.0, ok, std::move(note)});
  return checks.back();
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (auto c : other.checks) {
    c.name = prefix + c.name;
    checks.push_back(std::move(c));
  }
  for (const auto& [k, v] : other.info) info[prefix + k] = v;
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double Report::max_residual() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.residual);
  return m;
}

}  // namespace altlin
