#include "cegmine/validation.hpp"

#include "cegmine/errors.hpp"

namespace cegmine {

std::size_t ValidationReport::error_count() const {
  std::size_t n = 0;
  for (const auto& issue : issues)
    if (issue.severity == Severity::error) ++n;
  return n;
}

std::size_t ValidationReport::warning_count() const {
  return issues.size() - error_count();
}

void ValidationReport::add_error(std::string code, std::string message) {
  issues.push_back({Severity::error, std::move(code), std::move(message)});
}

void ValidationReport::add_warning(std::string code, std::string message) {
  issues.push_back({Severity::warning, std::move(code), std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other) {
  issues.insert(issues.end(), other.issues.begin(), other.issues.end());
}

bool ValidationReport::has(const std::string& code) const {
  for (const auto& issue : issues)
    if (issue.code == code) return true;
  return false;
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& issue : issues) {
    out += issue.severity == Severity::error ? "error: " : "warning: ";
    out += "[" + issue.code + "] " + issue.message + "\n";
  }
  return out;
}

void ValidationReport::throw_if_errors() const {
  if (ok()) return;
  std::string msg;
  for (const auto& issue : issues) {
    if (issue.severity != Severity::error) continue;
    if (!msg.empty()) msg += "; ";
    msg += issue.message;
  }
  throw ValidationError(msg);
}

}  // namespace cegmine
