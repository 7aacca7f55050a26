#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cegmine {

enum class Severity { error, warning };

struct ValidationIssue {
  Severity severity = Severity::error;
  std::string code;  // stable machine-readable tag, e.g. "cpt.cycle"
  std::string message;
};

// Collected outcome of a validation pass. Validators never throw; callers
// decide whether errors are fatal via throw_if_errors().
struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return error_count() == 0; }
  std::size_t error_count() const;
  std::size_t warning_count() const;

  void add_error(std::string code, std::string message);
  void add_warning(std::string code, std::string message);
  void merge(const ValidationReport& other);

  bool has(const std::string& code) const;

  // One issue per line, prefixed with "error:"/"warning:".
  std::string to_string() const;

  // Throws ValidationError with all error messages joined.
  void throw_if_errors() const;
};

}  // namespace cegmine
