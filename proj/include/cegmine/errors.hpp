#pragma once

#include <stdexcept>

namespace cegmine {

// Error classes map onto CLI exit codes: config=2, validation=3, data=4.

// Malformed or inconsistent configuration (bad JSON, unknown names,
// out-of-range options).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input that parses but breaks a semantic rule (cyclic template,
// catalog violations).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken data files: missing columns, unparseable timestamps,
// duplicate primary keys, dangling references.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cegmine
