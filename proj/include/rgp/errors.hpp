#pragma once

#include <stdexcept>
#include <string>

namespace rgp {

// Error taxonomy shared by the library and the CLI. The CLI maps each type to
// a stable exit code (see tools/rgprop.cpp).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyDatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Precondition violations (shape mismatches, empty inputs, ...).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractError(what);
}

}  // namespace rgp
