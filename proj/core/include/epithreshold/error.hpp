// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace epithreshold {

/// Failure classes. The CLI maps them onto exit codes 2, 3 and 4.
enum class ErrorKind {
  InvalidConfig,
  Numerical,
  ConditionNotMet,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid_config(const std::string& what) {
  throw Error(ErrorKind::InvalidConfig, what);
}

[[noreturn]] inline void throw_numerical(const std::string& what) {
  throw Error(ErrorKind::Numerical, what);
}

[[noreturn]] inline void throw_condition_not_met(const std::string& what) {
  throw Error(ErrorKind::ConditionNotMet, what);
}

}  // namespace epithreshold
