// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hexwave {

// Base for all library errors. The CLI maps the concrete type to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter violates an operation precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A computed quantity failed a mathematical invariant (symmetry, degeneracy,
// conservation). Usually means the input medium is not what the caller thinks.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// A job would exceed the configured resource budget.
class ResourceRefusal : public Error {
 public:
  using Error::Error;
};

}  // namespace hexwave
