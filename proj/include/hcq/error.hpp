// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hcq {

/// Invalid configuration, instance data, or geometry (CLI exit code 2).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unphysical noise parameters (T2 > 2*T1 and friends).
class physicality_error : public config_error {
 public:
  using config_error::config_error;
};

/// API misuse: bad arguments handed to an operation (CLI exit code 2).
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation budget too small for the optimizer to even start.
class budget_error : public usage_error {
 public:
  using usage_error::usage_error;
};

/// Broken internal invariant; indicates a bug, not bad input.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Filesystem failure while writing artifacts (CLI exit code 3).
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hcq
