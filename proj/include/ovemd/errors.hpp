#pragma once

#include <stdexcept>
#include <string>

namespace ovemd {

// Bad instance shape (mismatched dims, empty sides, out-of-range entries).
struct shape_error : std::invalid_argument {
  explicit shape_error(const std::string& what) : std::invalid_argument(what) {}
};

// Bad user-supplied parameter (exponents out of range, unknown names).
struct param_error : std::invalid_argument {
  explicit param_error(const std::string& what) : std::invalid_argument(what) {}
};

// Input exceeds a documented arithmetic or size capacity.
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Data fails an identity it should satisfy (inconsistent matching value, bad sidecar).
struct inconsistency_error : std::runtime_error {
  explicit inconsistency_error(const std::string& what) : std::runtime_error(what) {}
};

// A condition the construction guarantees was violated; indicates a bug, not bad input.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const char* what) {
  if (!cond) throw internal_error(what);
}

}  // namespace ovemd
