#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace oim {

/// Vertices are numbered 0..n-1.
using VertexId = std::int64_t;

/// Bad caller input: out-of-range ids, invalid parameters, malformed models.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver or iteration failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an algorithm was violated by its caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An O(n^2) or exhaustive operation was requested above its size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ceiling that ignores floating noise just above an integer (ln(e^2) etc.).
inline std::int64_t ceil_tol(double x) {
  return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

}  // namespace oim
