#ifndef RTO_ERRORS_HPP
#define RTO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rto {

// Bad arguments or violated preconditions (caller error).
struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

// A solver or iteration failed to produce a usable result.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// The discretized structure itself is ill-posed (e.g. unconstrained rigid modes).
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rto

#endif
