#pragma once

#include <stdexcept>
#include <string>

namespace geophase {

enum class ErrorKind {
  domain,           // argument outside the operation's domain
  undefined,        // quantity not defined for the input (zero norm, zero overlap)
  numeric,          // quadrature or iteration failed its residual check
  singular_surface, // antipodal geodesic endpoints while building a surface
  non_unwrappable,  // phase curve could not be unwrapped
  no_transition,    // no Chern flip found in (0, 1)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace geophase
