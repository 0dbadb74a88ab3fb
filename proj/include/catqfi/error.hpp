#pragma once

#include <stdexcept>
#include <string>

namespace catqfi {

enum class ErrorKind {
  parameter,   // argument outside its admissible range
  truncation,  // Fock cutoff cannot hold the requested state
  shape,       // incompatible modes / bases / non-Hermitian input
  numerical,   // solver failure or unstable derivative
  domain,      // request outside the domain of an inversion or approximation
  degenerate,  // cat state undefined (alpha = 0 with k != 0)
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::shape: return "shape";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate: return "degenerate";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace catqfi
