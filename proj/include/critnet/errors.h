#ifndef CRITNET_ERRORS_H
#define CRITNET_ERRORS_H

#include <stdexcept>
#include <string>

namespace critnet {

// Malformed input files. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Inputs that parse but violate a model invariant (disconnected graph,
// non-positive capacity, bad generator parameters, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An optimization problem has no feasible solution, e.g. a demand whose
// endpoints are disconnected or a critical set that cannot be protected.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The LP solver failed for numerical reasons or hit its iteration limit.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace critnet

#endif  // CRITNET_ERRORS_H
