#ifndef DSQ_ERRORS_HPP
#define DSQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dsq {

// Invalid or inconsistent user input (config files, CLI values, bad quantum
// numbers).  Maps to process exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-converged quadrature, degenerate fits, truncation
// leakage above bound.  Maps to process exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dsq

#endif
