#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mmaddress {

// Working floating-point type for the whole numeric chain. 80-bit extended
// precision on x86-64: the compensation systems reach condition numbers ~1e6
// at 51 ions and the residual targets sit below the double-precision
// representation floor of the solution vector itself.
using Real = long double;

using Vec = std::vector<Real>;

/// Invalid user input: config text, target/sweep specs, out-of-range arguments.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime numerical failure: singular systems, rank deficiency, non-convergence.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mmaddress
