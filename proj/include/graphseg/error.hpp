#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace graphseg {

/// Bad input: a violated precondition, malformed file, or inconsistent
/// configuration. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed file contents. `line` is 1-based, 0 when not line oriented.
class FormatError : public ValidationError {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : ValidationError(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An iterative method ran out of budget. Carries the best residuals seen.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals = {})
        : std::runtime_error(what), residuals_(std::move(residuals)) {}
    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// A NaN or infinity appeared in solver state.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace graphseg
