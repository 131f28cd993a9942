#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pfreq {

// Violated precondition on an input (bad size, bad q, non-positive field...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed domain file, shape literal or command-line value.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative method hit its cap. Carries the last residual and, when the
// caller asked for it, the sequence of iterates' diagnostics.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual, std::vector<std::string> trace = {})
        : std::runtime_error(what), residual_(residual), trace_(std::move(trace)) {}

    double residual() const noexcept { return residual_; }
    const std::vector<std::string>& trace() const noexcept { return trace_; }

private:
    double residual_;
    std::vector<std::string> trace_;
};

}  // namespace pfreq
