#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ordident {

// Thrown when an iterative numerical routine stops before reaching its
// target accuracy. `achieved` is the best error estimate at the point of
// failure so callers can report partial results.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

// Thrown by the fixed-point solver on divergence. Carries the per-sweep
// sup-distance trace accumulated up to the point of failure.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}

    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

}  // namespace ordident
