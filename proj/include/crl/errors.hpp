#pragma once

#include <stdexcept>
#include <string>

namespace crl {

/// Raised when a simulated state or a numerical quantity leaves the finite
/// range (NaN or infinity). Signals integrator or training instability.
struct NonFiniteError : std::runtime_error {
    explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an iterative solver hits its iteration cap or the problem
/// violates its solvability assumptions.
struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a synthesized feedback loop fails its stability check.
struct UnstableClosedLoopError : std::runtime_error {
    explicit UnstableClosedLoopError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crl
