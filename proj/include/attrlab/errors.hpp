#pragma once

#include <stdexcept>
#include <string>

namespace attrlab {

// incompatible Galerkin bases (different kind, truncation or domain length)
struct BasisMismatchError : std::runtime_error {
    explicit BasisMismatchError(const std::string& what)
        : std::runtime_error("basis mismatch: " + what) {}
};

// trajectories on different time grids, or interval not covered
struct GridMismatchError : std::runtime_error {
    explicit GridMismatchError(const std::string& what)
        : std::runtime_error("time-grid mismatch: " + what) {}
};

// integration blow-up, rejected step size, nonlinearity evaluation failure
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what)
        : std::runtime_error("solver: " + what) {}
};

// bad manifest / flags / parameters
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what)
        : std::runtime_error("validation: " + what) {}
};

}  // namespace attrlab
