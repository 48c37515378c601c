#pragma once

#include <stdexcept>
#include <string>

namespace npg {

// Base class for all library errors. Subclasses distinguish usage problems
// (bad config, bad data) from numerical failures so the CLI can map them to
// distinct exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input matrix is not positive definite; carries the index of the failing
// Cholesky pivot.
struct PositiveDefinitenessError : Error {
    int pivot_index;
    explicit PositiveDefinitenessError(int index)
        : Error("matrix is not positive definite (Cholesky pivot " +
                std::to_string(index) + " is not positive)"),
          pivot_index(index) {}
};

// A data column is constant, so ranks (and correlations) are undefined.
struct ConstantColumnError : Error {
    int column;
    ConstantColumnError(int col, const std::string& name)
        : Error("column " + (name.empty() ? std::to_string(col) : name) +
                " is constant; rank correlation is undefined"),
          column(col) {}
};

struct DomainError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// lambda = 0 requires an invertible submatrix; this signals it is singular.
struct SingularSubmatrix : Error {
    using Error::Error;
};

// The residual quadratic form in the neighborhood precision reconstruction
// was not positive (indefiniteness pathology at extreme lambda).
struct NonpositiveResidual : Error {
    int node;
    NonpositiveResidual(int k, double value)
        : Error("nonpositive residual quadratic form at node " + std::to_string(k) +
                " (value " + std::to_string(value) + ")"),
          node(k) {}
};

struct InvalidInput : Error {
    using Error::Error;
};

// An LP solve ended with a non-Optimal status where optimality was required.
struct LpFailure : Error {
    using Error::Error;
};

// The lambda grid would be degenerate (all off-diagonals zero).
struct DegenerateGrid : Error {
    using Error::Error;
};

// An adaptive estimator was requested without a pilot lambda.
struct PilotRequired : Error {
    using Error::Error;
};

// Configuration / usage errors (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

// Data errors, e.g. malformed CSV (CLI exit code 3).
struct DataError : Error {
    using Error::Error;
};

}  // namespace npg
