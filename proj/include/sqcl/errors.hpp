#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqcl {

/// Bad input values (negative/non-finite parameters, malformed grids, empty lattices).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical oracle could not produce a trustworthy answer.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Probability mass reached the edge of the Fock box, or the initial state
/// does not fit in it.
class TruncationError : public OracleError {
public:
    TruncationError(const std::string& what, double leakage, std::size_t suggested_na,
                    std::size_t suggested_nb)
        : OracleError(what),
          leakage_(leakage),
          suggested_na_(suggested_na),
          suggested_nb_(suggested_nb) {}

    double leakage() const noexcept { return leakage_; }
    std::size_t suggested_na() const noexcept { return suggested_na_; }
    std::size_t suggested_nb() const noexcept { return suggested_nb_; }

private:
    double leakage_;
    std::size_t suggested_na_;
    std::size_t suggested_nb_;
};

/// The Taylor action of the propagator failed to converge or drifted off unitarity.
class ConvergenceError : public OracleError {
public:
    using OracleError::OracleError;
};

/// autogrow hit the configured per-mode cap.
class CapExceededError : public OracleError {
public:
    using OracleError::OracleError;
};

class MemoryBudgetError : public OracleError {
public:
    using OracleError::OracleError;
};

}  // namespace sqcl
