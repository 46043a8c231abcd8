#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynkin {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input-side errors ------------------------------------------------------

struct ValidationIssue {
    enum class Code {
        RowSumError,
        AlphaRangeError,
        LengthMismatch,
        NonFiniteEntry,
        StateSpaceError,
        ProfileRangeError,
    };
    Code code;
    std::string message;
};

std::string to_string(ValidationIssue::Code code);

struct ValidationError : Error {
    std::vector<ValidationIssue> issues;
    explicit ValidationError(std::vector<ValidationIssue> list);
};

struct ParseError : Error {
    using Error::Error;
};

struct SchemaError : Error {
    using Error::Error;
};

// Dense linear algebra sets the practical size envelope.
struct ExplicitLimitError : Error {
    using Error::Error;
};

// Solver-side errors -----------------------------------------------------

struct MedConditionViolated : Error {
    std::vector<int> witnesses;
    MedConditionViolated(std::string msg, std::vector<int> states);
};

struct PreconditionViolated : Error {
    std::vector<int> witnesses;
    PreconditionViolated(std::string msg, std::vector<int> states);
};

struct CaseGuardFailure : Error {
    using Error::Error;
};

struct NoCaseMatched : Error {
    using Error::Error;
};

struct DegenerateGame : Error {
    using Error::Error;
};

struct SingularSystem : Error {
    using Error::Error;
};

}  // namespace dynkin
