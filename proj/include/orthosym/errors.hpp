#pragma once

#include <stdexcept>
#include <string>

namespace orthosym {

/// Failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
    NotEven,
    NotPositiveDefinite,
    NotSymmetric,
    OutsideDomain,
    OutsideCone,
    BudgetExceeded,
    TruncationUnderflow,
    IrrationalPhase,
    UnsupportedWeight,
    IndexNotOne,
    EmptyRange,
    InsufficientTruncation,
    BothZeroOnRange,
    MissingCoefficients,
    CaseMismatch,
    Divergent,
    BadC,
    OnDivisor,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace orthosym
