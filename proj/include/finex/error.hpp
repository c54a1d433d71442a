#pragma once

#include <stdexcept>
#include <string>

namespace finex {

enum class Errc {
    InvalidParameter,
    InsufficientPoints,
    InvalidConfig,
    InfeasibleClassing,
    MissingLookup,
    SetDifference,
    MissingBaseline,
    MissingValue,
    SchemaViolation,
    IoFailure,
};

/// Library-wide exception; `code()` identifies the contract that was violated.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace finex
