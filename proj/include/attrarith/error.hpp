#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace attrarith {

enum class ErrorKind {
    InvalidArgument,
    NotPositiveDefinite,
    InvalidDiscriminant,
    NotAttractor,
    DegenerateCharge,
    UnsupportedWeight,
    NotUpperHalfPlane,
    PrecisionExhausted,
    RoundingFailed,
    AmbiguousCase,
    ZeroTwist,
    InvalidWeights,
    NotUnit,
    InvalidIndex,
    DegreeTooSmall,
    NotCoprime,
    OutOfRange,
    InvalidStep,
    UnsupportedRange,
    StepUnderflow,
    NonConvergence,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Failures that more precision, a longer run or a different start could cure,
// as opposed to malformed input.
constexpr bool is_computation_failure(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::PrecisionExhausted:
    case ErrorKind::RoundingFailed:
    case ErrorKind::AmbiguousCase:
    case ErrorKind::StepUnderflow:
    case ErrorKind::NonConvergence:
        return true;
    default:
        return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace attrarith
