#pragma once

#include <stdexcept>
#include <string>

namespace spectra {

enum class ErrorCode {
    UnsupportedGenerators,
    ZeroFrequency,
    CapExceeded,
    NonSimplexComponent,
    ConditionAViolation,
    NonMultiplicationInput,
    NonLatticeFrequencies,
    TruncationCeiling,
    CoincidingPoints,
    ContourTooClose,
    DivergentSeries,
    Malformed,
    NonHermitianPotential,
    UnsupportedDimension,
    InvalidArgument,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace spectra
