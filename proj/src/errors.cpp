#include "spectra/errors.hpp"

namespace spectra {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnsupportedGenerators: return "UnsupportedGenerators";
        case ErrorCode::ZeroFrequency: return "ZeroFrequency";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::NonSimplexComponent: return "NonSimplexComponent";
        case ErrorCode::ConditionAViolation: return "ConditionAViolation";
        case ErrorCode::NonMultiplicationInput: return "NonMultiplicationInput";
        case ErrorCode::NonLatticeFrequencies: return "NonLatticeFrequencies";
        case ErrorCode::TruncationCeiling: return "TruncationCeiling";
        case ErrorCode::CoincidingPoints: return "CoincidingPoints";
        case ErrorCode::ContourTooClose: return "ContourTooClose";
        case ErrorCode::DivergentSeries: return "DivergentSeries";
        case ErrorCode::Malformed: return "Malformed";
        case ErrorCode::NonHermitianPotential: return "NonHermitianPotential";
        case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace spectra
