#include "mlrm/error.hpp"

namespace mlrm {

const char* err_name(Err code) {
    switch (code) {
        case Err::InvalidMetric: return "InvalidMetric";
        case Err::DirectionMismatch: return "DirectionMismatch";
        case Err::DivisionByZero: return "DivisionByZero";
        case Err::EmptyInput: return "EmptyInput";
        case Err::InvalidBins: return "InvalidBins";
        case Err::ShapeMismatch: return "ShapeMismatch";
        case Err::DegenerateLabels: return "DegenerateLabels";
        case Err::TooFewSamples: return "TooFewSamples";
        case Err::InvalidSize: return "InvalidSize";
        case Err::InvalidK: return "InvalidK";
        case Err::CannotInterpolate: return "CannotInterpolate";
        case Err::UndefinedCorrelation: return "UndefinedCorrelation";
        case Err::NotRegistered: return "NotRegistered";
        case Err::NoOverlap: return "NoOverlap";
        case Err::InvalidKernel: return "InvalidKernel";
        case Err::ClipTooShort: return "ClipTooShort";
        case Err::TrainingFailed: return "TrainingFailed";
        case Err::DivergenceDetected: return "DivergenceDetected";
        case Err::NotFound: return "NotFound";
        case Err::IncomparableSubmodules: return "IncomparableSubmodules";
        case Err::InvalidConfig: return "InvalidConfig";
        case Err::ManifestError: return "ManifestError";
        case Err::FormatError: return "FormatError";
        case Err::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace mlrm
