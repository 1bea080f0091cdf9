#pragma once

#include <stdexcept>
#include <string>

namespace mlrm {

enum class Err {
    InvalidMetric,
    DirectionMismatch,
    DivisionByZero,
    EmptyInput,
    InvalidBins,
    ShapeMismatch,
    DegenerateLabels,
    TooFewSamples,
    InvalidSize,
    InvalidK,
    CannotInterpolate,
    UndefinedCorrelation,
    NotRegistered,
    NoOverlap,
    InvalidKernel,
    ClipTooShort,
    TrainingFailed,
    DivergenceDetected,
    NotFound,
    IncomparableSubmodules,
    InvalidConfig,
    ManifestError,
    FormatError,
    IoError,
};

const char* err_name(Err code);

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& msg)
        : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}

    Err code() const noexcept { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) {
    throw Error(code, msg);
}

}  // namespace mlrm
