#include "ssakit/error.hpp"

namespace ssakit {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidArgument: return "InvalidArgument";
        case ErrorCode::kWindowOutOfRange: return "WindowOutOfRange";
        case ErrorCode::kNotHankel: return "NotHankel";
        case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::kEmptyGrouping: return "EmptyGrouping";
        case ErrorCode::kNumericalFailure: return "NumericalFailure";
        case ErrorCode::kDegenerateSeries: return "DegenerateSeries";
        case ErrorCode::kNoSignChange: return "NoSignChange";
        case ErrorCode::kNoCrossing: return "NoCrossing";
        case ErrorCode::kTooShort: return "TooShort";
        case ErrorCode::kLengthMismatch: return "LengthMismatch";
        case ErrorCode::kVerticalSubspace: return "VerticalSubspace";
        case ErrorCode::kInsufficientData: return "InsufficientData";
        case ErrorCode::kSpanDegenerate: return "SpanDegenerate";
        case ErrorCode::kAllFailed: return "AllFailed";
        case ErrorCode::kParseError: return "ParseError";
        case ErrorCode::kGapError: return "GapError";
        case ErrorCode::kEmptyInput: return "EmptyInput";
        case ErrorCode::kIoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string_view module, const std::string& message)
    : std::runtime_error(std::string(module) + ": " + std::string(to_string(code)) + ": " +
                         message),
      code_(code),
      module_(module) {}

}  // namespace ssakit
