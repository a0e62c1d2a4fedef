#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssakit {

enum class ErrorCode {
    kInvalidArgument,
    kWindowOutOfRange,
    kNotHankel,
    kIndexOutOfRange,
    kEmptyGrouping,
    kNumericalFailure,
    kDegenerateSeries,
    kNoSignChange,
    kNoCrossing,
    kTooShort,
    kLengthMismatch,
    kVerticalSubspace,
    kInsufficientData,
    kSpanDegenerate,
    kAllFailed,
    kParseError,
    kGapError,
    kEmptyInput,
    kIoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. Carries the originating module so
/// that the command-line front end can name it in diagnostics.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string_view module, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorCode code_;
    std::string module_;
};

}  // namespace ssakit
