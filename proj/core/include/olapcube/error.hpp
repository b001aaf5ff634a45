#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace olapcube {

/// Every failure the engine reports. The enumerator spelling is the
/// public error name used by the CLI and the HTTP API.
enum class ErrorCode {
    UnknownColumn,
    IndexOutOfRange,
    EmptyInput,
    RaggedRow,
    MalformedCsv,
    NotAMeasure,
    ColumnInUse,
    AlreadyDrilled,
    NotDrilled,
    FilterExists,
    FilterNotFound,
    StateInvalid,
    OffsetOutOfRange,
    EmptyPlot,
    NegativePieValue,
    RenderFailure,
    ProtocolUnsupported,
    InvalidArgument,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

}  // namespace olapcube
