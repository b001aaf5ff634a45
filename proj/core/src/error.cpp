#include "olapcube/error.hpp"

namespace olapcube {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::UnknownColumn:       return "UnknownColumn";
        case ErrorCode::IndexOutOfRange:     return "IndexOutOfRange";
        case ErrorCode::EmptyInput:          return "EmptyInput";
        case ErrorCode::RaggedRow:           return "RaggedRow";
        case ErrorCode::MalformedCsv:        return "MalformedCsv";
        case ErrorCode::NotAMeasure:         return "NotAMeasure";
        case ErrorCode::ColumnInUse:         return "ColumnInUse";
        case ErrorCode::AlreadyDrilled:      return "AlreadyDrilled";
        case ErrorCode::NotDrilled:          return "NotDrilled";
        case ErrorCode::FilterExists:        return "FilterExists";
        case ErrorCode::FilterNotFound:      return "FilterNotFound";
        case ErrorCode::StateInvalid:        return "StateInvalid";
        case ErrorCode::OffsetOutOfRange:    return "OffsetOutOfRange";
        case ErrorCode::EmptyPlot:           return "EmptyPlot";
        case ErrorCode::NegativePieValue:    return "NegativePieValue";
        case ErrorCode::RenderFailure:       return "RenderFailure";
        case ErrorCode::ProtocolUnsupported: return "ProtocolUnsupported";
        case ErrorCode::InvalidArgument:     return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace olapcube
