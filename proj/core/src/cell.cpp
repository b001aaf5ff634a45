#include "olapcube/cell.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace olapcube {

std::string_view to_string(ValueType type) noexcept {
    switch (type) {
        case ValueType::Integer64: return "integer64";
        case ValueType::Float64:   return "float64";
        case ValueType::Text:      return "text";
    }
    return "unknown";
}

std::string_view to_string(ColumnKind kind) noexcept {
    return kind == ColumnKind::Measure ? "measure" : "dimension";
}

CellValue CellValue::floating(double v) {
    if (!std::isfinite(v)) {
        return {};
    }
    return CellValue(Storage(std::in_place_index<2>, v));
}

double CellValue::numeric_or_zero() const noexcept {
    switch (value_.index()) {
        case 1: return static_cast<double>(std::get<1>(value_));
        case 2: return std::get<2>(value_);
        default: return 0.0;
    }
}

std::string CellValue::canonical_text() const {
    switch (value_.index()) {
        case 1: return std::to_string(std::get<1>(value_));
        case 2: return format_float(std::get<2>(value_));
        case 3: return std::get<3>(value_);
        default: return {};
    }
}

bool operator==(const CellValue& a, const CellValue& b) noexcept {
    if (a.is_integer() && b.is_float()) {
        return b == a;
    }
    if (a.is_float() && b.is_integer()) {
        double d = a.as_float();
        // Range check keeps the conversion below well defined.
        if (std::trunc(d) != d || d < -9.2233720368547758e18 || d >= 9.2233720368547758e18) {
            return false;
        }
        return static_cast<std::int64_t>(d) == b.as_integer();
    }
    return a.value_ == b.value_;
}

std::string format_float(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string out(buf.data(), end);
    if (out.find_first_of(".e") == std::string::npos) {
        out += ".0";
    }
    return out;
}

bool parse_int64(std::string_view text, std::int64_t& out) noexcept {
    if (text.empty()) {
        return false;
    }
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') {
        ++first;
        if (first == last || *first == '-') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_float64(std::string_view text, double& out) noexcept {
    if (text.empty()) {
        return false;
    }
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') {
        ++first;
        if (first == last || *first == '-') {
            return false;
        }
    }
    // from_chars accepts "inf"/"nan"; only plain decimal notation counts here.
    for (const char* p = first; p != last; ++p) {
        char c = *p;
        bool ok = (c >= '0' && c <= '9') || c == '.' || c == '-' || c == 'e' || c == 'E' || c == '+';
        if (!ok) {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace olapcube
