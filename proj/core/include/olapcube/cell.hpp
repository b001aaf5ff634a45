#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace olapcube {

enum class ValueType : std::uint8_t { Integer64, Float64, Text };
enum class ColumnKind : std::uint8_t { Dimension, Measure };

std::string_view to_string(ValueType type) noexcept;
std::string_view to_string(ColumnKind kind) noexcept;

inline bool is_numeric(ValueType type) noexcept { return type != ValueType::Text; }

/// A single typed cell. Float payloads are always finite; parsing code maps
/// NaN and infinities to Null.
class CellValue {
public:
    CellValue() = default;

    static CellValue null() { return {}; }
    static CellValue integer(std::int64_t v) { return CellValue(Storage(std::in_place_index<1>, v)); }
    static CellValue floating(double v);
    static CellValue text(std::string v) { return CellValue(Storage(std::in_place_index<3>, std::move(v))); }

    bool is_null() const noexcept { return value_.index() == 0; }
    bool is_integer() const noexcept { return value_.index() == 1; }
    bool is_float() const noexcept { return value_.index() == 2; }
    bool is_text() const noexcept { return value_.index() == 3; }
    bool is_numeric() const noexcept { return is_integer() || is_float(); }

    std::int64_t as_integer() const { return std::get<1>(value_); }
    double as_float() const { return std::get<2>(value_); }
    const std::string& as_text() const { return std::get<3>(value_); }

    /// Numeric payload widened to double; 0.0 for Null and Text.
    double numeric_or_zero() const noexcept;

    /// Text used for filter matching and the wire formats: integers in
    /// decimal, floats as the shortest round-trip form with at least one
    /// fractional digit ("2.5", "2009.0"), Null as the empty string.
    std::string canonical_text() const;

    friend bool operator==(const CellValue& a, const CellValue& b) noexcept;

private:
    using Storage = std::variant<std::monostate, std::int64_t, double, std::string>;
    explicit CellValue(Storage s) : value_(std::move(s)) {}

    Storage value_;
};

/// Shortest round-trip decimal rendering of a finite double, with ".0"
/// appended when the result would otherwise read as an integer.
std::string format_float(double v);

/// Strict parsers used by ingest and by filter matching. Both reject
/// surrounding whitespace, trailing garbage and (for floats) non-finite values.
bool parse_int64(std::string_view text, std::int64_t& out) noexcept;
bool parse_float64(std::string_view text, double& out) noexcept;

}  // namespace olapcube
