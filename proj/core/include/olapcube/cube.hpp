#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "olapcube/cell.hpp"

namespace olapcube {

struct ColumnMeta {
    std::string name;
    std::size_t index = 0;
    ColumnKind kind = ColumnKind::Dimension;
    ValueType value_type = ValueType::Text;

    friend bool operator==(const ColumnMeta&, const ColumnMeta&) = default;
};

using Schema = std::vector<ColumnMeta>;

/// Typed, column-oriented cell storage. Text columns are dictionary encoded
/// with codes assigned in first-occurrence order; equal strings share a code.
class Column {
public:
    static constexpr std::uint32_t kNullCode = 0xffffffffu;

    explicit Column(ValueType type = ValueType::Text) : type_(type) {}

    ValueType type() const noexcept { return type_; }
    std::size_t size() const noexcept { return valid_.size(); }
    std::size_t null_count() const noexcept { return null_count_; }

    bool is_null(std::size_t row) const { return valid_[row] == 0; }
    CellValue cell(std::size_t row) const;

    std::span<const std::uint8_t> validity() const noexcept { return valid_; }
    std::span<const std::int64_t> integers() const noexcept { return ints_; }
    std::span<const double> floats() const noexcept { return floats_; }
    std::span<const std::uint32_t> codes() const noexcept { return codes_; }
    const std::vector<std::string>& dictionary() const noexcept { return dictionary_; }

    void append_null();
    void append_integer(std::int64_t v);
    void append_float(double v);
    void append_text(std::string_view v);
    /// Appends `v`, which must be Null or match type().
    void append(const CellValue& v);
    void reserve(std::size_t n);

private:
    ValueType type_;
    std::size_t null_count_ = 0;
    std::vector<std::uint8_t> valid_;
    std::vector<std::int64_t> ints_;
    std::vector<double> floats_;
    std::vector<std::uint32_t> codes_;
    std::vector<std::string> dictionary_;
    std::unordered_map<std::string, std::uint32_t> lookup_;
    std::uint32_t intern(std::string_view v);
};

/// The immutable dataset every query reads. Row order is source file order.
class Cube {
public:
    Cube(std::string source_name, Schema schema, std::vector<Column> columns);

    const std::string& source_name() const noexcept { return source_name_; }
    const Schema& schema() const noexcept { return *schema_; }
    std::shared_ptr<const Schema> shared_schema() const noexcept { return schema_; }
    std::size_t row_count() const noexcept { return row_count_; }
    std::size_t column_count() const noexcept { return columns_.size(); }

    /// Throws Error(UnknownColumn).
    const ColumnMeta& column_by_name(std::string_view name) const;
    std::optional<std::size_t> find_column(std::string_view name) const noexcept;

    const Column& column(std::size_t index) const { return columns_.at(index); }
    CellValue cell(std::size_t column, std::size_t row) const { return columns_.at(column).cell(row); }

    /// Throws Error(IndexOutOfRange).
    std::vector<CellValue> row(std::size_t index) const;

private:
    std::string source_name_;
    std::shared_ptr<const Schema> schema_;
    std::vector<Column> columns_;
    std::size_t row_count_ = 0;
};

}  // namespace olapcube
