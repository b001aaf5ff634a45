#include "olapcube/cube.hpp"

#include "olapcube/error.hpp"

namespace olapcube {

CellValue Column::cell(std::size_t row) const {
    if (valid_.at(row) == 0) {
        return CellValue::null();
    }
    switch (type_) {
        case ValueType::Integer64: return CellValue::integer(ints_[row]);
        case ValueType::Float64:   return CellValue::floating(floats_[row]);
        case ValueType::Text:      return CellValue::text(dictionary_[codes_[row]]);
    }
    return CellValue::null();
}

void Column::reserve(std::size_t n) {
    valid_.reserve(n);
    switch (type_) {
        case ValueType::Integer64: ints_.reserve(n); break;
        case ValueType::Float64:   floats_.reserve(n); break;
        case ValueType::Text:      codes_.reserve(n); break;
    }
}

void Column::append_null() {
    valid_.push_back(0);
    ++null_count_;
    switch (type_) {
        case ValueType::Integer64: ints_.push_back(0); break;
        case ValueType::Float64:   floats_.push_back(0.0); break;
        case ValueType::Text:      codes_.push_back(kNullCode); break;
    }
}

void Column::append_integer(std::int64_t v) {
    if (type_ != ValueType::Integer64) {
        throw Error(ErrorCode::InvalidArgument, "integer cell appended to a " + std::string(to_string(type_)) + " column");
    }
    valid_.push_back(1);
    ints_.push_back(v);
}

void Column::append_float(double v) {
    if (type_ != ValueType::Float64) {
        throw Error(ErrorCode::InvalidArgument, "float cell appended to a " + std::string(to_string(type_)) + " column");
    }
    CellValue checked = CellValue::floating(v);
    if (checked.is_null()) {
        append_null();
        return;
    }
    valid_.push_back(1);
    floats_.push_back(v);
}

void Column::append_text(std::string_view v) {
    if (type_ != ValueType::Text) {
        throw Error(ErrorCode::InvalidArgument, "text cell appended to a " + std::string(to_string(type_)) + " column");
    }
    valid_.push_back(1);
    codes_.push_back(intern(v));
}

void Column::append(const CellValue& v) {
    if (v.is_null()) {
        append_null();
    } else if (v.is_integer()) {
        append_integer(v.as_integer());
    } else if (v.is_float()) {
        append_float(v.as_float());
    } else {
        append_text(v.as_text());
    }
}

std::uint32_t Column::intern(std::string_view v) {
    auto [it, inserted] = lookup_.try_emplace(std::string(v), static_cast<std::uint32_t>(dictionary_.size()));
    if (inserted) {
        dictionary_.emplace_back(v);
    }
    return it->second;
}

Cube::Cube(std::string source_name, Schema schema, std::vector<Column> columns)
    : source_name_(std::move(source_name)), columns_(std::move(columns)) {
    if (schema.size() != columns_.size()) {
        throw Error(ErrorCode::InvalidArgument, "schema and column counts differ");
    }
    row_count_ = columns_.empty() ? 0 : columns_.front().size();
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].size() != row_count_) {
            throw Error(ErrorCode::InvalidArgument, "column '" + schema[i].name + "' has a different length");
        }
        if (columns_[i].type() != schema[i].value_type) {
            throw Error(ErrorCode::InvalidArgument, "column '" + schema[i].name + "' does not match its schema type");
        }
        if (schema[i].kind == ColumnKind::Measure && !is_numeric(schema[i].value_type)) {
            throw Error(ErrorCode::InvalidArgument, "measure column '" + schema[i].name + "' must be numeric");
        }
        schema[i].index = i;
        for (std::size_t j = 0; j < i; ++j) {
            if (schema[j].name == schema[i].name) {
                throw Error(ErrorCode::InvalidArgument, "duplicate column name '" + schema[i].name + "'");
            }
        }
    }
    schema_ = std::make_shared<const Schema>(std::move(schema));
}

std::optional<std::size_t> Cube::find_column(std::string_view name) const noexcept {
    for (const auto& meta : *schema_) {
        if (meta.name == name) {
            return meta.index;
        }
    }
    return std::nullopt;
}

const ColumnMeta& Cube::column_by_name(std::string_view name) const {
    if (auto idx = find_column(name)) {
        return (*schema_)[*idx];
    }
    throw Error(ErrorCode::UnknownColumn, "no column named '" + std::string(name) + "'");
}

std::vector<CellValue> Cube::row(std::size_t index) const {
    if (index >= row_count_) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "row " + std::to_string(index) + " of " + std::to_string(row_count_));
    }
    std::vector<CellValue> cells;
    cells.reserve(columns_.size());
    for (const auto& col : columns_) {
        cells.push_back(col.cell(index));
    }
    return cells;
}

}  // namespace olapcube
