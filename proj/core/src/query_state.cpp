#include "olapcube/query_state.hpp"

#include <algorithm>

#include "olapcube/error.hpp"

namespace olapcube {
namespace {

const ColumnMeta* find_meta(const Schema& schema, std::string_view name) {
    for (const auto& meta : schema) {
        if (meta.name == name) return &meta;
    }
    return nullptr;
}

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

}  // namespace

QueryState QueryState::create(const Cube& cube, std::string_view measure) {
    QueryState state;
    state.schema_ = cube.shared_schema();
    const ColumnMeta& meta = state.lookup(measure);
    if (meta.kind != ColumnKind::Measure) {
        throw Error(ErrorCode::NotAMeasure, quoted(measure) + " is a dimension");
    }
    state.measure_ = meta.name;
    return state;
}

const ColumnMeta& QueryState::lookup(std::string_view name) const {
    if (const ColumnMeta* meta = find_meta(*schema_, name)) {
        return *meta;
    }
    throw Error(ErrorCode::UnknownColumn, "no column named " + quoted(name));
}

bool QueryState::is_drilled(std::string_view column) const noexcept {
    return std::find(drilldowns_.begin(), drilldowns_.end(), column) != drilldowns_.end();
}

QueryState QueryState::with_measure(std::string_view measure) const {
    const ColumnMeta& meta = lookup(measure);
    if (meta.kind != ColumnKind::Measure) {
        throw Error(ErrorCode::NotAMeasure, quoted(measure) + " is a dimension");
    }
    if (is_drilled(measure)) {
        throw Error(ErrorCode::ColumnInUse, quoted(measure) + " is drilled down");
    }
    QueryState next = *this;
    next.measure_ = meta.name;
    return next;
}

QueryState QueryState::with_drilldown(std::string_view column) const {
    lookup(column);
    if (column == measure_) {
        throw Error(ErrorCode::ColumnInUse, quoted(column) + " is the measure");
    }
    if (is_drilled(column)) {
        throw Error(ErrorCode::AlreadyDrilled, quoted(column));
    }
    QueryState next = *this;
    next.drilldowns_.emplace_back(column);
    return next;
}

QueryState QueryState::without_drilldown(std::string_view column) const {
    if (!is_drilled(column)) {
        throw Error(ErrorCode::NotDrilled, quoted(column));
    }
    QueryState next = *this;
    std::erase(next.drilldowns_, std::string(column));
    std::erase_if(next.filters_, [&](const Filter& f) { return f.column == column; });
    return next;
}

QueryState QueryState::with_filter(std::string_view column, std::string_view value) const {
    if (!is_drilled(column)) {
        throw Error(ErrorCode::NotDrilled, quoted(column) + " must be drilled down before filtering");
    }
    Filter f{std::string(column), std::string(value)};
    if (std::find(filters_.begin(), filters_.end(), f) != filters_.end()) {
        throw Error(ErrorCode::FilterExists, quoted(column) + " = " + quoted(value));
    }
    QueryState next = *this;
    next.filters_.push_back(std::move(f));
    return next;
}

QueryState QueryState::without_filter(std::string_view column, std::string_view value) const {
    Filter f{std::string(column), std::string(value)};
    auto it = std::find(filters_.begin(), filters_.end(), f);
    if (it == filters_.end()) {
        throw Error(ErrorCode::FilterNotFound, quoted(column) + " = " + quoted(value));
    }
    QueryState next = *this;
    next.filters_.erase(next.filters_.begin() + (it - filters_.begin()));
    return next;
}

QueryState QueryState::without_filters() const {
    QueryState next = *this;
    next.filters_.clear();
    return next;
}

void QueryState::validate_against(const Cube& cube) const {
    auto fail = [](const std::string& why) { throw Error(ErrorCode::StateInvalid, why); };
    auto measure = cube.find_column(measure_);
    if (!measure) {
        fail("measure " + quoted(measure_) + " is not in the cube");
    }
    if (cube.schema()[*measure].kind != ColumnKind::Measure) {
        fail(quoted(measure_) + " is not a measure in the cube");
    }
    for (std::size_t i = 0; i < drilldowns_.size(); ++i) {
        if (!cube.find_column(drilldowns_[i])) {
            fail("drill-down " + quoted(drilldowns_[i]) + " is not in the cube");
        }
        if (drilldowns_[i] == measure_) {
            fail(quoted(measure_) + " is both measure and drill-down");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (drilldowns_[j] == drilldowns_[i]) fail("duplicate drill-down " + quoted(drilldowns_[i]));
        }
    }
    for (const auto& f : filters_) {
        if (!is_drilled(f.column)) {
            fail("filter on undrilled column " + quoted(f.column));
        }
    }
}

}  // namespace olapcube
