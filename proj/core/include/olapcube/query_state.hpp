#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "olapcube/cube.hpp"

namespace olapcube {

/// Equality filter on a drilled-down column, matched against the canonical
/// text of each cell (integer 2009 matches "2009", Null matches "").
struct Filter {
    std::string column;
    std::string value;

    friend bool operator==(const Filter&, const Filter&) = default;
};

/// Immutable exploration state: one measure, an ordered list of drill-down
/// columns and the active filters. Every mutator returns a new state and
/// leaves `*this` untouched; on error it throws and nothing changes.
///
/// Invariants:
///  - the measure names a measure-kind column;
///  - drill-downs are distinct and never include the measure;
///  - every filter targets a drilled column.
///
/// Filters on different columns combine with AND, filters on the same
/// column with OR.
class QueryState {
public:
    /// Errors: UnknownColumn, NotAMeasure.
    static QueryState create(const Cube& cube, std::string_view measure);

    const std::string& measure() const noexcept { return measure_; }
    const std::vector<std::string>& drilldowns() const noexcept { return drilldowns_; }
    const std::vector<Filter>& filters() const noexcept { return filters_; }
    const Schema& schema() const noexcept { return *schema_; }

    /// Errors: UnknownColumn, NotAMeasure, ColumnInUse.
    QueryState with_measure(std::string_view measure) const;
    /// Errors: UnknownColumn, ColumnInUse (the measure), AlreadyDrilled.
    QueryState with_drilldown(std::string_view column) const;
    /// Also drops every filter on `column`. Errors: NotDrilled.
    QueryState without_drilldown(std::string_view column) const;
    /// Errors: NotDrilled, FilterExists.
    QueryState with_filter(std::string_view column, std::string_view value) const;
    /// Errors: FilterNotFound.
    QueryState without_filter(std::string_view column, std::string_view value) const;
    QueryState without_filters() const;

    bool is_drilled(std::string_view column) const noexcept;

    /// Checks the invariants above against `cube`. Throws Error(StateInvalid).
    void validate_against(const Cube& cube) const;

    friend bool operator==(const QueryState& a, const QueryState& b) noexcept {
        return a.measure_ == b.measure_ && a.drilldowns_ == b.drilldowns_ && a.filters_ == b.filters_;
    }

private:
    QueryState() = default;
    const ColumnMeta& lookup(std::string_view name) const;

    std::shared_ptr<const Schema> schema_;
    std::string measure_;
    std::vector<std::string> drilldowns_;
    std::vector<Filter> filters_;
};

// Free-function spellings of the state operations.
inline QueryState new_state(const Cube& cube, std::string_view measure) { return QueryState::create(cube, measure); }
inline QueryState set_measure(const QueryState& s, std::string_view m) { return s.with_measure(m); }
inline QueryState drilldown_add(const QueryState& s, std::string_view c) { return s.with_drilldown(c); }
inline QueryState drilldown_remove(const QueryState& s, std::string_view c) { return s.without_drilldown(c); }
inline QueryState filter_add(const QueryState& s, std::string_view c, std::string_view v) { return s.with_filter(c, v); }
inline QueryState filter_remove(const QueryState& s, std::string_view c, std::string_view v) {
    return s.without_filter(c, v);
}
inline QueryState filters_clear(const QueryState& s) { return s.without_filters(); }

}  // namespace olapcube
