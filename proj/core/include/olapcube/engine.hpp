#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "olapcube/cube.hpp"
#include "olapcube/query_state.hpp"

namespace olapcube {

/// Serial, or parallel over a fixed number of workers (0 means one per
/// logical CPU).
class ExecMode {
public:
    static ExecMode serial() noexcept { return ExecMode(false, 1); }
    static ExecMode parallel(std::size_t workers = 0) noexcept { return ExecMode(true, workers); }

    bool is_parallel() const noexcept { return parallel_; }
    std::size_t requested_workers() const noexcept { return workers_; }
    std::size_t resolved_workers() const noexcept;
    std::string name() const { return parallel_ ? "parallel" : "serial"; }

private:
    ExecMode(bool parallel, std::size_t workers) noexcept : parallel_(parallel), workers_(workers) {}
    bool parallel_;
    std::size_t workers_;
};

std::size_t logical_cpu_count() noexcept;

struct AggregateRow {
    std::vector<CellValue> key;
    double sum = 0.0;
    std::uint64_t record_count = 0;
};

/// Grouped sums and record counts plus the grand-total summary. Rows are in
/// order of the first cube row carrying each key.
struct AggregateTable {
    std::vector<std::string> drilldown_names;
    std::string measure_name;
    ValueType measure_type = ValueType::Float64;
    std::vector<AggregateRow> rows;
    double total_sum = 0.0;
    std::uint64_t total_count = 0;
};

/// Resolved, index-based form of a query. QueryState lowers to this; the
/// plot module also groups by columns that are not drilled.
struct GroupPlan {
    std::size_t measure = 0;
    std::vector<std::size_t> group_by;
    std::vector<Filter> filters;
};

/// Ascending indices of rows passing all filters (AND across columns, OR
/// within one column). Errors: UnknownColumn.
std::vector<std::size_t> apply_filters(const Cube& cube, std::span<const Filter> filters);

/// Errors: StateInvalid.
AggregateTable evaluate(const Cube& cube, const QueryState& state, ExecMode mode = ExecMode::serial());

/// Errors: UnknownColumn, NotAMeasure, InvalidArgument (index out of range).
AggregateTable aggregate(const Cube& cube, const GroupPlan& plan, ExecMode mode = ExecMode::serial());

struct FactSlice {
    Schema schema;
    std::size_t offset = 0;
    std::vector<std::vector<CellValue>> rows;
    std::size_t total = 0;
};

/// Rows [offset, offset + limit) in cube order; nullopt limit means all.
/// Errors: OffsetOutOfRange, InvalidArgument (limit 0).
FactSlice fact_table(const Cube& cube, std::size_t offset = 0, std::optional<std::size_t> limit = std::nullopt);

}  // namespace olapcube
