#pragma once

#include <nlohmann/json.hpp>

#include "olapcube/cube.hpp"
#include "olapcube/engine.hpp"
#include "olapcube/plot.hpp"

namespace olapcube {

// Wire shapes shared by the HTTP API and the CLI's --out json.

nlohmann::json to_json(const Schema& schema);
/// Typed value: number, string or null.
nlohmann::json to_json(const CellValue& cell);
/// {"drilldown_names", "measure_name", "rows": [{"key", "sum", "record_count"}],
///  "total_sum", "total_count"}; keys use canonical cell text.
nlohmann::json to_json(const AggregateTable& table);
/// {"schema", "offset", "rows", "total"}.
nlohmann::json to_json(const FactSlice& slice);
/// {"kind", "x_label", "y_label", "sorted", "points": [[x, y], ...]}; x is canonical text.
nlohmann::json to_json(const PlotSpec& spec);

}  // namespace olapcube
