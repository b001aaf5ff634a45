#include "olapcube/json.hpp"

namespace olapcube {

using nlohmann::json;

json to_json(const Schema& schema) {
    json out = json::array();
    for (const auto& meta : schema) {
        out.push_back({{"name", meta.name},
                       {"index", meta.index},
                       {"kind", to_string(meta.kind)},
                       {"value_type", to_string(meta.value_type)}});
    }
    return out;
}

json to_json(const CellValue& cell) {
    if (cell.is_integer()) return cell.as_integer();
    if (cell.is_float()) return cell.as_float();
    if (cell.is_text()) return cell.as_text();
    return nullptr;
}

json to_json(const AggregateTable& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json key = json::array();
        for (const auto& k : row.key) key.push_back(k.canonical_text());
        rows.push_back({{"key", std::move(key)}, {"sum", row.sum}, {"record_count", row.record_count}});
    }
    return {{"drilldown_names", table.drilldown_names},
            {"measure_name", table.measure_name},
            {"rows", std::move(rows)},
            {"total_sum", table.total_sum},
            {"total_count", table.total_count}};
}

json to_json(const FactSlice& slice) {
    json rows = json::array();
    for (const auto& r : slice.rows) {
        json cells = json::array();
        for (const auto& c : r) cells.push_back(to_json(c));
        rows.push_back(std::move(cells));
    }
    return {{"schema", to_json(slice.schema)}, {"offset", slice.offset}, {"rows", std::move(rows)}, {"total", slice.total}};
}

json to_json(const PlotSpec& spec) {
    json points = json::array();
    for (const auto& p : spec.points) {
        points.push_back(json::array({p.x.canonical_text(), p.y}));
    }
    return {{"kind", to_string(spec.kind)},
            {"x_label", spec.x_label},
            {"y_label", spec.y_label},
            {"sorted", spec.sorted},
            {"points", std::move(points)}};
}

}  // namespace olapcube
