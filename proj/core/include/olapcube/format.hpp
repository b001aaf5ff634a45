#pragma once

#include <string>
#include <vector>

#include "olapcube/engine.hpp"

namespace olapcube {

/// Group sums of an integer measure print without decimals when integral
/// (1581); everything else prints as a float with at least one decimal.
std::string format_sum(double value, ValueType measure_type);

/// Plain-text aggregate table: drill-down columns, the measure and
/// "Record Count", closed by a "Summary" row. With no drill-downs this is the
/// single-row summary layout.
std::string render_aggregate_table(const AggregateTable& table);

std::string render_fact_table(const FactSlice& slice);

/// Left-aligned columns separated by two spaces; widths count UTF-8 code points.
std::string render_text_table(const std::vector<std::string>& header,
                              const std::vector<std::vector<std::string>>& rows);

}  // namespace olapcube
