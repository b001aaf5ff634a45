#include "olapcube/format.hpp"

#include <algorithm>
#include <cmath>

namespace olapcube {
namespace {

std::size_t display_width(const std::string& s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace

std::string format_sum(double value, ValueType measure_type) {
    if (measure_type == ValueType::Integer64 && std::trunc(value) == value && std::abs(value) < 9007199254740992.0) {
        return std::to_string(static_cast<long long>(value));
    }
    return format_float(value);
}

std::string render_text_table(const std::vector<std::string>& header,
                              const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) widths[c] = display_width(header[c]);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) {
            widths[c] = std::max(widths[c], display_width(row[c]));
        }
    }
    std::string out;
    auto emit = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            line += cells[c];
            if (c + 1 < cells.size()) line.append(widths[c] - display_width(cells[c]) + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line;
        out += '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    return out;
}

std::string render_aggregate_table(const AggregateTable& table) {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    const std::string total = format_float(table.total_sum);
    const std::string count = std::to_string(table.total_count);
    if (table.drilldown_names.empty()) {
        header = {"Summary", "Sum of All \xE2\x80\x9C" + table.measure_name + "\xE2\x80\x9D", "Record Count"};
        rows.push_back({"Summary", total, count});
        return render_text_table(header, rows);
    }
    header = table.drilldown_names;
    header.push_back(table.measure_name);
    header.push_back("Record Count");
    rows.reserve(table.rows.size() + 1);
    for (const auto& r : table.rows) {
        std::vector<std::string> cells;
        cells.reserve(header.size());
        for (const auto& k : r.key) cells.push_back(k.canonical_text());
        cells.push_back(format_sum(r.sum, table.measure_type));
        cells.push_back(std::to_string(r.record_count));
        rows.push_back(std::move(cells));
    }
    std::vector<std::string> summary(table.drilldown_names.size(), "");
    summary.front() = "Summary";
    summary.push_back(total);
    summary.push_back(count);
    rows.push_back(std::move(summary));
    return render_text_table(header, rows);
}

std::string render_fact_table(const FactSlice& slice) {
    std::vector<std::string> header;
    header.reserve(slice.schema.size());
    for (const auto& meta : slice.schema) header.push_back(meta.name);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(slice.rows.size());
    for (const auto& r : slice.rows) {
        std::vector<std::string> cells;
        cells.reserve(r.size());
        for (const auto& cell : r) cells.push_back(cell.canonical_text());
        rows.push_back(std::move(cells));
    }
    return render_text_table(header, rows);
}

}  // namespace olapcube
