#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "olapcube/cube.hpp"

namespace olapcube {

struct IngestOptions {
    char delimiter = ',';
    /// Number of leading data rows used for type inference; nullopt scans all rows.
    std::optional<std::size_t> type_inference_sample;
    bool trim_cells = true;
};

/// Pull parser for RFC 4180 records. Quoted fields may contain delimiters,
/// doubled quotes and line breaks. Completely empty lines are skipped.
class CsvReader {
public:
    CsvReader(std::string_view data, char delimiter);

    /// Reads the next record into `fields`. Returns false at end of input.
    /// Throws Error(MalformedCsv) on an unterminated quoted field.
    bool next(std::vector<std::string>& fields);

    /// 1-based physical line on which the last returned record started.
    std::size_t record_line() const noexcept { return record_line_; }

private:
    std::string_view data_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
    char delimiter_;
};

/// Parses headered CSV text into a Cube. A leading UTF-8 BOM is ignored.
/// Errors: EmptyInput, RaggedRow (message carries the 1-based line), MalformedCsv.
Cube load_csv(std::string_view bytes, const IngestOptions& options = {}, std::string source_name = {});
Cube load_csv(std::istream& in, const IngestOptions& options = {}, std::string source_name = {});
Cube load_csv_file(const std::filesystem::path& path, const IngestOptions& options = {});

/// Infers value types and kinds from header names and sampled rows. Names are
/// trimmed and duplicates receive " (2)", " (3)", ... suffixes.
Schema infer_schema(std::span<const std::string> header, std::span<const std::vector<std::string>> rows,
                    bool trim_cells = true);

/// Total: empty or unparseable text yields Null.
CellValue parse_cell(std::string_view text, ValueType type, bool trim_cells = true);

/// Serializes a cube back to CSV with canonical cell text, quoting as needed.
void write_csv(const Cube& cube, std::ostream& out, char delimiter = ',');
std::string to_csv(const Cube& cube, char delimiter = ',');

}  // namespace olapcube
