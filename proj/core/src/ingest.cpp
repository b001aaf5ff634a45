#include "olapcube/ingest.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "olapcube/error.hpp"

namespace olapcube {
namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";

std::string_view trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t");
    if (begin == std::string_view::npos) {
        return {};
    }
    auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

// Running type guess for one column. Empty cells never change it.
enum class Guess { Empty, Integer, Float, Text };

Guess refine(Guess g, std::string_view cell) {
    if (cell.empty() || g == Guess::Text) {
        return g;
    }
    if (g == Guess::Empty || g == Guess::Integer) {
        std::int64_t i = 0;
        if (parse_int64(cell, i)) {
            return Guess::Integer;
        }
    }
    double d = 0.0;
    return parse_float64(cell, d) ? Guess::Float : Guess::Text;
}

std::vector<std::string> unique_names(std::span<const std::string> header) {
    std::vector<std::string> names;
    names.reserve(header.size());
    auto taken = [&](const std::string& n) {
        for (const auto& existing : names) {
            if (existing == n) return true;
        }
        for (const auto& raw : header) {
            if (trim(raw) == n) return true;
        }
        return false;
    };
    for (const auto& raw : header) {
        std::string name(trim(raw));
        bool duplicate = false;
        for (const auto& existing : names) {
            duplicate = duplicate || existing == name;
        }
        if (duplicate) {
            for (int suffix = 2;; ++suffix) {
                std::string candidate = name + " (" + std::to_string(suffix) + ")";
                if (!taken(candidate)) {
                    name = std::move(candidate);
                    break;
                }
            }
        }
        names.push_back(std::move(name));
    }
    return names;
}

std::string read_all(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool needs_quotes(std::string_view s, char delimiter) {
    if (s.empty()) {
        return false;
    }
    if (s.front() == ' ' || s.front() == '\t' || s.back() == ' ' || s.back() == '\t') {
        return true;
    }
    for (char c : s) {
        if (c == delimiter || c == '"' || c == '\n' || c == '\r') {
            return true;
        }
    }
    return false;
}

void write_field(std::ostream& out, std::string_view s, char delimiter) {
    if (!needs_quotes(s, delimiter)) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

}  // namespace

CsvReader::CsvReader(std::string_view data, char delimiter) : data_(data), delimiter_(delimiter) {
    if (delimiter == '"' || delimiter == '\n' || delimiter == '\r') {
        throw Error(ErrorCode::InvalidArgument, "delimiter may not be a quote or newline character");
    }
}

bool CsvReader::next(std::vector<std::string>& fields) {
    // Skip blank lines between records.
    while (pos_ < data_.size() && (data_[pos_] == '\n' || data_[pos_] == '\r')) {
        if (data_[pos_] == '\n') ++line_;
        ++pos_;
    }
    if (pos_ >= data_.size()) {
        return false;
    }
    record_line_ = line_;
    std::size_t count = 0;
    auto field = [&]() -> std::string& {
        if (count == fields.size()) fields.emplace_back();
        std::string& f = fields[count++];
        f.clear();
        return f;
    };

    std::string* current = &field();
    bool in_quotes = false;
    bool at_field_start = true;
    while (pos_ < data_.size()) {
        char c = data_[pos_];
        if (in_quotes) {
            if (c == '"') {
                if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '"') {
                    current->push_back('"');
                    pos_ += 2;
                    continue;
                }
                in_quotes = false;
                ++pos_;
                continue;
            }
            if (c == '\n') ++line_;
            current->push_back(c);
            ++pos_;
            continue;
        }
        if (c == '"' && at_field_start) {
            in_quotes = true;
            at_field_start = false;
            ++pos_;
            continue;
        }
        if (c == delimiter_) {
            current = &field();
            at_field_start = true;
            ++pos_;
            continue;
        }
        if (c == '\r' || c == '\n') {
            if (c == '\r' && pos_ + 1 < data_.size() && data_[pos_ + 1] == '\n') ++pos_;
            ++pos_;
            ++line_;
            break;
        }
        at_field_start = false;
        current->push_back(c);
        ++pos_;
    }
    if (in_quotes) {
        throw Error(ErrorCode::MalformedCsv,
                    "unterminated quoted field in record starting at line " + std::to_string(record_line_));
    }
    fields.resize(count);
    return true;
}

CellValue parse_cell(std::string_view text, ValueType type, bool trim_cells) {
    std::string_view s = trim_cells ? trim(text) : text;
    if (s.empty()) {
        return CellValue::null();
    }
    switch (type) {
        case ValueType::Integer64: {
            std::int64_t v = 0;
            return parse_int64(s, v) ? CellValue::integer(v) : CellValue::null();
        }
        case ValueType::Float64: {
            double v = 0.0;
            return parse_float64(s, v) ? CellValue::floating(v) : CellValue::null();
        }
        case ValueType::Text:
            return CellValue::text(std::string(s));
    }
    return CellValue::null();
}

Schema infer_schema(std::span<const std::string> header, std::span<const std::vector<std::string>> rows,
                    bool trim_cells) {
    std::vector<Guess> guesses(header.size(), Guess::Empty);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < guesses.size() && c < row.size(); ++c) {
            std::string_view cell = trim_cells ? trim(row[c]) : std::string_view(row[c]);
            guesses[c] = refine(guesses[c], cell);
        }
    }
    auto names = unique_names(header);
    Schema schema;
    schema.reserve(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        ColumnMeta meta;
        meta.name = std::move(names[c]);
        meta.index = c;
        switch (guesses[c]) {
            case Guess::Integer: meta.value_type = ValueType::Integer64; break;
            case Guess::Float:   meta.value_type = ValueType::Float64; break;
            default:             meta.value_type = ValueType::Text; break;
        }
        meta.kind = is_numeric(meta.value_type) ? ColumnKind::Measure : ColumnKind::Dimension;
        schema.push_back(std::move(meta));
    }
    return schema;
}

Cube load_csv(std::string_view bytes, const IngestOptions& options, std::string source_name) {
    if (bytes.starts_with(kBom)) {
        bytes.remove_prefix(kBom.size());
    }
    CsvReader reader(bytes, options.delimiter);
    std::vector<std::string> header;
    if (!reader.next(header)) {
        throw Error(ErrorCode::EmptyInput, "no header row");
    }
    const std::size_t width = header.size();

    // Pass 1: type inference over the sample, one record at a time.
    std::vector<Guess> guesses(width, Guess::Empty);
    {
        CsvReader sampler(bytes, options.delimiter);
        std::vector<std::string> fields;
        sampler.next(fields);
        std::size_t seen = 0;
        while ((!options.type_inference_sample || seen < *options.type_inference_sample) && sampler.next(fields)) {
            if (fields.size() != width) {
                break;  // reported with its line number by pass 2
            }
            for (std::size_t c = 0; c < width; ++c) {
                std::string_view cell = options.trim_cells ? trim(fields[c]) : std::string_view(fields[c]);
                guesses[c] = refine(guesses[c], cell);
            }
            ++seen;
        }
    }
    std::vector<std::vector<std::string>> no_rows;
    Schema schema = infer_schema(header, no_rows, options.trim_cells);
    for (std::size_t c = 0; c < width; ++c) {
        switch (guesses[c]) {
            case Guess::Integer: schema[c].value_type = ValueType::Integer64; break;
            case Guess::Float:   schema[c].value_type = ValueType::Float64; break;
            default:             schema[c].value_type = ValueType::Text; break;
        }
        schema[c].kind = is_numeric(schema[c].value_type) ? ColumnKind::Measure : ColumnKind::Dimension;
    }

    // Pass 2: typed column fill.
    std::vector<Column> columns;
    columns.reserve(width);
    for (const auto& meta : schema) {
        columns.emplace_back(meta.value_type);
    }
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        if (fields.size() != width) {
            throw Error(ErrorCode::RaggedRow, "line " + std::to_string(reader.record_line()) + " has " +
                                                  std::to_string(fields.size()) + " cells, expected " +
                                                  std::to_string(width));
        }
        for (std::size_t c = 0; c < width; ++c) {
            columns[c].append(parse_cell(fields[c], schema[c].value_type, options.trim_cells));
        }
    }
    return Cube(std::move(source_name), std::move(schema), std::move(columns));
}

Cube load_csv(std::istream& in, const IngestOptions& options, std::string source_name) {
    std::string bytes = read_all(in);
    return load_csv(std::string_view(bytes), options, std::move(source_name));
}

Cube load_csv_file(const std::filesystem::path& path, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot open '" + path.string() + "'");
    }
    return load_csv(in, options, path.filename().string());
}

void write_csv(const Cube& cube, std::ostream& out, char delimiter) {
    const auto& schema = cube.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (c > 0) out << delimiter;
        write_field(out, schema[c].name, delimiter);
    }
    out << '\n';
    for (std::size_t r = 0; r < cube.row_count(); ++r) {
        for (std::size_t c = 0; c < schema.size(); ++c) {
            if (c > 0) out << delimiter;
            write_field(out, cube.column(c).cell(r).canonical_text(), delimiter);
        }
        out << '\n';
    }
}

std::string to_csv(const Cube& cube, char delimiter) {
    std::ostringstream out;
    write_csv(cube, out, delimiter);
    return out.str();
}

}  // namespace olapcube
