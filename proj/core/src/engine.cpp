#include "olapcube/engine.hpp"

#include <algorithm>
#include <bit>
#include <thread>

#include "olapcube/error.hpp"

namespace olapcube {
namespace {

constexpr std::size_t kMinChunkRows = 4096;

// One compiled filter column: a row passes if its cell matches any value.
struct ColumnPredicate {
    const Column* column = nullptr;
    bool match_null = false;
    std::vector<std::uint8_t> code_match;  // text: indexed by dictionary code
    std::vector<std::int64_t> ints;
    std::vector<double> floats;

    bool matches(std::size_t row) const {
        if (column->is_null(row)) {
            return match_null;
        }
        switch (column->type()) {
            case ValueType::Text:
                return code_match[column->codes()[row]] != 0;
            case ValueType::Integer64: {
                std::int64_t v = column->integers()[row];
                return std::find(ints.begin(), ints.end(), v) != ints.end();
            }
            case ValueType::Float64: {
                double v = column->floats()[row];
                return std::find(floats.begin(), floats.end(), v) != floats.end();
            }
        }
        return false;
    }
};

// Adds `value` to `pred` if some cell of its column renders exactly as `value`.
void add_match(ColumnPredicate& pred, const std::string& value) {
    if (value.empty()) {
        pred.match_null = true;
        return;
    }
    const Column& col = *pred.column;
    switch (col.type()) {
        case ValueType::Text: {
            const auto& dict = col.dictionary();
            for (std::size_t code = 0; code < dict.size(); ++code) {
                if (dict[code] == value) pred.code_match[code] = 1;
            }
            break;
        }
        case ValueType::Integer64: {
            std::int64_t v = 0;
            if (parse_int64(value, v) && CellValue::integer(v).canonical_text() == value) pred.ints.push_back(v);
            break;
        }
        case ValueType::Float64: {
            double v = 0.0;
            if (parse_float64(value, v) && format_float(v) == value) pred.floats.push_back(v);
            break;
        }
    }
}

std::vector<ColumnPredicate> compile_filters(const Cube& cube, std::span<const Filter> filters) {
    std::vector<ColumnPredicate> preds;
    std::vector<std::size_t> pred_column;
    for (const auto& f : filters) {
        auto idx = cube.find_column(f.column);
        if (!idx) {
            throw Error(ErrorCode::UnknownColumn, "no column named '" + f.column + "'");
        }
        auto it = std::find(pred_column.begin(), pred_column.end(), *idx);
        ColumnPredicate* pred = nullptr;
        if (it == pred_column.end()) {
            pred_column.push_back(*idx);
            ColumnPredicate p;
            p.column = &cube.column(*idx);
            p.code_match.assign(p.column->dictionary().size(), 0);
            preds.push_back(std::move(p));
            pred = &preds.back();
        } else {
            pred = &preds[static_cast<std::size_t>(it - pred_column.begin())];
        }
        add_match(*pred, f.value);
    }
    return preds;
}

bool passes(const std::vector<ColumnPredicate>& preds, std::size_t row) {
    for (const auto& p : preds) {
        if (!p.matches(row)) return false;
    }
    return true;
}

// Cells are folded into fixed-width integer words so group keys hash and
// compare without touching CellValue. Equal typed values produce equal words;
// Null is tracked in trailing bitmask words.
struct KeyEncoder {
    std::vector<const Column*> columns;
    std::size_t width = 0;

    explicit KeyEncoder(std::vector<const Column*> cols) : columns(std::move(cols)) {
        width = columns.size() + (columns.size() + 63) / 64;
    }

    void encode(std::size_t row, std::uint64_t* out) const {
        const std::size_t n = columns.size();
        std::fill(out + n, out + width, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const Column& c = *columns[i];
            if (c.is_null(row)) {
                out[i] = 0;
                out[n + i / 64] |= std::uint64_t{1} << (i % 64);
                continue;
            }
            switch (c.type()) {
                case ValueType::Integer64:
                    out[i] = static_cast<std::uint64_t>(c.integers()[row]);
                    break;
                case ValueType::Float64: {
                    double v = c.floats()[row];
                    out[i] = std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
                    break;
                }
                case ValueType::Text:
                    out[i] = c.codes()[row];
                    break;
            }
        }
    }
};

struct GroupAccumulator {
    double sum = 0.0;
    std::uint64_t count = 0;
    std::size_t first_row = 0;
};

/// Open-addressing hash table from fixed-width keys to groups, preserving
/// insertion order.
class GroupTable {
public:
    explicit GroupTable(std::size_t width) : width_(width) { slots_.assign(64, 0); }

    GroupAccumulator& find_or_insert(const std::uint64_t* key, std::size_t first_row) {
        std::uint64_t h = hash(key);
        std::size_t mask = slots_.size() - 1;
        for (std::size_t i = h & mask;; i = (i + 1) & mask) {
            std::uint32_t slot = slots_[i];
            if (slot == 0) {
                groups_.push_back({0.0, 0, first_row});
                hashes_.push_back(h);
                keys_.insert(keys_.end(), key, key + width_);
                slots_[i] = static_cast<std::uint32_t>(groups_.size());
                if (groups_.size() * 2 > slots_.size()) grow();
                return groups_.back();
            }
            std::size_t g = slot - 1;
            if (hashes_[g] == h && std::equal(key, key + width_, keys_.data() + g * width_)) {
                return groups_[g];
            }
        }
    }

    std::size_t size() const noexcept { return groups_.size(); }
    const GroupAccumulator& group(std::size_t g) const { return groups_[g]; }
    const std::uint64_t* key(std::size_t g) const { return keys_.data() + g * width_; }

private:
    std::uint64_t hash(const std::uint64_t* key) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::size_t i = 0; i < width_; ++i) {
            std::uint64_t x = key[i] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            x ^= x >> 30;
            x *= 0xbf58476d1ce4e5b9ull;
            x ^= x >> 27;
            x *= 0x94d049bb133111ebull;
            x ^= x >> 31;
            h ^= x;
        }
        return h;
    }

    void grow() {
        std::vector<std::uint32_t> next(slots_.size() * 2, 0);
        std::size_t mask = next.size() - 1;
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            std::size_t i = hashes_[g] & mask;
            while (next[i] != 0) i = (i + 1) & mask;
            next[i] = static_cast<std::uint32_t>(g + 1);
        }
        slots_ = std::move(next);
    }

    std::size_t width_;
    std::vector<std::uint32_t> slots_;
    std::vector<GroupAccumulator> groups_;
    std::vector<std::uint64_t> hashes_;
    std::vector<std::uint64_t> keys_;
};

struct ChunkResult {
    GroupTable groups;
    double total_sum = 0.0;
    std::uint64_t total_count = 0;
};

class MeasureReader {
public:
    explicit MeasureReader(const Column& c) : column_(c) {}
    double operator()(std::size_t row) const {
        if (column_.is_null(row)) return 0.0;
        return column_.type() == ValueType::Integer64 ? static_cast<double>(column_.integers()[row])
                                                      : column_.floats()[row];
    }

private:
    const Column& column_;
};

ChunkResult scan_chunk(const KeyEncoder& encoder, const MeasureReader& measure,
                       const std::vector<ColumnPredicate>& preds, std::size_t begin, std::size_t end) {
    ChunkResult result{GroupTable(encoder.width)};
    std::vector<std::uint64_t> key(encoder.width);
    const bool grouped = !encoder.columns.empty();
    for (std::size_t row = begin; row < end; ++row) {
        if (!preds.empty() && !passes(preds, row)) continue;
        double v = measure(row);
        result.total_sum += v;
        ++result.total_count;
        if (grouped) {
            encoder.encode(row, key.data());
            GroupAccumulator& acc = result.groups.find_or_insert(key.data(), row);
            acc.sum += v;
            ++acc.count;
        }
    }
    return result;
}

}  // namespace

std::size_t logical_cpu_count() noexcept {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

std::size_t ExecMode::resolved_workers() const noexcept {
    if (!parallel_) return 1;
    return workers_ == 0 ? logical_cpu_count() : workers_;
}

std::vector<std::size_t> apply_filters(const Cube& cube, std::span<const Filter> filters) {
    auto preds = compile_filters(cube, filters);
    std::vector<std::size_t> rows;
    rows.reserve(filters.empty() ? cube.row_count() : 0);
    for (std::size_t r = 0; r < cube.row_count(); ++r) {
        if (passes(preds, r)) rows.push_back(r);
    }
    return rows;
}

AggregateTable aggregate(const Cube& cube, const GroupPlan& plan, ExecMode mode) {
    if (plan.measure >= cube.column_count()) {
        throw Error(ErrorCode::InvalidArgument, "measure index out of range");
    }
    const ColumnMeta& measure_meta = cube.schema()[plan.measure];
    if (measure_meta.kind != ColumnKind::Measure) {
        throw Error(ErrorCode::NotAMeasure, "'" + measure_meta.name + "' is a dimension");
    }
    std::vector<const Column*> group_columns;
    AggregateTable table;
    for (std::size_t idx : plan.group_by) {
        if (idx >= cube.column_count()) {
            throw Error(ErrorCode::InvalidArgument, "group-by index out of range");
        }
        group_columns.push_back(&cube.column(idx));
        table.drilldown_names.push_back(cube.schema()[idx].name);
    }
    table.measure_name = measure_meta.name;
    table.measure_type = measure_meta.value_type;

    const auto preds = compile_filters(cube, plan.filters);
    const KeyEncoder encoder(std::move(group_columns));
    const MeasureReader measure(cube.column(plan.measure));
    const std::size_t n = cube.row_count();

    // Contiguous chunks, each scanned independently, merged in chunk order.
    std::vector<ChunkResult> chunks;
    const std::size_t workers = mode.resolved_workers();
    if (workers <= 1 || n <= kMinChunkRows) {
        chunks.push_back(scan_chunk(encoder, measure, preds, 0, n));
    } else {
        const std::size_t chunk_rows = std::max(kMinChunkRows, (n + workers - 1) / workers);
        const std::size_t chunk_count = (n + chunk_rows - 1) / chunk_rows;
        std::vector<std::optional<ChunkResult>> partial(chunk_count);
        {
            std::vector<std::jthread> threads;
            threads.reserve(chunk_count - 1);
            for (std::size_t c = 1; c < chunk_count; ++c) {
                threads.emplace_back([&, c] {
                    partial[c] = scan_chunk(encoder, measure, preds, c * chunk_rows, std::min(n, (c + 1) * chunk_rows));
                });
            }
            partial[0] = scan_chunk(encoder, measure, preds, 0, std::min(n, chunk_rows));
        }
        for (auto& p : partial) chunks.push_back(std::move(*p));
    }

    GroupTable merged(encoder.width);
    for (const auto& chunk : chunks) {
        table.total_sum += chunk.total_sum;
        table.total_count += chunk.total_count;
        if (chunks.size() == 1) break;
        for (std::size_t g = 0; g < chunk.groups.size(); ++g) {
            const GroupAccumulator& part = chunk.groups.group(g);
            GroupAccumulator& acc = merged.find_or_insert(chunk.groups.key(g), part.first_row);
            acc.sum += part.sum;
            acc.count += part.count;
        }
    }
    const GroupTable& groups = chunks.size() == 1 ? chunks.front().groups : merged;

    table.rows.reserve(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const GroupAccumulator& acc = groups.group(g);
        AggregateRow row;
        row.key.reserve(plan.group_by.size());
        for (std::size_t idx : plan.group_by) {
            row.key.push_back(cube.cell(idx, acc.first_row));
        }
        row.sum = acc.sum;
        row.record_count = acc.count;
        table.rows.push_back(std::move(row));
    }
    return table;
}

AggregateTable evaluate(const Cube& cube, const QueryState& state, ExecMode mode) {
    state.validate_against(cube);
    GroupPlan plan;
    plan.measure = *cube.find_column(state.measure());
    for (const auto& name : state.drilldowns()) {
        plan.group_by.push_back(*cube.find_column(name));
    }
    plan.filters = state.filters();
    return aggregate(cube, plan, mode);
}

FactSlice fact_table(const Cube& cube, std::size_t offset, std::optional<std::size_t> limit) {
    if (offset > cube.row_count()) {
        throw Error(ErrorCode::OffsetOutOfRange,
                    "offset " + std::to_string(offset) + " exceeds row count " + std::to_string(cube.row_count()));
    }
    if (limit && *limit == 0) {
        throw Error(ErrorCode::InvalidArgument, "limit must be positive");
    }
    FactSlice slice;
    slice.schema = cube.schema();
    slice.offset = offset;
    slice.total = cube.row_count();
    std::size_t end = limit ? offset + std::min(*limit, cube.row_count() - offset) : cube.row_count();
    slice.rows.reserve(end - offset);
    for (std::size_t r = offset; r < end; ++r) {
        slice.rows.push_back(cube.row(r));
    }
    return slice;
}

}  // namespace olapcube
