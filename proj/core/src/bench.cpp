#include "olapcube/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "olapcube/error.hpp"
#include "olapcube/format.hpp"
#include "olapcube/plot.hpp"
#include "olapcube/query_state.hpp"

namespace olapcube {
namespace {

// Protocol columns are 1-based positions in the 7-column layout.
constexpr std::size_t kDrillColumns[] = {0, 2, 4};
constexpr std::size_t kFilterColumn = 4;
constexpr std::size_t kMeasureColumn = 5;
constexpr const char* kFilterValue = "2009";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void check_supported(const Cube& cube) {
    if (cube.column_count() < 6) {
        throw Error(ErrorCode::ProtocolUnsupported,
                    "the protocol needs at least 6 columns, cube has " + std::to_string(cube.column_count()));
    }
    if (cube.schema()[kMeasureColumn].kind != ColumnKind::Measure) {
        throw Error(ErrorCode::ProtocolUnsupported, "column 6 ('" + cube.schema()[kMeasureColumn].name +
                                                        "') is not a measure");
    }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    auto us = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
    return static_cast<double>(us) / 1e6;
}

// One protocol pass; `timings` receives per-step seconds.
std::array<std::string, 6> run_once(const Cube& cube, ExecMode mode, std::array<double, 6>& timings) {
    const auto& schema = cube.schema();
    std::array<std::string, 6> out;

    auto t = Clock::now();
    out[0] = render_fact_table(fact_table(cube));
    timings[0] = seconds_since(t);

    t = Clock::now();
    QueryState state = QueryState::create(cube, schema[kMeasureColumn].name);
    out[1] = render_aggregate_table(evaluate(cube, state, mode));
    timings[1] = seconds_since(t);

    t = Clock::now();
    for (std::size_t col : kDrillColumns) {
        state = state.with_drilldown(schema[col].name);
        out[2] += render_aggregate_table(evaluate(cube, state, mode));
    }
    timings[2] = seconds_since(t);

    t = Clock::now();
    state = state.with_filter(schema[kFilterColumn].name, kFilterValue);
    out[3] = render_aggregate_table(evaluate(cube, state, mode));
    timings[3] = seconds_since(t);

    t = Clock::now();
    state = state.without_filter(schema[kFilterColumn].name, kFilterValue);
    out[4] = render_aggregate_table(evaluate(cube, state, mode));
    timings[4] = seconds_since(t);

    t = Clock::now();
    PlotSpec spec = build_plot(cube, state, schema[kFilterColumn].name, schema[kMeasureColumn].name,
                               PlotKind::Scatter, false, mode);
    out[5] = render_svg(spec);
    timings[5] = seconds_since(t);
    return out;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

double ModeReport::total() const noexcept {
    double sum = 0.0;
    for (const auto& s : steps) sum += s.mean;
    return sum;
}

std::array<std::string, 6> protocol_outputs(const Cube& cube, ExecMode mode) {
    check_supported(cube);
    std::array<double, 6> unused{};
    return run_once(cube, mode, unused);
}

ModeReport run_protocol(const Cube& cube, ExecMode mode, std::size_t trials) {
    check_supported(cube);
    if (trials == 0) {
        throw Error(ErrorCode::InvalidArgument, "trials must be positive");
    }
    ModeReport report;
    report.mode = mode.name();
    report.workers = mode.resolved_workers();

    std::array<std::vector<double>, 6> samples;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::array<double, 6> timings{};
        auto outputs = run_once(cube, mode, timings);
        for (std::size_t s = 0; s < 6; ++s) {
            samples[s].push_back(timings[s]);
            std::uint64_t digest = fnv1a(outputs[s]);
            if (trial == 0) {
                report.output_digests[s] = digest;
            } else if (digest != report.output_digests[s]) {
                report.outputs_identical_across_trials = false;
            }
        }
    }
    for (std::size_t s = 0; s < 6; ++s) {
        const auto& xs = samples[s];
        StepStats& st = report.steps[s];
        double sum = 0.0;
        for (double x : xs) sum += x;
        st.mean = sum / static_cast<double>(xs.size());
        st.min = *std::min_element(xs.begin(), xs.end());
        st.max = *std::max_element(xs.begin(), xs.end());
        double var = 0.0;
        for (double x : xs) var += (x - st.mean) * (x - st.mean);
        st.stddev = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return report;
}

BenchReport run_benchmark(const Cube& cube, std::span<const ExecMode> modes, std::size_t trials) {
    BenchReport report;
    report.dataset = cube.source_name();
    report.rows = cube.row_count();
    report.columns = cube.column_count();
    report.trials = trials;
    report.logical_cpus = logical_cpu_count();
    for (const auto& mode : modes) {
        report.modes.push_back(run_protocol(cube, mode, trials));
        if (report.modes.back().output_digests != report.modes.front().output_digests) {
            report.outputs_identical_across_modes = false;
        }
    }
    return report;
}

nlohmann::json to_json(const BenchReport& report) {
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& m : report.modes) {
        nlohmann::json steps = nlohmann::json::array();
        for (std::size_t s = 0; s < 6; ++s) {
            const StepStats& st = m.steps[s];
            steps.push_back({{"step", s + 1},
                             {"name", kProtocolSteps[s]},
                             {"mean_seconds", st.mean},
                             {"min_seconds", st.min},
                             {"max_seconds", st.max},
                             {"stddev_seconds", st.stddev}});
        }
        modes.push_back({{"mode", m.mode},
                         {"workers", m.workers},
                         {"steps", std::move(steps)},
                         {"total_seconds", m.total()},
                         {"outputs_identical_across_trials", m.outputs_identical_across_trials}});
    }
    return {{"dataset", {{"name", report.dataset}, {"rows", report.rows}, {"columns", report.columns}}},
            {"trials", report.trials},
            {"environment", {{"logical_cpus", report.logical_cpus}}},
            {"modes", std::move(modes)},
            {"outputs_identical_across_modes", report.outputs_identical_across_modes}};
}

std::string render_bench_table(const BenchReport& report) {
    std::vector<std::string> header{""};
    for (const auto& m : report.modes) {
        header.push_back(m.mode == "parallel" ? "Parallel (" + std::to_string(m.workers) + " workers)" : "Serial");
    }
    std::vector<std::vector<std::string>> rows;
    for (std::size_t s = 0; s < 6; ++s) {
        std::vector<std::string> row{"Step " + std::to_string(s + 1)};
        for (const auto& m : report.modes) row.push_back(fixed4(m.steps[s].mean));
        rows.push_back(std::move(row));
    }
    std::vector<std::string> total{"Total"};
    for (const auto& m : report.modes) total.push_back(fixed4(m.total()));
    rows.push_back(std::move(total));
    std::string out = render_text_table(header, rows);
    out += "Seconds, mean across " + std::to_string(report.trials) + " trials; " + report.dataset + " (" +
           std::to_string(report.rows) + " rows x " + std::to_string(report.columns) + " columns); " +
           std::to_string(report.logical_cpus) + " logical CPUs\n";
    return out;
}

Cube generate_synthetic(std::size_t rows, std::uint64_t seed) {
    static const std::vector<std::string> kCategories = {"Assets", "Liabilities", "Equity", "Revenue", "Expenses"};
    static const std::vector<std::string> kCodes = {"dfb", "oe", "ap", "ar", "cs", "re", "ppe", "inv", "ltd", "tax"};
    std::vector<std::string> subcategories;
    for (int i = 1; i <= 30; ++i) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "Account %02d", i);
        subcategories.emplace_back(buf);
    }

    // Raw 64-bit draws only: distribution objects are not portable across
    // standard library implementations.
    std::mt19937_64 rng(seed);
    auto pick = [&](std::uint64_t n) { return rng() % n; };

    Schema schema = {
        {"Category", 0, ColumnKind::Dimension, ValueType::Text},
        {"Subcategory", 1, ColumnKind::Dimension, ValueType::Text},
        {"Subcategory Code", 2, ColumnKind::Dimension, ValueType::Text},
        {"Rate", 3, ColumnKind::Measure, ValueType::Float64},
        {"Fiscal Year", 4, ColumnKind::Measure, ValueType::Integer64},
        {"Amount (US$-Millions)", 5, ColumnKind::Measure, ValueType::Integer64},
        {"Adjustment", 6, ColumnKind::Measure, ValueType::Float64},
    };
    std::vector<Column> columns;
    for (const auto& meta : schema) {
        columns.emplace_back(meta.value_type);
        columns.back().reserve(rows);
    }
    for (std::size_t r = 0; r < rows; ++r) {
        columns[0].append_text(kCategories[pick(kCategories.size())]);
        columns[1].append_text(subcategories[pick(subcategories.size())]);
        columns[2].append_text(kCodes[pick(kCodes.size())]);
        columns[3].append_float(static_cast<double>(pick(100000)) / 100.0);
        columns[4].append_integer(2005 + static_cast<std::int64_t>(pick(10)));
        columns[5].append_integer(static_cast<std::int64_t>(pick(40001)) - 10000);
        columns[6].append_float((static_cast<double>(pick(200001)) - 100000.0) / 1000.0);
    }
    return Cube("synthetic-" + std::to_string(rows) + "-seed" + std::to_string(seed), std::move(schema),
                std::move(columns));
}

}  // namespace olapcube
