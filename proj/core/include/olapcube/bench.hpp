#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "olapcube/cube.hpp"
#include "olapcube/engine.hpp"

namespace olapcube {

/// The six timed steps of the evaluation session, in order.
inline constexpr std::array<const char*, 6> kProtocolSteps = {
    "Display fact table",
    "Display initial aggregate table",
    "Drill-down columns 1, 3, 5 (display after each)",
    "Apply filter (column 5, 2009), display",
    "Remove filter, display",
    "Scatter plot column 5 (x) vs column 6 (y)",
};

struct StepStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0;
};

struct ModeReport {
    std::string mode;
    std::size_t workers = 1;
    std::array<StepStats, 6> steps{};
    /// Digest of every step's rendered output, identical across trials when
    /// the harness is deterministic.
    std::array<std::uint64_t, 6> output_digests{};
    bool outputs_identical_across_trials = true;

    /// Sum of the six step means.
    double total() const noexcept;
};

struct BenchReport {
    std::string dataset;
    std::size_t rows = 0;
    std::size_t columns = 0;
    std::size_t trials = 0;
    std::size_t logical_cpus = 0;
    std::vector<ModeReport> modes;
    bool outputs_identical_across_modes = true;
};

/// Rendered output of each step for one pass of the protocol. Step 3 holds
/// the three successive tables concatenated; step 6 holds the SVG.
std::array<std::string, 6> protocol_outputs(const Cube& cube, ExecMode mode);

/// Runs the protocol `trials` times, timing each step on a monotonic clock.
/// Errors: ProtocolUnsupported (fewer than 6 columns, or column 6 is not a
/// measure), InvalidArgument (trials == 0); engine errors propagate.
ModeReport run_protocol(const Cube& cube, ExecMode mode, std::size_t trials);

BenchReport run_benchmark(const Cube& cube, std::span<const ExecMode> modes, std::size_t trials);

nlohmann::json to_json(const BenchReport& report);
/// Steps as rows, modes as columns, seconds to 4 decimals, plus a total row.
std::string render_bench_table(const BenchReport& report);

/// Deterministic 7-column cube: Category (5 values), Subcategory (30),
/// Subcategory Code (10), Rate (float), Fiscal Year (2005-2014),
/// Amount (US$-Millions) (integer), Adjustment (float).
Cube generate_synthetic(std::size_t rows, std::uint64_t seed);

}  // namespace olapcube
