#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "olapcube/cube.hpp"
#include "olapcube/engine.hpp"
#include "olapcube/query_state.hpp"

namespace olapcube {

enum class PlotKind { Bar, Line, LineMarker, Scatter, Pie };

std::string_view to_string(PlotKind kind) noexcept;
/// Accepts "bar", "line", "line_marker" (or "line+marker"), "scatter", "pie".
/// Throws Error(InvalidArgument).
PlotKind parse_plot_kind(std::string_view text);

struct PlotPoint {
    CellValue x;
    double y = 0.0;
};

/// Renderer-independent chart description. Unsorted points follow the cube
/// order of first occurrence; sorted points ascend by x (numeric for numeric
/// x, byte-wise for text, Null first) with ties kept in cube order.
struct PlotSpec {
    PlotKind kind = PlotKind::Bar;
    std::string x_label;
    std::string y_label;
    std::vector<PlotPoint> points;
    bool sorted = false;
};

/// Groups the rows passing the state's filters by `x` and sums `y`.
/// Errors: UnknownColumn, NotAMeasure (y), EmptyPlot, NegativePieValue.
PlotSpec build_plot(const Cube& cube, const QueryState& state, std::string_view x, std::string_view y,
                    PlotKind kind, bool sorted, ExecMode mode = ExecMode::serial());

/// Self-contained SVG document. Every data point yields one element carrying
/// class "mark" (bars, markers, pie wedges); line charts additionally draw a
/// polyline through all points.
std::string render_svg(const PlotSpec& spec, int width = 640, int height = 480);

inline constexpr std::string_view kSvgMediaType = "image/svg+xml";

/// Standard alphabet with padding.
std::string base64_encode(std::span<const std::uint8_t> bytes);
std::string base64_encode(std::string_view bytes);

/// `<img src="data:{media_type};base64,{payload}" />`. Throws
/// Error(InvalidArgument) for an empty image.
std::string html_img_tag(std::string_view image, std::string_view media_type);

}  // namespace olapcube
