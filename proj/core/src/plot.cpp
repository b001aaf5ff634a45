#include "olapcube/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "olapcube/error.hpp"

namespace olapcube {
namespace {

bool x_less(const CellValue& a, const CellValue& b) {
    if (a.is_null() || b.is_null()) {
        return a.is_null() && !b.is_null();
    }
    if (a.is_numeric() && b.is_numeric()) {
        if (a.is_integer() && b.is_integer()) return a.as_integer() < b.as_integer();
        return a.numeric_or_zero() < b.numeric_or_zero();
    }
    if (a.is_text() && b.is_text()) {
        return a.as_text() < b.as_text();
    }
    return a.is_numeric();  // numbers before text; not reachable within one column
}

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

void render_pie(const PlotSpec& spec, int width, int height, std::string& svg) {
    const double total = std::accumulate(spec.points.begin(), spec.points.end(), 0.0,
                                         [](double acc, const PlotPoint& p) { return acc + p.y; });
    const double cx = width / 2.0;
    const double cy = height / 2.0;
    const double r = std::min(width, height) * 0.35;
    constexpr double kTau = 6.283185307179586;
    double start = 0.0;
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
        const PlotPoint& p = spec.points[i];
        const double fraction = p.y / total;
        const double angle = fraction * 360.0;
        const std::string color = kPalette[i % std::size(kPalette)];
        std::string attrs = " class=\"mark wedge\" data-x=\"" + xml_escape(p.x.canonical_text()) +
                            "\" data-y=\"" + full(p.y) + "\" data-fraction=\"" + full(fraction) +
                            "\" data-angle=\"" + full(angle) + "\" fill=\"" + color + "\"";
        if (fraction >= 1.0) {
            svg += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\"" + attrs + "/>\n";
        } else if (fraction > 0.0) {
            const double a0 = start * kTau - kTau / 4;
            const double a1 = (start + fraction) * kTau - kTau / 4;
            const int large = fraction > 0.5 ? 1 : 0;
            svg += "<path d=\"M " + num(cx) + " " + num(cy) + " L " + num(cx + r * std::cos(a0)) + " " +
                   num(cy + r * std::sin(a0)) + " A " + num(r) + " " + num(r) + " 0 " + std::to_string(large) +
                   " 1 " + num(cx + r * std::cos(a1)) + " " + num(cy + r * std::sin(a1)) + " Z\"" + attrs + "/>\n";
        } else {
            svg += "<path d=\"\"" + attrs + "/>\n";
        }
        start += fraction;
    }
    svg += "<text class=\"x-label\" x=\"" + num(cx) + "\" y=\"" + num(height - 20.0) +
           "\" text-anchor=\"middle\">" + xml_escape(spec.x_label) + "</text>\n";
    svg += "<text class=\"y-label\" x=\"" + num(cx) + "\" y=\"24\" text-anchor=\"middle\">" +
           xml_escape(spec.y_label) + "</text>\n";
}

void render_axes(const PlotSpec& spec, int width, int height, std::string& svg) {
    const double left = 80, right = width - 20.0, top = 20, bottom = height - 60.0;
    const auto& pts = spec.points;

    double ymin = 0.0, ymax = 0.0;
    for (const auto& p : pts) {
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    if (ymax == ymin) ymax = ymin + 1.0;
    auto sy = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

    // Scatter places numeric x on a linear axis; everything else is categorical.
    const bool numeric_x = spec.kind == PlotKind::Scatter &&
                           std::all_of(pts.begin(), pts.end(), [](const PlotPoint& p) { return p.x.is_numeric(); });
    double xmin = 0.0, xmax = 1.0;
    if (numeric_x) {
        xmin = xmax = pts.front().x.numeric_or_zero();
        for (const auto& p : pts) {
            xmin = std::min(xmin, p.x.numeric_or_zero());
            xmax = std::max(xmax, p.x.numeric_or_zero());
        }
        if (xmax == xmin) {
            xmin -= 0.5;
            xmax += 0.5;
        }
    }
    const double slot = (right - left) / static_cast<double>(pts.size());
    auto sx = [&](std::size_t i) {
        if (numeric_x) {
            double pad = (xmax - xmin) * 0.05;
            return left + (pts[i].x.numeric_or_zero() - xmin + pad) / (xmax - xmin + 2 * pad) * (right - left);
        }
        return left + slot * (static_cast<double>(i) + 0.5);
    };

    svg += "<line class=\"axis\" x1=\"" + num(left) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(right) +
           "\" y2=\"" + num(bottom) + "\" stroke=\"black\"/>\n";
    svg += "<line class=\"axis\" x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) +
           "\" y2=\"" + num(bottom) + "\" stroke=\"black\"/>\n";
    if (ymin < 0.0) {
        svg += "<line class=\"zero\" x1=\"" + num(left) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" + num(right) +
               "\" y2=\"" + num(sy(0)) + "\" stroke=\"#999\"/>\n";
    }
    for (int t = 0; t <= 4; ++t) {
        double v = ymin + (ymax - ymin) * t / 4.0;
        svg += "<text class=\"tick\" x=\"" + num(left - 6) + "\" y=\"" + num(sy(v) + 4) +
               "\" text-anchor=\"end\" font-size=\"10\">" + xml_escape(format_float(v)) + "</text>\n";
    }
    const std::size_t label_every = std::max<std::size_t>(1, pts.size() / 20);
    for (std::size_t i = 0; i < pts.size(); i += label_every) {
        svg += "<text class=\"tick\" x=\"" + num(sx(i)) + "\" y=\"" + num(bottom + 14) +
               "\" text-anchor=\"middle\" font-size=\"10\">" + xml_escape(pts[i].x.canonical_text()) + "</text>\n";
    }

    if (spec.kind == PlotKind::Line || spec.kind == PlotKind::LineMarker) {
        svg += "<polyline class=\"series\" fill=\"none\" stroke=\"#1f77b4\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i > 0) svg += ' ';
            svg += num(sx(i)) + "," + num(sy(pts[i].y));
        }
        svg += "\"/>\n";
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string data = " data-x=\"" + xml_escape(pts[i].x.canonical_text()) + "\" data-y=\"" +
                                 full(pts[i].y) + "\"";
        switch (spec.kind) {
            case PlotKind::Bar: {
                double y0 = sy(0.0), y1 = sy(pts[i].y);
                svg += "<rect class=\"mark bar\" x=\"" + num(sx(i) - slot * 0.4) + "\" y=\"" + num(std::min(y0, y1)) +
                       "\" width=\"" + num(slot * 0.8) + "\" height=\"" + num(std::abs(y1 - y0)) +
                       "\" fill=\"#1f77b4\"" + data + "/>\n";
                break;
            }
            case PlotKind::Line:
                svg += "<circle class=\"mark vertex\" cx=\"" + num(sx(i)) + "\" cy=\"" + num(sy(pts[i].y)) +
                       "\" r=\"0\"" + data + "/>\n";
                break;
            case PlotKind::LineMarker:
            case PlotKind::Scatter:
                svg += "<circle class=\"mark marker\" cx=\"" + num(sx(i)) + "\" cy=\"" + num(sy(pts[i].y)) +
                       "\" r=\"4\" fill=\"#1f77b4\"" + data + "/>\n";
                break;
            case PlotKind::Pie:
                break;
        }
    }
    svg += "<text class=\"x-label\" x=\"" + num((left + right) / 2) + "\" y=\"" + num(height - 16.0) +
           "\" text-anchor=\"middle\">" + xml_escape(spec.x_label) + "</text>\n";
    svg += "<text class=\"y-label\" x=\"16\" y=\"" + num((top + bottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num((top + bottom) / 2) + ")\">" + xml_escape(spec.y_label) + "</text>\n";
}

}  // namespace

std::string_view to_string(PlotKind kind) noexcept {
    switch (kind) {
        case PlotKind::Bar:        return "bar";
        case PlotKind::Line:       return "line";
        case PlotKind::LineMarker: return "line_marker";
        case PlotKind::Scatter:    return "scatter";
        case PlotKind::Pie:        return "pie";
    }
    return "bar";
}

PlotKind parse_plot_kind(std::string_view text) {
    if (text == "bar") return PlotKind::Bar;
    if (text == "line") return PlotKind::Line;
    if (text == "line_marker" || text == "line+marker" || text == "line-marker") return PlotKind::LineMarker;
    if (text == "scatter") return PlotKind::Scatter;
    if (text == "pie") return PlotKind::Pie;
    throw Error(ErrorCode::InvalidArgument, "unknown plot kind '" + std::string(text) + "'");
}

PlotSpec build_plot(const Cube& cube, const QueryState& state, std::string_view x, std::string_view y, PlotKind kind,
                    bool sorted, ExecMode mode) {
    const ColumnMeta& x_meta = cube.column_by_name(x);
    const ColumnMeta& y_meta = cube.column_by_name(y);
    if (y_meta.kind != ColumnKind::Measure) {
        throw Error(ErrorCode::NotAMeasure, "'" + y_meta.name + "' is a dimension");
    }
    GroupPlan plan;
    plan.measure = y_meta.index;
    plan.group_by = {x_meta.index};
    plan.filters = state.filters();
    AggregateTable table = aggregate(cube, plan, mode);
    if (table.rows.empty()) {
        throw Error(ErrorCode::EmptyPlot, "no rows remain after filtering");
    }

    PlotSpec spec;
    spec.kind = kind;
    spec.x_label = x_meta.name;
    spec.y_label = y_meta.name;
    spec.sorted = sorted;
    spec.points.reserve(table.rows.size());
    for (auto& row : table.rows) {
        spec.points.push_back({std::move(row.key.front()), row.sum});
    }
    if (kind == PlotKind::Pie) {
        bool any_positive = false;
        for (const auto& p : spec.points) {
            if (p.y < 0.0) {
                throw Error(ErrorCode::NegativePieValue,
                            "'" + p.x.canonical_text() + "' sums to " + format_float(p.y));
            }
            any_positive = any_positive || p.y > 0.0;
        }
        if (!any_positive) {
            throw Error(ErrorCode::EmptyPlot, "every pie value is zero");
        }
    }
    if (sorted) {
        std::stable_sort(spec.points.begin(), spec.points.end(),
                         [](const PlotPoint& a, const PlotPoint& b) { return x_less(a.x, b.x); });
    }
    return spec;
}

std::string render_svg(const PlotSpec& spec, int width, int height) {
    if (spec.points.empty() || width <= 0 || height <= 0) {
        throw Error(ErrorCode::RenderFailure, "nothing to draw or non-positive canvas size");
    }
    std::string svg;
    svg.reserve(1024 + spec.points.size() * 160);
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
           "\" data-kind=\"" + std::string(to_string(spec.kind)) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (spec.kind == PlotKind::Pie) {
        render_pie(spec, width, height, svg);
    } else {
        render_axes(spec, width, height, svg);
    }
    svg += "</svg>\n";
    return svg;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        std::uint32_t n = (std::uint32_t{bytes[i]} << 16) | (std::uint32_t{bytes[i + 1]} << 8) | bytes[i + 2];
        out += kAlphabet[(n >> 18) & 63];
        out += kAlphabet[(n >> 12) & 63];
        out += kAlphabet[(n >> 6) & 63];
        out += kAlphabet[n & 63];
    }
    if (std::size_t rest = bytes.size() - i; rest > 0) {
        std::uint32_t n = std::uint32_t{bytes[i]} << 16;
        if (rest == 2) n |= std::uint32_t{bytes[i + 1]} << 8;
        out += kAlphabet[(n >> 18) & 63];
        out += kAlphabet[(n >> 12) & 63];
        out += rest == 2 ? kAlphabet[(n >> 6) & 63] : '=';
        out += '=';
    }
    return out;
}

std::string base64_encode(std::string_view bytes) {
    return base64_encode(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::string html_img_tag(std::string_view image, std::string_view media_type) {
    if (image.empty()) {
        throw Error(ErrorCode::InvalidArgument, "image is empty");
    }
    return "<img src=\"data:" + std::string(media_type) + ";base64," + base64_encode(image) + "\" />";
}

}  // namespace olapcube
