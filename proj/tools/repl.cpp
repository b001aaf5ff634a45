#include "repl.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "olapcube/error.hpp"
#include "olapcube/format.hpp"
#include "olapcube/plot.hpp"
#include "olapcube/query_state.hpp"

namespace olapcube::cli {
namespace {

constexpr std::string_view kHelp =
    "commands:\n"
    "  facts [offset limit]            show raw rows (default: all)\n"
    "  measure <col>                   change the aggregated column\n"
    "  drill <col> | undrill <col>     add or remove a drill-down\n"
    "  filter <col> <value>            keep rows where a drilled column equals value\n"
    "  unfilter <col> <value>          remove one filter\n"
    "  clearfilters                    remove all filters\n"
    "  show                            print the current aggregate table\n"
    "  plot <x> <y> <kind> [sorted] <out.svg>\n"
    "                                  kinds: bar line line_marker scatter pie\n"
    "  quit\n"
    "quote names containing spaces: drill \"Subcategory Code\"\n";

std::size_t to_index(const std::string& text) {
    std::int64_t v = 0;
    if (!parse_int64(text, v) || v < 0) {
        throw Error(ErrorCode::InvalidArgument, "'" + text + "' is not a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

void expect_args(const std::vector<std::string>& args, std::size_t lo, std::size_t hi, std::string_view usage) {
    if (args.size() - 1 < lo || args.size() - 1 > hi) {
        throw Error(ErrorCode::InvalidArgument, "usage: " + std::string(usage));
    }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> words;
    std::string current;
    bool in_word = false;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
            in_word = true;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            if (in_word) {
                words.push_back(std::move(current));
                current.clear();
                in_word = false;
            }
        } else {
            current += c;
            in_word = true;
        }
    }
    if (quoted) {
        throw Error(ErrorCode::InvalidArgument, "unterminated quote");
    }
    if (in_word) words.push_back(std::move(current));
    return words;
}

int run_repl(const Cube& cube, std::istream& in, std::ostream& out, const ReplOptions& options) {
    std::optional<QueryState> state;
    std::string initial;
    if (options.measure) {
        initial = *options.measure;
    } else {
        for (const auto& meta : cube.schema()) {
            if (meta.kind == ColumnKind::Measure) {
                initial = meta.name;
                break;
            }
        }
    }
    out << "Loaded " << cube.source_name() << ": " << cube.row_count() << " rows, " << cube.column_count()
        << " columns\n";
    for (const auto& meta : cube.schema()) {
        out << "  " << meta.index + 1 << ". " << meta.name << " (" << to_string(meta.kind) << ", "
            << to_string(meta.value_type) << ")\n";
    }
    if (!initial.empty()) {
        state = QueryState::create(cube, initial);
        out << render_aggregate_table(evaluate(cube, *state, options.mode));
    } else {
        out << "no measure column; use `measure <col>`\n";
    }

    auto require_state = [&]() -> const QueryState& {
        if (!state) throw Error(ErrorCode::NotAMeasure, "no measure selected; use `measure <col>`");
        return *state;
    };
    auto update = [&](QueryState next) {
        state = std::move(next);
        out << render_aggregate_table(evaluate(cube, *state, options.mode));
    };

    std::string line;
    while (true) {
        if (options.show_prompt) out << "olapcube> " << std::flush;
        if (!std::getline(in, line)) break;
        try {
            auto args = tokenize(line);
            if (args.empty() || args.front().starts_with('#')) continue;
            const std::string& cmd = args.front();
            if (cmd == "quit" || cmd == "exit") {
                return 0;
            } else if (cmd == "help") {
                out << kHelp;
            } else if (cmd == "facts") {
                expect_args(args, 0, 2, "facts [offset limit]");
                std::size_t offset = args.size() > 1 ? to_index(args[1]) : 0;
                std::optional<std::size_t> limit;
                if (args.size() > 2) limit = to_index(args[2]);
                out << render_fact_table(fact_table(cube, offset, limit));
            } else if (cmd == "measure") {
                expect_args(args, 1, 1, "measure <col>");
                update(state ? state->with_measure(args[1]) : QueryState::create(cube, args[1]));
            } else if (cmd == "drill") {
                expect_args(args, 1, 1, "drill <col>");
                update(require_state().with_drilldown(args[1]));
            } else if (cmd == "undrill") {
                expect_args(args, 1, 1, "undrill <col>");
                update(require_state().without_drilldown(args[1]));
            } else if (cmd == "filter") {
                expect_args(args, 2, 2, "filter <col> <value>");
                update(require_state().with_filter(args[1], args[2]));
            } else if (cmd == "unfilter") {
                expect_args(args, 2, 2, "unfilter <col> <value>");
                update(require_state().without_filter(args[1], args[2]));
            } else if (cmd == "clearfilters") {
                expect_args(args, 0, 0, "clearfilters");
                update(require_state().without_filters());
            } else if (cmd == "show") {
                out << render_aggregate_table(evaluate(cube, require_state(), options.mode));
            } else if (cmd == "plot") {
                expect_args(args, 4, 5, "plot <x> <y> <kind> [sorted] <out.svg>");
                bool sorted = args.size() == 6;
                if (sorted && args[4] != "sorted") {
                    throw Error(ErrorCode::InvalidArgument, "expected 'sorted', got '" + args[4] + "'");
                }
                const QueryState& s = require_state();
                PlotSpec spec = build_plot(cube, s, args[1], args[2], parse_plot_kind(args[3]), sorted, options.mode);
                const std::string& path = args.back();
                std::ofstream file(path, std::ios::binary);
                if (!file) throw Error(ErrorCode::RenderFailure, "cannot write '" + path + "'");
                file << render_svg(spec);
                out << "wrote " << path << " (" << spec.points.size() << " points)\n";
            } else {
                throw Error(ErrorCode::InvalidArgument, "unknown command '" + cmd + "' (try `help`)");
            }
        } catch (const Error& e) {
            out << "error: " << e.what() << '\n';
        }
    }
    return 0;
}

}  // namespace olapcube::cli
