#include "commands.hpp"

#include <fstream>
#include <ostream>

#include "olapcube/bench.hpp"
#include "olapcube/error.hpp"
#include "olapcube/format.hpp"
#include "olapcube/ingest.hpp"
#include "olapcube/json.hpp"
#include "olapcube/query_state.hpp"

namespace olapcube::cli {
namespace {

ExecMode parse_mode(const std::string& mode, std::size_t workers) {
    if (mode == "serial") return ExecMode::serial();
    if (mode == "parallel") return ExecMode::parallel(workers);
    throw Error(ErrorCode::InvalidArgument, "mode must be serial or parallel, got '" + mode + "'");
}

}  // namespace

int run_query(const QueryArgs& args, std::ostream& out, std::ostream& err) {
    std::optional<Cube> loaded;
    try {
        loaded.emplace(load_csv_file(args.file));
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIngest;
    }
    const Cube& cube = *loaded;
    try {
        QueryState state = QueryState::create(cube, args.measure);
        for (const auto& d : args.drilldowns) state = state.with_drilldown(d);
        for (const auto& cut : args.cuts) {
            auto eq = cut.find('=');
            if (eq == std::string::npos) {
                throw Error(ErrorCode::InvalidArgument, "cut '" + cut + "' is not of the form col=value");
            }
            state = state.with_filter(cut.substr(0, eq), cut.substr(eq + 1));
        }
        AggregateTable table = evaluate(cube, state, parse_mode(args.mode, args.workers));
        if (args.out == "json") {
            out << to_json(table).dump(2) << '\n';
        } else if (args.out == "table") {
            out << render_aggregate_table(table);
        } else {
            throw Error(ErrorCode::InvalidArgument, "--out must be table or json");
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitQuery;
    }
}

int run_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
    std::optional<Cube> cube;
    try {
        if (args.file) {
            cube.emplace(load_csv_file(*args.file));
        } else if (args.synthetic_rows > 0) {
            cube.emplace(generate_synthetic(args.synthetic_rows, args.seed));
        } else {
            err << "error: give a CSV file or --synthetic ROWS\n";
            return kExitUsage;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIngest;
    }
    try {
        std::vector<ExecMode> modes;
        for (const auto& m : args.modes) modes.push_back(parse_mode(m, args.workers));
        BenchReport report = run_benchmark(*cube, modes, args.trials);
        out << render_bench_table(report);
        if (args.out) {
            std::ofstream file(*args.out);
            if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + *args.out + "'");
            file << to_json(report).dump(2) << '\n';
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitQuery;
    }
}

}  // namespace olapcube::cli
