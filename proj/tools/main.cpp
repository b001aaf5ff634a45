#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>
#include <unistd.h>

#include "commands.hpp"
#include "olapcube/bench.hpp"
#include "olapcube/error.hpp"
#include "olapcube/ingest.hpp"
#include "olapcube/server.hpp"
#include "repl.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        if (comma > start) out.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

const char* env_or(const char* name, const char* fallback) {
    const char* v = std::getenv(name);
    return v ? v : fallback;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace olapcube;
    namespace cli = olapcube::cli;

    CLI::App app{"olapcube: in-memory OLAP cube engine for headered CSV files"};
    app.require_subcommand(1);

    // repl
    std::string repl_file;
    std::string repl_measure;
    std::string repl_mode = "serial";
    std::size_t repl_workers = 0;
    auto* repl = app.add_subcommand("repl", "Interactive console session over one CSV file");
    repl->add_option("file", repl_file, "CSV file (first row is the header)")->required();
    repl->add_option("--measure", repl_measure, "Initial measure column (default: first numeric column)");
    repl->add_option("--mode", repl_mode, "serial or parallel")->check(CLI::IsMember({"serial", "parallel"}));
    repl->add_option("--workers", repl_workers, "Parallel workers (0 = one per CPU)");

    // query
    cli::QueryArgs query_args;
    std::string drill_list;
    auto* query = app.add_subcommand("query", "Evaluate one aggregate query and exit");
    query->add_option("file", query_args.file, "CSV file")->required();
    query->add_option("--measure", query_args.measure, "Measure column")->required();
    query->add_option("--drill", drill_list, "Comma-separated drill-down columns");
    query->add_option("--cut", query_args.cuts, "Filter col=value (repeatable)");
    query->add_option("--mode", query_args.mode, "serial or parallel")->check(CLI::IsMember({"serial", "parallel"}));
    query->add_option("--workers", query_args.workers, "Parallel workers (0 = one per CPU)");
    query->add_option("--out", query_args.out, "table or json")->check(CLI::IsMember({"table", "json"}));

    // serve
    std::string bind = env_or("OLAPCUBE_BIND", "127.0.0.1:4680");
    ServerConfig server_config;
    if (const char* w = std::getenv("OLAPCUBE_WORKERS")) server_config.workers = std::strtoull(w, nullptr, 10);
    if (const char* m = std::getenv("OLAPCUBE_MAX_UPLOAD_BYTES")) server_config.max_upload_bytes = std::strtoull(m, nullptr, 10);
    server_config.cors_origin = env_or("OLAPCUBE_CORS_ORIGIN", "");
    std::string spill_dir = env_or("OLAPCUBE_SPILL_DIR", "");
    std::string static_dir = env_or("OLAPCUBE_STATIC_DIR", "");
    auto* serve = app.add_subcommand("serve", "Serve the HTTP JSON API");
    serve->add_option("--bind", bind, "host:port (env OLAPCUBE_BIND)");
    serve->add_option("--workers", server_config.workers, "Engine workers for mode=parallel (0 = one per CPU)");
    serve->add_option("--max-upload-bytes", server_config.max_upload_bytes, "Upload size limit");
    serve->add_option("--cors-origin", server_config.cors_origin, "Allowed CORS origin (empty disables)");
    serve->add_option("--spill-dir", spill_dir, "Also write uploaded CSVs to this directory");
    serve->add_option("--static-dir", static_dir, "Serve static UI assets from this directory");

    // bench
    cli::BenchArgs bench_args;
    std::string bench_file;
    std::string bench_modes = "serial,parallel";
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Run the six-step timing protocol");
    bench->add_option("file", bench_file, "CSV file (omit with --synthetic)");
    bench->add_option("--synthetic", bench_args.synthetic_rows, "Generate a synthetic cube with this many rows");
    bench->add_option("--seed", bench_args.seed, "Seed for --synthetic");
    bench->add_option("--trials", bench_args.trials, "Trials per mode")->check(CLI::PositiveNumber);
    bench->add_option("--modes", bench_modes, "Comma-separated: serial,parallel");
    bench->add_option("--workers", bench_args.workers, "Parallel workers (0 = one per CPU)");
    bench->add_option("--out", bench_out, "Write the JSON report here");

    // generate
    std::size_t gen_rows = 31000;
    std::uint64_t gen_seed = 2020;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Write a synthetic 7-column CSV dataset");
    generate->add_option("--rows", gen_rows, "Row count")->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen_seed, "Seed");
    generate->add_option("--out", gen_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return e.get_exit_code() == 0 ? code : cli::kExitUsage;
    }

    try {
        if (*repl) {
            std::optional<Cube> cube;
            try {
                cube.emplace(load_csv_file(repl_file));
            } catch (const Error& e) {
                std::cerr << "error: " << e.what() << '\n';
                return cli::kExitIngest;
            }
            cli::ReplOptions options;
            if (!repl_measure.empty()) options.measure = repl_measure;
            options.mode = repl_mode == "parallel" ? ExecMode::parallel(repl_workers) : ExecMode::serial();
            options.show_prompt = ::isatty(STDIN_FILENO) != 0;
            try {
                return cli::run_repl(*cube, std::cin, std::cout, options);
            } catch (const Error& e) {
                std::cerr << "error: " << e.what() << '\n';
                return cli::kExitQuery;
            }
        }
        if (*query) {
            query_args.drilldowns = split_commas(drill_list);
            return cli::run_query(query_args, std::cout, std::cerr);
        }
        if (*bench) {
            if (!bench_file.empty()) bench_args.file = bench_file;
            bench_args.modes = split_commas(bench_modes);
            if (!bench_out.empty()) bench_args.out = bench_out;
            return cli::run_bench(bench_args, std::cout, std::cerr);
        }
        if (*generate) {
            std::ofstream out(gen_out, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write '" << gen_out << "'\n";
                return cli::kExitUsage;
            }
            write_csv(generate_synthetic(gen_rows, gen_seed), out);
            return cli::kExitOk;
        }
        if (*serve) {
            parse_bind_address(bind, server_config);
            if (!spill_dir.empty()) server_config.spill_dir = spill_dir;
            if (!static_dir.empty()) server_config.static_dir = static_dir;
            Server server(server_config);
            int port = server.bind();
            std::cout << "listening on http://" << server_config.host << ":" << port << std::endl;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::jthread watcher([&server](std::stop_token stop) {
                while (!stop.stop_requested() && !g_interrupted) {
                    std::this_thread::sleep_for(std::chrono::milliseconds(100));
                }
                server.stop();
            });
            server.listen();
            return cli::kExitOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitUsage;
    }
    return cli::kExitUsage;
}
