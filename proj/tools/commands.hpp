#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace olapcube::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIngest = 3;
inline constexpr int kExitQuery = 4;

struct QueryArgs {
    std::string file;
    std::string measure;
    std::vector<std::string> drilldowns;
    std::vector<std::string> cuts;  ///< "col=value"
    std::string mode = "serial";
    std::size_t workers = 0;
    std::string out = "table";
};

/// One-shot evaluate. Errors go to `err` as "error: <Name>: detail".
int run_query(const QueryArgs& args, std::ostream& out, std::ostream& err);

struct BenchArgs {
    std::optional<std::string> file;
    std::size_t synthetic_rows = 0;
    std::uint64_t seed = 2020;
    std::size_t trials = 100;
    std::vector<std::string> modes{"serial", "parallel"};
    std::size_t workers = 0;
    std::optional<std::string> out;
};

int run_bench(const BenchArgs& args, std::ostream& out, std::ostream& err);

}  // namespace olapcube::cli
