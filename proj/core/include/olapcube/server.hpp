#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "olapcube/cube.hpp"
#include "olapcube/query_state.hpp"

namespace olapcube {

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 4680;  ///< 0 picks a free port
    std::size_t max_upload_bytes = std::size_t{256} << 20;
    std::size_t workers = 0;  ///< engine workers for mode=parallel; 0 means one per logical CPU
    std::string cors_origin;  ///< empty disables CORS headers
    std::optional<std::filesystem::path> spill_dir;   ///< uploaded CSVs are also written here when set
    std::optional<std::filesystem::path> static_dir;  ///< served at "/" when set
};

/// Parses "host:port" (or ":port", or "host"). Throws Error(InvalidArgument).
void parse_bind_address(std::string_view bind, ServerConfig& config);

/// "a|b|c" -> {"a", "b", "c"}; empty input yields an empty list.
std::vector<std::string> split_pipe_list(std::string_view text);

/// "col:value|col:value" -> filters, split at the first ':' of each pair.
/// Throws Error(InvalidArgument) on a pair without ':'.
std::vector<Filter> parse_cut(std::string_view text);

/// Builds a state from a measure, drill-down list and cuts, applying each
/// step through the QueryState operations so their errors surface.
QueryState build_state(const Cube& cube, std::string_view measure, const std::vector<std::string>& drilldowns,
                       const std::vector<Filter>& cuts);

/// In-memory dataset store; the only mutable structure shared between
/// request handlers.
class DatasetRegistry {
public:
    struct Entry {
        std::string id;
        std::shared_ptr<const Cube> cube;
    };

    std::string add(std::shared_ptr<const Cube> cube);
    std::shared_ptr<const Cube> find(const std::string& id) const;
    std::vector<Entry> list() const;
    bool remove(const std::string& id);

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const Cube>> cubes_;
    std::vector<std::string> order_;
    std::size_t next_ = 1;
};

/// HTTP/1.1 JSON API over a DatasetRegistry.
class Server {
public:
    explicit Server(ServerConfig config);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds the listening socket; returns the bound port. Throws on failure.
    int bind();
    /// Serves until stop(); call bind() first.
    void listen();
    /// Blocks until listen() is accepting connections.
    void wait_until_ready();
    void stop();

    DatasetRegistry& registry() noexcept;
    const ServerConfig& config() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace olapcube
