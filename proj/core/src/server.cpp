#include "olapcube/server.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>

#include "olapcube/engine.hpp"
#include "olapcube/error.hpp"
#include "olapcube/ingest.hpp"
#include "olapcube/json.hpp"
#include "olapcube/plot.hpp"

namespace olapcube {
namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json";
constexpr const char* kDatasetPath = R"(/api/datasets/([A-Za-z0-9_-]+))";

struct UnknownDataset {
    std::string id;
};

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view name, std::string_view detail) {
    send_json(res, status, {{"error", name}, {"detail", detail}});
}

std::string param(const httplib::Request& req, const char* key, std::string fallback = {}) {
    return req.has_param(key) ? req.get_param_value(key) : fallback;
}

std::size_t parse_count(const std::string& text, const char* what) {
    std::int64_t v = 0;
    if (!parse_int64(text, v) || v < 0) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

bool parse_flag(const std::string& text) {
    if (text.empty() || text == "false" || text == "0" || text == "no") return false;
    if (text == "true" || text == "1" || text == "yes") return true;
    throw Error(ErrorCode::InvalidArgument, "expected a boolean, got '" + text + "'");
}

json handle_json(const std::string& id, const Cube& cube) {
    return {{"id", id},
            {"source_name", cube.source_name()},
            {"row_count", cube.row_count()},
            {"column_count", cube.column_count()},
            {"columns", to_json(cube.schema())}};
}

std::string random_suffix() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s;
    std::uint64_t bits = rng();
    for (int i = 0; i < 10; ++i, bits >>= 4) s += kHex[bits & 15];
    return s;
}

}  // namespace

void parse_bind_address(std::string_view bind, ServerConfig& config) {
    auto colon = bind.rfind(':');
    std::string_view host = colon == std::string_view::npos ? bind : bind.substr(0, colon);
    if (colon != std::string_view::npos) {
        std::int64_t port = 0;
        if (!parse_int64(bind.substr(colon + 1), port) || port < 0 || port > 65535) {
            throw Error(ErrorCode::InvalidArgument, "invalid port in '" + std::string(bind) + "'");
        }
        config.port = static_cast<int>(port);
    }
    if (!host.empty()) config.host = std::string(host);
}

std::vector<std::string> split_pipe_list(std::string_view text) {
    std::vector<std::string> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto bar = text.find('|', start);
        out.emplace_back(text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }
    return out;
}

std::vector<Filter> parse_cut(std::string_view text) {
    std::vector<Filter> filters;
    for (const auto& pair : split_pipe_list(text)) {
        auto colon = pair.find(':');
        if (colon == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "cut '" + pair + "' is not of the form column:value");
        }
        filters.push_back({pair.substr(0, colon), pair.substr(colon + 1)});
    }
    return filters;
}

QueryState build_state(const Cube& cube, std::string_view measure, const std::vector<std::string>& drilldowns,
                       const std::vector<Filter>& cuts) {
    QueryState state = QueryState::create(cube, measure);
    for (const auto& d : drilldowns) state = state.with_drilldown(d);
    for (const auto& f : cuts) state = state.with_filter(f.column, f.value);
    return state;
}

std::string DatasetRegistry::add(std::shared_ptr<const Cube> cube) {
    std::unique_lock lock(mutex_);
    std::string id = "ds" + std::to_string(next_++) + "-" + random_suffix();
    cubes_.emplace(id, std::move(cube));
    order_.push_back(id);
    return id;
}

std::shared_ptr<const Cube> DatasetRegistry::find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = cubes_.find(id);
    return it == cubes_.end() ? nullptr : it->second;
}

std::vector<DatasetRegistry::Entry> DatasetRegistry::list() const {
    std::shared_lock lock(mutex_);
    std::vector<Entry> out;
    for (const auto& id : order_) out.push_back({id, cubes_.at(id)});
    return out;
}

bool DatasetRegistry::remove(const std::string& id) {
    std::unique_lock lock(mutex_);
    if (cubes_.erase(id) == 0) return false;
    std::erase(order_, id);
    return true;
}

struct Server::Impl {
    ServerConfig config;
    DatasetRegistry registry;
    httplib::Server http;
    int port = -1;

    explicit Impl(ServerConfig c) : config(std::move(c)) { routes(); }

    ExecMode mode_from(const httplib::Request& req) const {
        std::string mode = param(req, "mode", "parallel");
        if (mode == "serial") return ExecMode::serial();
        if (mode == "parallel") return ExecMode::parallel(config.workers);
        throw Error(ErrorCode::InvalidArgument, "mode must be serial or parallel");
    }

    std::shared_ptr<const Cube> dataset(const httplib::Request& req) const {
        std::string id = req.matches[1];
        auto cube = registry.find(id);
        if (!cube) throw UnknownDataset{id};
        return cube;
    }

    // Runs a handler, mapping engine errors to 400 and unknown ids to 404.
    template <typename F>
    httplib::Server::Handler guarded(F f) {
        return [f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
            try {
                f(req, res);
            } catch (const UnknownDataset& e) {
                send_error(res, 404, "UnknownDataset", "no dataset with id '" + e.id + "'");
            } catch (const Error& e) {
                send_error(res, 400, e.name(), e.what());
            } catch (const std::exception& e) {
                send_error(res, 500, "InternalError", e.what());
            }
        };
    }

    void upload(const httplib::Request& req, httplib::Response& res) {
        std::string name = param(req, "name", "upload.csv");
        const std::string* body = &req.body;
        httplib::MultipartFormData file;
        if (req.is_multipart_form_data()) {
            if (req.has_file("file")) {
                file = req.get_file_value("file");
            } else if (!req.files.empty()) {
                file = req.files.begin()->second;
            } else {
                throw Error(ErrorCode::EmptyInput, "multipart upload carries no file");
            }
            body = &file.content;
            if (!req.has_param("name") && !file.filename.empty()) name = file.filename;
        }
        auto cube = std::make_shared<const Cube>(load_csv(std::string_view(*body), IngestOptions{}, name));
        std::string id = registry.add(cube);
        if (config.spill_dir) {
            std::filesystem::create_directories(*config.spill_dir);
            std::ofstream(*config.spill_dir / (id + ".csv"), std::ios::binary) << *body;
        }
        send_json(res, 201, handle_json(id, *cube));
    }

    void facts(const httplib::Request& req, httplib::Response& res) {
        auto cube = dataset(req);
        std::size_t offset = parse_count(param(req, "offset", "0"), "offset");
        std::string limit_text = param(req, "limit", "100");
        std::optional<std::size_t> limit;
        if (limit_text != "all") limit = parse_count(limit_text, "limit");
        send_json(res, 200, to_json(fact_table(*cube, offset, limit)));
    }

    void aggregate_route(const httplib::Request& req, httplib::Response& res) {
        auto cube = dataset(req);
        if (!req.has_param("measure")) throw Error(ErrorCode::InvalidArgument, "measure is required");
        QueryState state = build_state(*cube, param(req, "measure"), split_pipe_list(param(req, "drilldown")),
                                       parse_cut(param(req, "cut")));
        ExecMode mode = mode_from(req);
        auto start = std::chrono::steady_clock::now();
        AggregateTable table = evaluate(*cube, state, mode);
        std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        json body = to_json(table);
        body["elapsed_seconds"] = elapsed.count();
        send_json(res, 200, body);
    }

    void plot_route(const httplib::Request& req, httplib::Response& res) {
        auto cube = dataset(req);
        if (!req.has_param("x") || !req.has_param("y")) throw Error(ErrorCode::InvalidArgument, "x and y are required");
        std::string y = param(req, "y");
        QueryState state = build_state(*cube, param(req, "measure", y), split_pipe_list(param(req, "drilldown")),
                                       parse_cut(param(req, "cut")));
        PlotKind kind = parse_plot_kind(param(req, "kind", "bar"));
        PlotSpec spec = build_plot(*cube, state, param(req, "x"), y, kind, parse_flag(param(req, "sorted")),
                                   mode_from(req));
        std::string format = param(req, "format", "spec");
        if (format == "spec") {
            send_json(res, 200, to_json(spec));
        } else if (format == "svg") {
            res.status = 200;
            res.set_content(render_svg(spec), std::string(kSvgMediaType));
        } else if (format == "img-tag") {
            res.status = 200;
            res.set_content(html_img_tag(render_svg(spec), kSvgMediaType), "text/html; charset=utf-8");
        } else {
            throw Error(ErrorCode::InvalidArgument, "format must be spec, svg or img-tag");
        }
    }

    void routes() {
        http.set_payload_max_length(config.max_upload_bytes);
        if (!config.cors_origin.empty()) {
            http.set_default_headers({{"Access-Control-Allow-Origin", config.cors_origin},
                                      {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                                      {"Access-Control-Allow-Headers", "Content-Type"}});
            http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        }
        if (config.static_dir) {
            http.set_mount_point("/", config.static_dir->string());
        }
        http.Post("/api/datasets", guarded([this](const auto& req, auto& res) { upload(req, res); }));
        http.Get("/api/datasets", guarded([this](const auto&, auto& res) {
                     json list = json::array();
                     for (const auto& e : registry.list()) list.push_back(handle_json(e.id, *e.cube));
                     send_json(res, 200, list);
                 }));
        http.Get(std::string(kDatasetPath), guarded([this](const auto& req, auto& res) {
                     auto cube = dataset(req);
                     send_json(res, 200, handle_json(req.matches[1], *cube));
                 }));
        http.Delete(std::string(kDatasetPath), guarded([this](const auto& req, auto& res) {
                        std::string id = req.matches[1];
                        if (!registry.remove(id)) throw UnknownDataset{id};
                        if (config.spill_dir) {
                            std::error_code ec;
                            std::filesystem::remove(*config.spill_dir / (id + ".csv"), ec);
                        }
                        res.status = 204;
                    }));
        http.Get(std::string(kDatasetPath) + "/facts",
                 guarded([this](const auto& req, auto& res) { facts(req, res); }));
        http.Get(std::string(kDatasetPath) + "/aggregate",
                 guarded([this](const auto& req, auto& res) { aggregate_route(req, res); }));
        http.Get(std::string(kDatasetPath) + "/plot",
                 guarded([this](const auto& req, auto& res) { plot_route(req, res); }));
        http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) {
                if (res.status == 413) {
                    send_error(res, 413, "PayloadTooLarge", "upload exceeds the configured limit");
                } else if (res.status == 404) {
                    send_error(res, 404, "NotFound", "no such route");
                }
            }
        });
    }
};

Server::Server(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Server::~Server() { stop(); }

int Server::bind() {
    if (impl_->config.port == 0) {
        impl_->port = impl_->http.bind_to_any_port(impl_->config.host);
    } else if (impl_->http.bind_to_port(impl_->config.host, impl_->config.port)) {
        impl_->port = impl_->config.port;
    }
    if (impl_->port < 0) {
        throw Error(ErrorCode::InvalidArgument,
                    "cannot bind " + impl_->config.host + ":" + std::to_string(impl_->config.port));
    }
    return impl_->port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::wait_until_ready() { impl_->http.wait_until_ready(); }

void Server::stop() {
    if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

DatasetRegistry& Server::registry() noexcept { return impl_->registry; }
const ServerConfig& Server::config() const noexcept { return impl_->config; }

}  // namespace olapcube
