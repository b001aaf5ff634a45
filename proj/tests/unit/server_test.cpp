#include <doctest.h>

#include <httplib.h>

#include <filesystem>
#include <future>
#include <thread>

#include "base64_oracle.hpp"
#include "olapcube/bench.hpp"
#include "olapcube/error.hpp"
#include "olapcube/ingest.hpp"
#include "olapcube/json.hpp"
#include "olapcube/server.hpp"

using namespace olapcube;
using nlohmann::json;

namespace {

const char* kLedger =
    "Category,Line Item,Subcategory Code,Agency,Fiscal Year,Amount (US$-Millions),Note\n"
    "Assets,Deposits,dfb,Treasury,2010,1000,a\n"
    "Assets,Deposits,dfb,Treasury,2009,2380,b\n"
    "Equity,Owners,oe,Treasury,2009,-1683,c\n"
    "Assets,Loans,dfb,Commerce,2010,581,d\n";

class LiveServer {
public:
    explicit LiveServer(ServerConfig config = {}) : server_(with_any_port(std::move(config))) {
        port_ = server_.bind();
        thread_ = std::jthread([this] { server_.listen(); });
        server_.wait_until_ready();
    }
    ~LiveServer() { server_.stop(); }

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(30, 0);
        return c;
    }
    Server& server() { return server_; }

private:
    static ServerConfig with_any_port(ServerConfig c) {
        c.host = "127.0.0.1";
        c.port = 0;
        return c;
    }
    Server server_;
    int port_ = 0;
    std::jthread thread_;
};

std::string upload(httplib::Client& c, const std::string& csv, const std::string& name = "ledger.csv") {
    auto res = c.Post("/api/datasets?name=" + name, csv, "text/csv");
    REQUIRE(res);
    REQUIRE(res->status == 201);
    return json::parse(res->body)["id"];
}

std::string encode(const std::string& s) { return httplib::detail::encode_query_param(s); }

}  // namespace

TEST_SUITE("server helpers") {
    TEST_CASE("cut and list parsing") {
        auto cuts = parse_cut("Fiscal Year:2009|Category:Assets|Time:12:30");
        REQUIRE(cuts.size() == 3);
        CHECK(cuts[0] == Filter{"Fiscal Year", "2009"});
        CHECK(cuts[2] == Filter{"Time", "12:30"});
        CHECK(parse_cut("").empty());
        CHECK_THROWS_AS(parse_cut("novalue"), Error);
        CHECK(split_pipe_list("a|b c|d") == std::vector<std::string>{"a", "b c", "d"});
        CHECK(split_pipe_list("").empty());
    }

    TEST_CASE("bind address") {
        ServerConfig c;
        parse_bind_address("0.0.0.0:9000", c);
        CHECK(c.host == "0.0.0.0");
        CHECK(c.port == 9000);
        parse_bind_address(":81", c);
        CHECK(c.port == 81);
        CHECK_THROWS_AS(parse_bind_address("host:99999", c), Error);
    }

    TEST_CASE("registry ids are unique and path-free") {
        DatasetRegistry reg;
        auto cube = std::make_shared<const Cube>(load_csv("a,b\n1,2\n"));
        std::string a = reg.add(cube), b = reg.add(cube);
        CHECK(a != b);
        CHECK(a.find('/') == std::string::npos);
        CHECK(reg.list().size() == 2);
        CHECK(reg.remove(a));
        CHECK_FALSE(reg.remove(a));
        CHECK(reg.find(a) == nullptr);
    }
}

TEST_SUITE("server") {
    TEST_CASE("upload, list, fetch, delete") {
        LiveServer live;
        auto c = live.client();
        auto res = c.Post("/api/datasets?name=ledger.csv", kLedger, "text/csv");
        REQUIRE(res);
        CHECK(res->status == 201);
        json handle = json::parse(res->body);
        CHECK(handle["row_count"] == 4);
        CHECK(handle["column_count"] == 7);
        CHECK(handle["source_name"] == "ledger.csv");
        CHECK(handle["columns"][5]["kind"] == "measure");
        CHECK(handle["columns"][0]["kind"] == "dimension");
        std::string id = handle["id"];

        auto list = c.Get("/api/datasets");
        REQUIRE(list);
        CHECK(json::parse(list->body).size() == 1);
        CHECK(c.Get("/api/datasets/" + id)->status == 200);
        CHECK(c.Delete("/api/datasets/" + id)->status == 204);
        auto gone = c.Delete("/api/datasets/" + id);
        CHECK(gone->status == 404);
        CHECK(json::parse(gone->body)["error"] == "UnknownDataset");
        CHECK(c.Get("/api/datasets/" + id + "/facts")->status == 404);
    }

    TEST_CASE("header-only and ragged uploads") {
        LiveServer live;
        auto c = live.client();
        auto empty = c.Post("/api/datasets", "a,b\n", "text/csv");
        REQUIRE(empty->status == 201);
        CHECK(json::parse(empty->body)["row_count"] == 0);
        auto ragged = c.Post("/api/datasets", "a,b\n1,2\n3\n", "text/csv");
        REQUIRE(ragged->status == 400);
        json err = json::parse(ragged->body);
        CHECK(err["error"] == "RaggedRow");
        CHECK(err["detail"].get<std::string>().find("line 3") != std::string::npos);
        CHECK(json::parse(c.Post("/api/datasets", "", "text/csv")->body)["error"] == "EmptyInput");
        CHECK(json::parse(c.Post("/api/datasets", "a\n\"x\n", "text/csv")->body)["error"] == "MalformedCsv");
    }

    TEST_CASE("multipart upload takes the file name") {
        LiveServer live;
        auto c = live.client();
        httplib::MultipartFormDataItems items = {{"file", kLedger, "books.csv", "text/csv"}};
        auto res = c.Post("/api/datasets", items);
        REQUIRE(res->status == 201);
        CHECK(json::parse(res->body)["source_name"] == "books.csv");
    }

    TEST_CASE("upload size limit") {
        ServerConfig config;
        config.max_upload_bytes = 64;
        LiveServer live(config);
        auto c = live.client();
        auto res = c.Post("/api/datasets", std::string(kLedger), "text/csv");
        REQUIRE(res);
        CHECK(res->status == 413);
    }

    TEST_CASE("facts paging") {
        LiveServer live;
        auto c = live.client();
        std::string id = upload(c, kLedger);
        json all = json::parse(c.Get("/api/datasets/" + id + "/facts")->body);
        CHECK(all["total"] == 4);
        CHECK(all["rows"].size() == 4);
        CHECK(all["rows"][2][5] == -1683);
        CHECK(all["schema"].size() == 7);
        json page = json::parse(c.Get("/api/datasets/" + id + "/facts?offset=1&limit=2")->body);
        CHECK(page["rows"].size() == 2);
        CHECK(page["rows"][0][4] == 2009);
        CHECK(json::parse(c.Get("/api/datasets/" + id + "/facts?offset=4")->body)["rows"].empty());
        auto bad = c.Get("/api/datasets/" + id + "/facts?offset=5");
        CHECK(bad->status == 400);
        CHECK(json::parse(bad->body)["error"] == "OffsetOutOfRange");
    }

    TEST_CASE("aggregate matches the in-process evaluation") {
        LiveServer live;
        auto c = live.client();
        std::string id = upload(c, kLedger);
        Cube cube = load_csv(kLedger, {}, "ledger.csv");
        QueryState s = QueryState::create(cube, "Amount (US$-Millions)")
                           .with_drilldown("Category")
                           .with_drilldown("Subcategory Code")
                           .with_drilldown("Fiscal Year")
                           .with_filter("Fiscal Year", "2010");
        for (std::string mode : {"serial", "parallel"}) {
            auto res = c.Get("/api/datasets/" + id + "/aggregate?measure=" + encode("Amount (US$-Millions)") +
                             "&drilldown=" + encode("Category|Subcategory Code|Fiscal Year") +
                             "&cut=" + encode("Fiscal Year:2010") + "&mode=" + mode);
            REQUIRE(res->status == 200);
            json body = json::parse(res->body);
            CHECK(body["elapsed_seconds"].get<double>() >= 0.0);
            body.erase("elapsed_seconds");
            CHECK(body == to_json(evaluate(cube, s)));
            CHECK(body["rows"][0]["key"] == json::array({"Assets", "dfb", "2010"}));
            CHECK(body["rows"][0]["sum"] == 1581.0);
        }
    }

    TEST_CASE("identical requests give byte-identical bodies apart from timing") {
        LiveServer live;
        auto c = live.client();
        std::string id = upload(c, kLedger);
        std::string path = "/api/datasets/" + id + "/aggregate?measure=" + encode("Amount (US$-Millions)") +
                           "&drilldown=Category";
        auto strip = [](std::string body) {
            json j = json::parse(body);
            j.erase("elapsed_seconds");
            return j.dump();
        };
        CHECK(strip(c.Get(path)->body) == strip(c.Get(path)->body));
        std::string facts = "/api/datasets/" + id + "/facts";
        CHECK(c.Get(facts)->body == c.Get(facts)->body);
    }

    TEST_CASE("invalid states are 400 with the error name") {
        LiveServer live;
        auto c = live.client();
        std::string id = upload(c, kLedger);
        std::string base = "/api/datasets/" + id + "/aggregate?measure=";
        auto name_of = [&](const std::string& path) {
            auto res = c.Get(path);
            REQUIRE(res);
            CHECK(res->status == 400);
            return json::parse(res->body)["error"].get<std::string>();
        };
        CHECK(name_of(base + encode("Amount (US$-Millions)") + "&cut=" + encode("Fiscal Year:2009")) == "NotDrilled");
        CHECK(name_of(base + "Category") == "NotAMeasure");
        CHECK(name_of(base + "Nope") == "UnknownColumn");
        CHECK(name_of(base + encode("Amount (US$-Millions)") + "&drilldown=Category|Category") == "AlreadyDrilled");
        CHECK(name_of(base + encode("Amount (US$-Millions)") + "&mode=turbo") == "InvalidArgument");
        CHECK(name_of("/api/datasets/" + id + "/aggregate") == "InvalidArgument");
        CHECK(c.Get("/api/datasets/nope/aggregate?measure=x")->status == 404);
    }

    TEST_CASE("plot formats") {
        LiveServer live;
        auto c = live.client();
        std::string id = upload(c, kLedger);
        std::string base = "/api/datasets/" + id + "/plot?x=" + encode("Fiscal Year") + "&y=" +
                           encode("Amount (US$-Millions)") + "&kind=scatter&sorted=true";
        auto spec = c.Get(base + "&format=spec");
        REQUIRE(spec->status == 200);
        json j = json::parse(spec->body);
        CHECK(j["x_label"] == "Fiscal Year");
        CHECK(j["points"][0][0] == "2009");
        CHECK(j["sorted"] == true);

        auto svg = c.Get(base + "&format=svg");
        REQUIRE(svg->status == 200);
        CHECK(svg->get_header_value("Content-Type") == "image/svg+xml");
        CHECK(svg->body.find("<svg") != std::string::npos);

        auto tag = c.Get(base + "&format=img-tag");
        REQUIRE(tag->status == 200);
        CHECK(tag->get_header_value("Content-Type").rfind("text/html", 0) == 0);
        const std::string prefix = "<img src=\"data:image/svg+xml;base64,";
        REQUIRE(tag->body.rfind(prefix, 0) == 0);
        std::string payload = tag->body.substr(prefix.size(), tag->body.size() - prefix.size() - 4);
        CHECK(olapcube::testing::base64_decode(payload) == svg->body);

        auto filtered = c.Get(base + "&drilldown=Category&cut=Category:Equity&format=spec");
        REQUIRE(filtered->status == 200);
        CHECK(json::parse(filtered->body)["points"].size() == 1);

        auto pie = c.Get("/api/datasets/" + id + "/plot?x=Agency&y=" + encode("Amount (US$-Millions)") + "&kind=pie");
        CHECK(pie->status == 200);
        auto negative = c.Get("/api/datasets/" + id + "/plot?x=Agency&y=" + encode("Amount (US$-Millions)") +
                              "&kind=pie&drilldown=Category&cut=Category:Equity");
        CHECK(json::parse(negative->body)["error"] == "NegativePieValue");
        auto empty = c.Get(base + "&drilldown=Category&cut=Category:None");
        CHECK(json::parse(empty->body)["error"] == "EmptyPlot");
        CHECK(json::parse(c.Get(base + "&format=gif")->body)["error"] == "InvalidArgument");
        CHECK(json::parse(c.Get("/api/datasets/" + id + "/plot?x=Agency&y=Category")->body)["error"] == "NotAMeasure");
    }

    TEST_CASE("CORS headers when configured") {
        ServerConfig config;
        config.cors_origin = "http://localhost:5173";
        LiveServer live(config);
        auto c = live.client();
        auto res = c.Get("/api/datasets");
        CHECK(res->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
        auto pre = c.Options("/api/datasets");
        CHECK(pre->status == 204);
    }

    TEST_CASE("spill directory mirrors uploads") {
        auto dir = std::filesystem::temp_directory_path() / ("olapcube-spill-" + std::to_string(::getpid()));
        ServerConfig config;
        config.spill_dir = dir;
        {
            LiveServer live(config);
            auto c = live.client();
            std::string id = upload(c, kLedger);
            CHECK(std::filesystem::exists(dir / (id + ".csv")));
            c.Delete("/api/datasets/" + id);
            CHECK_FALSE(std::filesystem::exists(dir / (id + ".csv")));
        }
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("concurrent requests on one dataset") {
        LiveServer live;
        auto c = live.client();
        std::string csv = to_csv(generate_synthetic(20000, 5));
        std::string id = upload(c, csv);
        std::string path = "/api/datasets/" + id + "/aggregate?measure=" + encode("Amount (US$-Millions)") +
                           "&drilldown=" + encode("Category|Fiscal Year");
        std::vector<std::future<std::string>> results;
        for (int i = 0; i < 8; ++i) {
            results.push_back(std::async(std::launch::async, [&] {
                auto cl = live.client();
                auto res = cl.Get(path);
                json j = json::parse(res->body);
                j.erase("elapsed_seconds");
                return j.dump();
            }));
        }
        std::string first = results.front().get();
        for (std::size_t i = 1; i < results.size(); ++i) CHECK(results[i].get() == first);
    }
}
