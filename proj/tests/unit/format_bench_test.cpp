#include <doctest.h>

#include <set>

#include "olapcube/bench.hpp"
#include "olapcube/error.hpp"
#include "olapcube/format.hpp"
#include "olapcube/ingest.hpp"

using namespace olapcube;

TEST_SUITE("format") {
    TEST_CASE("summary layout without drilldowns") {
        AggregateTable t;
        t.measure_name = "Amount (US$-Millions)";
        t.measure_type = ValueType::Integer64;
        t.total_sum = 558430000.0;
        t.total_count = 31000;
        std::string text = render_aggregate_table(t);
        CHECK(text ==
              "Summary  Sum of All \xE2\x80\x9C" "Amount (US$-Millions)\xE2\x80\x9D  Record Count\n"
              "Summary  558430000.0                         31000\n");
    }

    TEST_CASE("drilled layout ends with a summary row") {
        Cube cube = load_csv("Category,Fiscal Year,Amount\nAssets,2010,1581\nEquity,2009,-1683\n");
        auto t = evaluate(cube, QueryState::create(cube, "Amount").with_drilldown("Category").with_drilldown("Fiscal Year"));
        CHECK(render_aggregate_table(t) ==
              "Category  Fiscal Year  Amount  Record Count\n"
              "Assets    2010         1581    1\n"
              "Equity    2009         -1683   1\n"
              "Summary                -102.0  2\n");
    }

    TEST_CASE("number display") {
        CHECK(format_sum(1581.0, ValueType::Integer64) == "1581");
        CHECK(format_sum(1581.0, ValueType::Float64) == "1581.0");
        CHECK(format_sum(2.5, ValueType::Float64) == "2.5");
        CHECK(format_sum(-1683.0, ValueType::Integer64) == "-1683");
    }

    TEST_CASE("fact table rendering") {
        Cube cube = load_csv("a,b\nx,1\n,2.5\n");
        CHECK(render_fact_table(fact_table(cube)) == "a  b\nx  1.0\n   2.5\n");
    }
}

TEST_SUITE("bench") {
    TEST_CASE("generate_synthetic shape and determinism") {
        Cube a = generate_synthetic(5000, 17);
        Cube b = generate_synthetic(5000, 17);
        Cube c = generate_synthetic(5000, 18);
        REQUIRE(a.column_count() == 7);
        CHECK(a.row_count() == 5000);
        CHECK(to_csv(a) == to_csv(b));
        CHECK(to_csv(a) != to_csv(c));
        CHECK(a.column(0).dictionary().size() == 5);
        CHECK(a.column(1).dictionary().size() == 30);
        CHECK(a.column(2).dictionary().size() == 10);
        std::set<std::int64_t> years(a.column(4).integers().begin(), a.column(4).integers().end());
        CHECK(years.size() == 10);
        CHECK(*years.begin() == 2005);
        CHECK(*years.rbegin() == 2014);
        CHECK(a.schema()[5].value_type == ValueType::Integer64);
        CHECK(a.schema()[3].value_type == ValueType::Float64);
        CHECK(a.schema()[6].value_type == ValueType::Float64);
        // The CSV form infers back to the same schema.
        CHECK(load_csv(to_csv(a)).schema() == a.schema());
    }

    TEST_CASE("one trial: statistics collapse to the single observation") {
        Cube cube = generate_synthetic(3000, 1);
        ModeReport r = run_protocol(cube, ExecMode::serial(), 1);
        for (const auto& s : r.steps) {
            CHECK(s.mean == s.min);
            CHECK(s.mean == s.max);
            CHECK(s.stddev == 0.0);
            CHECK(s.mean >= 0.0);
        }
    }

    TEST_CASE("report total is the sum of step means; outputs stable across trials and modes") {
        Cube cube = generate_synthetic(8000, 2);
        std::vector<ExecMode> modes = {ExecMode::serial(), ExecMode::parallel(4)};
        BenchReport report = run_benchmark(cube, modes, 3);
        REQUIRE(report.modes.size() == 2);
        for (const auto& m : report.modes) {
            double sum = 0.0;
            for (const auto& s : m.steps) sum += s.mean;
            CHECK(m.total() == sum);
            CHECK(m.outputs_identical_across_trials);
        }
        CHECK(report.outputs_identical_across_modes);
        auto j = to_json(report);
        CHECK(j["trials"] == 3);
        CHECK(j["modes"][1]["mode"] == "parallel");
        CHECK(j["modes"][1]["workers"] == 4);
        CHECK(j["modes"][0]["steps"].size() == 6);
        CHECK(j["dataset"]["rows"] == 8000);
        std::string table = render_bench_table(report);
        CHECK(table.find("Step 6") != std::string::npos);
        CHECK(table.find("Total") != std::string::npos);
    }

    TEST_CASE("protocol outputs follow the step sequence") {
        Cube cube = generate_synthetic(2000, 4);
        auto out = protocol_outputs(cube, ExecMode::serial());
        CHECK(out[0].rfind("Category ", 0) == 0);
        CHECK(out[0].find(" Subcategory Code ") != std::string::npos);
        CHECK(out[1].find("Sum of All") != std::string::npos);
        // Three tables, one per drilldown.
        std::size_t summaries = 0;
        for (auto pos = out[2].find("\nSummary"); pos != std::string::npos; pos = out[2].find("\nSummary", pos + 1)) ++summaries;
        CHECK(summaries == 3);
        std::size_t last = out[2].rfind("\nCategory ");
        REQUIRE(last != std::string::npos);
        std::string final_table = out[2].substr(last + 1);
        CHECK(final_table.find("Subcategory Code") != std::string::npos);
        CHECK(final_table.find("Fiscal Year") != std::string::npos);
        CHECK(out[3] != out[4]);
        CHECK(out[3].find("  2009  ") != std::string::npos);
        CHECK(out[4] == final_table);
        CHECK(out[5].find("data-kind=\"scatter\"") != std::string::npos);
    }

    TEST_CASE("narrow cubes are unsupported") {
        Cube narrow = load_csv("a,b,c\nx,1,2\n");
        try {
            run_protocol(narrow, ExecMode::serial(), 1);
            FAIL("expected ProtocolUnsupported");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ProtocolUnsupported);
        }
        CHECK_THROWS_AS(run_protocol(generate_synthetic(10, 1), ExecMode::serial(), 0), Error);
    }
}
