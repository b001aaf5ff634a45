#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "olapcube/cube.hpp"
#include "olapcube/error.hpp"
#include "olapcube/ingest.hpp"

using namespace olapcube;

namespace {

const char* kLedger =
    "Category,Line Item,Subcategory Code,Agency,Fiscal Year,Amount (US$-Millions),Note\n"
    "Assets,Deposits,dfb,Treasury,2010,1581,a\n"
    "Assets,Deposits,dfb,Treasury,2009,2380,b\n"
    "Equity,Owners,oe,Treasury,2009,-1683,c\n"
    "Assets,Loans,ln,Commerce,2010,12,d\n"
    "Equity,Owners,oe,Commerce,2010,40,e\n";

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

TEST_SUITE("cell") {
    TEST_CASE("non-finite floats become null") {
        CHECK(CellValue::floating(std::numeric_limits<double>::quiet_NaN()).is_null());
        CHECK(CellValue::floating(std::numeric_limits<double>::infinity()).is_null());
        CHECK(CellValue::floating(-std::numeric_limits<double>::infinity()).is_null());
        CHECK(CellValue::floating(2.5).is_float());
    }

    TEST_CASE("canonical text") {
        CHECK(CellValue::integer(2009).canonical_text() == "2009");
        CHECK(CellValue::integer(-1683).canonical_text() == "-1683");
        CHECK(CellValue::floating(2.5).canonical_text() == "2.5");
        CHECK(CellValue::floating(558430000.0).canonical_text() == "558430000.0");
        CHECK(CellValue::floating(0.1).canonical_text() == "0.1");
        CHECK(CellValue::null().canonical_text().empty());
        CHECK(CellValue::text("Assets").canonical_text() == "Assets");
    }

    TEST_CASE("equality is typed value equality") {
        CHECK(CellValue::integer(2) == CellValue::floating(2.0));
        CHECK_FALSE(CellValue::integer(2) == CellValue::floating(2.5));
        CHECK_FALSE(CellValue::integer(10) == CellValue::text("10"));
        CHECK(CellValue::text("caf\xC3\xA9") == CellValue::text("caf\xC3\xA9"));
        CHECK_FALSE(CellValue::text("cafe") == CellValue::text("caf\xC3\xA9"));
        CHECK(CellValue::null() == CellValue::null());
    }

    TEST_CASE("strict numeric parsers") {
        std::int64_t i = 0;
        double d = 0;
        CHECK(parse_int64("1581", i));
        CHECK(i == 1581);
        CHECK(parse_int64("+7", i));
        CHECK(i == 7);
        CHECK_FALSE(parse_int64("1,581", i));
        CHECK_FALSE(parse_int64("12a", i));
        CHECK_FALSE(parse_int64("99999999999999999999", i));
        CHECK(parse_float64("1.5", d));
        CHECK(parse_float64("1e3", d));
        CHECK(d == 1000.0);
        CHECK_FALSE(parse_float64("inf", d));
        CHECK_FALSE(parse_float64("nan", d));
        CHECK_FALSE(parse_float64("$12", d));
        CHECK_FALSE(parse_float64("1e999", d));
    }
}

TEST_SUITE("cube") {
    TEST_CASE("column_by_name") {
        Cube cube = load_csv(kLedger);
        CHECK(cube.column_by_name("Category").kind == ColumnKind::Dimension);
        CHECK(cube.column_by_name("Amount (US$-Millions)").kind == ColumnKind::Measure);
        CHECK(cube.column_by_name("Amount (US$-Millions)").index == 5);
        try {
            cube.column_by_name("NoSuchColumn");
            FAIL("expected UnknownColumn");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnknownColumn);
        }
    }

    TEST_CASE("row of a singleton cube and the boundary") {
        Cube cube = load_csv("a,b\nx,1\n");
        auto row = cube.row(0);
        REQUIRE(row.size() == 2);
        CHECK(row[0] == CellValue::text("x"));
        CHECK(row[1] == CellValue::integer(1));
        CHECK_THROWS_AS(cube.row(1), Error);
        try {
            cube.row(cube.row_count());
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::IndexOutOfRange);
        }
    }

    TEST_CASE("row matches an independent reread of the raw line") {
        Cube cube = load_csv(kLedger);
        REQUIRE(cube.row_count() == 5);
        std::stringstream raw(kLedger);
        std::string line;
        for (int i = 0; i <= 3; ++i) std::getline(raw, line);  // header + rows 0..2
        auto expected = split_line(line);
        auto row = cube.row(2);
        REQUIRE(row.size() == expected.size());
        for (std::size_t c = 0; c < row.size(); ++c) {
            CHECK(row[c].canonical_text() == expected[c]);
        }
    }

    TEST_CASE("every column has row_count cells, null or not") {
        Cube cube = load_csv("a,b,c\n1,,x\n,2.5,\n3,4,y\n");
        for (std::size_t c = 0; c < cube.column_count(); ++c) {
            std::size_t nulls = 0, non_nulls = 0;
            for (std::size_t r = 0; r < cube.row_count(); ++r) {
                (cube.cell(c, r).is_null() ? nulls : non_nulls)++;
            }
            CHECK(nulls + non_nulls == cube.row_count());
            CHECK(nulls == cube.column(c).null_count());
        }
    }

    TEST_CASE("reads are stable") {
        Cube cube = load_csv(kLedger);
        for (std::size_t r = 0; r < cube.row_count(); ++r) {
            CHECK(cube.row(r) == cube.row(r));
        }
    }

    TEST_CASE("construction rejects inconsistent columns") {
        Column a(ValueType::Integer64);
        a.append_integer(1);
        Column b(ValueType::Text);
        Schema schema = {{"a", 0, ColumnKind::Measure, ValueType::Integer64},
                         {"b", 1, ColumnKind::Dimension, ValueType::Text}};
        CHECK_THROWS_AS(Cube("x", schema, {a, b}), Error);
        Schema text_measure = {{"b", 0, ColumnKind::Measure, ValueType::Text}};
        CHECK_THROWS_AS(Cube("x", text_measure, {Column(ValueType::Text)}), Error);
    }

    TEST_CASE("text columns share dictionary codes for equal strings") {
        Cube cube = load_csv("k,v\nx,1\ny,2\nx,3\n");
        const Column& k = cube.column(0);
        CHECK(k.dictionary().size() == 2);
        CHECK(k.codes()[0] == k.codes()[2]);
    }
}
