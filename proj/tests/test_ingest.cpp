#include <doctest.h>

#include <cryptomcda/error.hpp>
#include <cryptomcda/ingest.hpp>

#include "support/synthetic.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace cryptomcda;
using namespace std::chrono;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return Date{year{y}, month{m}, day{d}}; }

OhlcvSeries parse(const std::string& text, const std::string& symbol = "TST") {
    std::istringstream in(text);
    return parse_csv(in, symbol);
}

OhlcvSeries daily(int n, Date start = ymd(2021, 1, 1), const std::string& symbol = "TST") {
    OhlcvSeries s{symbol, symbol, {}};
    sys_days d{start};
    for (int i = 0; i < n; ++i, d += days{1}) {
        OhlcvRecord r;
        r.date = year_month_day{d};
        r.close = 100.0 + i;
        r.volume = 1000.0 * (i + 1);
        s.records.push_back(r);
    }
    return s;
}

const char* kKaggleHeader = "SNo,Name,Symbol,Date,High,Low,Open,Close,Volume,Marketcap\n";

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("well-formed Kaggle rows parse in order") {
    const auto s = parse(std::string(kKaggleHeader) +
                         "1,Bitcoin,BTC,2021-01-01 23:59:59,30000,28000,29000,29500,4.1e10,5.5e11\n"
                         "2,Bitcoin,BTC,2021-01-02 23:59:59,33000,29000,29500,32000,6.7e10,5.9e11\n"
                         "3,Bitcoin,BTC,2021-01-03 23:59:59,34700,32000,32000,33000,7.8e10,6.1e11\n");
    REQUIRE(s.size() == 3);
    CHECK(s.symbol == "BTC");
    CHECK(s.name == "Bitcoin");
    CHECK(s.records[0].date == ymd(2021, 1, 1));
    CHECK(s.records[2].date == ymd(2021, 1, 3));
    CHECK(s.records[1].close == 32000.0);
    CHECK(s.records[1].volume == 6.7e10);
    CHECK(s.records[1].market_cap.value() == 5.9e11);
}

TEST_CASE("symbol falls back to the argument without a Symbol column") {
    const auto s = parse("Date,Close,Volume\n2021-01-01,1.5,10\n2021-01-02,1.6,0\n", "ADA");
    CHECK(s.symbol == "ADA");
    CHECK(s.size() == 2);
    CHECK_FALSE(s.records[0].open.has_value());
    CHECK(s.records[1].volume == 0.0);  // zero volume is legal
}

TEST_CASE("missing required column names it") {
    try {
        parse("Date,Open,Volume\n2021-01-01,1,1\n");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.column() == "Close");
    }
    CHECK_THROWS_AS(parse("Close,Volume\n1,1\n"), SchemaError);
    CHECK_THROWS_AS(parse(""), SchemaError);
}

TEST_CASE("out-of-order rows are re-sorted ascending") {
    const auto s = parse("Date,Close,Volume\n2021-01-02,2,1\n2021-01-01,1,1\n");
    REQUIRE(s.size() == 2);
    CHECK(s.records[0].date == ymd(2021, 1, 1));
    CHECK(s.records[0].close == 1.0);
}

TEST_CASE("row-level errors carry the data row index") {
    try {
        parse("Date,Close,Volume\n2021-01-01,1,1\n2021-01-02,abc,1\n");
        FAIL("expected RowError");
    } catch (const RowError& e) {
        CHECK(e.row() == 2);
    }
    CHECK_THROWS_AS(parse("Date,Close,Volume\n2021-13-01,1,1\n"), RowError);
    CHECK_THROWS_AS(parse("Date,Close,Volume\n2021-02-30,1,1\n"), RowError);
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS(parse("Date,Close,Volume\n2021-01-01,1,1\n2021-01-01,2,1\n"), ValidationError);
    CHECK_THROWS_AS(parse("Date,Close,Volume\n2021-01-01,0,1\n"), ValidationError);
    CHECK_THROWS_AS(parse("Date,Close,Volume\n2021-01-01,1,-1\n"), ValidationError);
    // high below close
    CHECK_THROWS_AS(parse("Date,Open,High,Low,Close,Volume\n2021-01-01,1,1.5,0.5,2,1\n"), ValidationError);
}

TEST_CASE("unparseable optional columns are treated as absent") {
    const auto s = parse("Date,Open,Close,Volume,Marketcap\n2021-01-01,n/a,1,1,\n");
    CHECK_FALSE(s.records[0].open.has_value());
    CHECK_FALSE(s.records[0].market_cap.has_value());
}

TEST_CASE("quoted fields and CRLF line endings") {
    const auto s = parse("Name,Date,Close,Volume\r\n\"Binance, Coin\",2021-01-01,\"300.5\",1\r\n");
    CHECK(s.name == "Binance, Coin");
    CHECK(s.records[0].close == 300.5);
}

TEST_CASE("filter_date_range keeps the inclusive interval") {
    const auto s = daily(10);
    const auto mid = filter_date_range(s, ymd(2021, 1, 4), ymd(2021, 1, 7));
    REQUIRE(mid.size() == 4);
    CHECK(mid.records.front().date == ymd(2021, 1, 4));
    CHECK(mid.records.back().date == ymd(2021, 1, 7));

    const auto full = filter_date_range(s, ymd(2021, 1, 1), ymd(2021, 1, 10));
    CHECK(full.size() == s.size());

    CHECK_THROWS_AS(filter_date_range(s, ymd(2020, 1, 1), ymd(2020, 12, 31)), EmptyRangeError);
    CHECK_THROWS_AS(filter_date_range(s, ymd(2021, 1, 5), ymd(2021, 1, 4)), ContractError);
}

TEST_CASE("filter_date_range is idempotent") {
    std::mt19937 rng(7);
    const auto s = daily(60);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> pick(0, 59);
        int a = pick(rng), b = pick(rng);
        if (a > b) std::swap(a, b);
        const Date lo = s.records[a].date, hi = s.records[b].date;
        const auto once = filter_date_range(s, lo, hi);
        const auto twice = filter_date_range(once, lo, hi);
        REQUIRE(once.size() == twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) CHECK(once.records[i].date == twice.records[i].date);
    }
}

TEST_CASE("check_alignment") {
    const auto a = daily(5, ymd(2021, 1, 1), "A");
    auto b = daily(5, ymd(2021, 1, 1), "B");

    SUBCASE("identical dates") {
        const std::vector<OhlcvSeries> set{a, b};
        const auto r = check_alignment(set);
        CHECK(r.aligned);
        CHECK(r.missing.at("A").empty());
        CHECK(r.missing.at("B").empty());
    }
    SUBCASE("one interior gap") {
        b.records.erase(b.records.begin() + 2);
        const std::vector<OhlcvSeries> set{a, b};
        const auto r = check_alignment(set);
        CHECK_FALSE(r.aligned);
        REQUIRE(r.missing.at("B").size() == 1);
        CHECK(r.missing.at("B")[0] == ymd(2021, 1, 3));
        CHECK(r.missing.at("A").empty());
    }
    SUBCASE("single series") {
        const std::vector<OhlcvSeries> set{a};
        CHECK(check_alignment(set).aligned);
    }
}

TEST_CASE("parse -> write -> parse preserves (date, close, volume)") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        synthetic::AssetProfile p{"RND", "Random Coin", 1.0 + trial, 0.001, 0.05, 1e6 * (trial + 1)};
        const auto original = synthetic::make_series(p, ymd(2020, 2, 27), 40, rng());
        std::stringstream buf;
        write_csv(buf, original);
        const auto back = parse_csv(buf, "IGNORED");
        CHECK(back.symbol == "RND");
        REQUIRE(back.size() == original.size());
        for (std::size_t i = 0; i < back.size(); ++i) {
            CHECK(back.records[i].date == original.records[i].date);
            CHECK(back.records[i].close == original.records[i].close);
            CHECK(back.records[i].volume == original.records[i].volume);
        }
    }
}

TEST_CASE("discover_files maps Kaggle coin files by Symbol column") {
    const auto dir = std::filesystem::temp_directory_path() / "cryptomcda_discover";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "coin_Bitcoin.csv") << kKaggleHeader << "1,Bitcoin,BTC,2021-01-01 23:59:59,2,1,1,1,1,1\n";
    std::ofstream(dir / "coin_Stellar.csv") << "Date,Close,Volume\n2021-01-01,1,1\n";
    std::ofstream(dir / "notes.txt") << "ignored";

    const auto files = discover_files(dir, {{"Stellar", "XLM"}});
    CHECK(files.size() == 2);
    CHECK(files.at("BTC").filename() == "coin_Bitcoin.csv");
    CHECK(files.at("XLM").filename() == "coin_Stellar.csv");
    CHECK(discover_files(dir).contains("Stellar"));
    CHECK_THROWS_AS(discover_files(dir / "nope"), DataError);
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
