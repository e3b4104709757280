#include <doctest.h>

#include <cryptomcda/decision.hpp>
#include <cryptomcda/error.hpp>

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

using namespace cryptomcda;
using doctest::Approx;

namespace {

CriteriaRow row(const std::string& symbol, double base) {
    return {symbol, base, base + 1, base + 2, base + 3, base + 4, 0.5};
}

std::vector<CriterionSpec> specs(std::initializer_list<Sense> senses) {
    std::vector<CriterionSpec> out;
    int k = 0;
    for (Sense s : senses) out.push_back({"c" + std::to_string(k++), s, ""});
    return out;
}

DecisionMatrix raw(std::vector<double> values, std::vector<CriterionSpec> criteria) {
    std::vector<std::string> alts;
    for (std::size_t i = 0; i < values.size() / criteria.size(); ++i) alts.push_back("A" + std::to_string(i));
    return DecisionMatrix(alts, std::move(criteria), std::move(values));
}

double column_norm(const DecisionMatrix& m, std::size_t j) {
    double ss = 0.0;
    for (double v : m.column(j)) ss += v * v;
    return std::sqrt(ss);
}

}  // namespace

TEST_SUITE("decision") {

TEST_CASE("assemble orders criteria and alternatives") {
    std::vector<CriteriaRow> rows;
    for (const char* s : {"XRP", "ADA", "BTC", "ETH", "BNB", "DOGE", "LINK", "LTC", "XLM"}) rows.push_back(row(s, 1.0));
    const auto m = assemble(rows);
    CHECK(m.rows() == 9);
    CHECK(m.cols() == 6);
    CHECK(m.stage() == Stage::raw);
    CHECK(m.alternatives().front() == "ADA");
    CHECK(m.alternatives().back() == "XRP");
    const std::vector<std::string> ids{"xRV", "sRV", "xVV", "sVV", "xm", "xR2"};
    const std::vector<Sense> senses{Sense::maximize, Sense::minimize, Sense::maximize,
                                    Sense::minimize, Sense::maximize, Sense::maximize};
    for (std::size_t j = 0; j < 6; ++j) {
        CHECK(m.criteria()[j].id == ids[j]);
        CHECK(m.criteria()[j].sense == senses[j]);
    }
    CHECK(m.at(0, 4) == 5.0);  // xm = base + 4
}

TEST_CASE("assemble keeps identical rows and rejects duplicate symbols") {
    std::vector<CriteriaRow> same{row("A", 2.0), row("B", 2.0)};
    const auto m = assemble(same);
    CHECK(m.rows() == 2);
    for (std::size_t j = 0; j < 6; ++j) CHECK(m.at(0, j) == m.at(1, j));

    std::vector<CriteriaRow> dup{row("A", 1.0), row("B", 1.0), row("A", 2.0)};
    try {
        assemble(dup);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("'A'") != std::string::npos);
    }
}

TEST_CASE("matrix invariants") {
    CHECK_THROWS_AS(raw({1.0}, specs({Sense::maximize})), ContractError);  // n = 1
    CHECK_THROWS_AS(DecisionMatrix({"a", "b"}, specs({Sense::maximize}), {1, 2, 3}), ContractError);
    CHECK_THROWS_AS(DecisionMatrix({"a", "a"}, specs({Sense::maximize}), {1, 2}), ValidationError);
    CHECK_THROWS_AS(DecisionMatrix({"a", "b"}, {{"x", Sense::maximize, ""}, {"x", Sense::minimize, ""}}, {1, 2, 3, 4}),
                    ValidationError);
    CHECK_THROWS_AS(DecisionMatrix({"a", "b"}, specs({Sense::maximize}), {1, 2}, Stage::normalized), ContractError);
}

TEST_CASE("reciprocal transform") {
    const auto m = raw({2, 10, 4, 20}, specs({Sense::minimize, Sense::maximize}));
    const auto t = transform_min_to_max(m, {MinTransform::reciprocal, {}});
    CHECK(t.stage() == Stage::transformed);
    CHECK(t.at(0, 0) == 0.5);
    CHECK(t.at(1, 0) == 0.25);
    CHECK(t.at(0, 1) == 10.0);
    CHECK(t.criteria()[0].sense == Sense::maximize);
    CHECK(t.transform() == "reciprocal");

    const auto zero = raw({0, 1, 4, 2}, specs({Sense::minimize, Sense::maximize}));
    CHECK_THROWS_AS(transform_min_to_max(zero, {MinTransform::reciprocal, {}}), DomainError);
}

TEST_CASE("max-complement transform") {
    const auto m = raw({2, 4, 7}, specs({Sense::minimize}));
    const auto t = transform_min_to_max(m, {MinTransform::max_complement, {}});
    CHECK(t.at(0, 0) == 5.0);
    CHECK(t.at(1, 0) == 3.0);
    CHECK(t.at(2, 0) == 0.0);
    CHECK(t.all_maximize());
}

TEST_CASE("no minimize columns leaves values alone") {
    const auto m = raw({1, 2, 3, 4}, specs({Sense::maximize, Sense::maximize}));
    for (auto kind : {MinTransform::reciprocal, MinTransform::max_complement}) {
        const auto t = transform_min_to_max(m, {kind, {}});
        CHECK(t.values() == m.values());
        CHECK(t.stage() == Stage::transformed);
    }
}

TEST_CASE("epsilon policy is opt-in and reported") {
    const auto m = raw({0.0, 1.0, 0.5, 2.0}, specs({Sense::minimize, Sense::maximize}));
    Diagnostics diag;
    const auto t = transform_min_to_max(m, {MinTransform::reciprocal, 0.1}, &diag);
    CHECK(t.at(0, 0) == Approx(10.0));
    CHECK(t.at(1, 0) == Approx(2.0));
    REQUIRE(diag.warnings.size() == 1);
    CHECK(diag.warnings[0].find("A0/c0") != std::string::npos);
    CHECK(t.transform().find("epsilon") != std::string::npos);
}

TEST_CASE("transform requires a raw matrix") {
    const auto m = raw({1, 2}, specs({Sense::maximize}));
    const auto t = transform_min_to_max(m);
    CHECK_THROWS_AS(transform_min_to_max(t), ContractError);
}

TEST_CASE("vector modulus normalization") {
    const auto t = transform_min_to_max(raw({3, 1, 4, 1}, specs({Sense::maximize, Sense::maximize})));
    const auto n = normalize_vector_modulus(t);
    CHECK(n.stage() == Stage::normalized);
    CHECK(n.at(0, 0) == Approx(0.6).epsilon(1e-15));
    CHECK(n.at(1, 0) == Approx(0.8).epsilon(1e-15));
    CHECK(n.at(0, 1) == Approx(std::sqrt(0.5)));

    const auto u = normalize_vector_modulus(transform_min_to_max(raw({1, 1, 1, 1}, specs({Sense::maximize}))));
    for (double v : u.values()) CHECK(v == Approx(0.5).epsilon(1e-15));

    const auto z = transform_min_to_max(raw({0, 1, 0, 2}, specs({Sense::maximize, Sense::maximize})));
    try {
        normalize_vector_modulus(z);
        FAIL("expected DegenerateError");
    } catch (const DegenerateError& e) {
        CHECK(std::string(e.what()).find("c0") != std::string::npos);
    }
    CHECK_THROWS_AS(normalize_vector_modulus(raw({1, 2}, specs({Sense::maximize}))), ContractError);
}

TEST_CASE("mixed-sign columns are normalized and flagged") {
    Diagnostics diag;
    const auto n = normalize_vector_modulus(transform_min_to_max(raw({-3, 4}, specs({Sense::maximize}))), &diag);
    CHECK(n.at(0, 0) == Approx(-0.6));
    REQUIRE(diag.warnings.size() == 1);
    CHECK(diag.warnings[0].find("mixed signs") != std::string::npos);
}

TEST_CASE("normalization properties on random matrices") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
        std::vector<double> values(n * 2), scaled(n * 2);
        const double c = std::exp(std::uniform_real_distribution<double>(-10, 10)(rng));
        for (std::size_t k = 0; k < values.size(); ++k) {
            values[k] = u(rng);
            scaled[k] = k % 2 == 0 ? values[k] * c : values[k];
        }
        const auto crit = specs({Sense::maximize, Sense::minimize});
        const auto a = normalize_vector_modulus(transform_min_to_max(raw(values, crit), {MinTransform::reciprocal, {}}));
        const auto b = normalize_vector_modulus(transform_min_to_max(raw(scaled, crit), {MinTransform::reciprocal, {}}));
        for (std::size_t j = 0; j < 2; ++j) CHECK(column_norm(a, j) == Approx(1.0).epsilon(1e-9));
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(a.at(i, 0) == Approx(b.at(i, 0)).epsilon(1e-9));  // scale invariance
            CHECK(a.at(i, 0) >= 0.0);
            CHECK(a.at(i, 0) <= 1.0);
            for (std::size_t k = 0; k < n; ++k) {
                // order preserved on maximize, reversed on minimize
                if (values[i * 2] < values[k * 2]) CHECK(a.at(i, 0) < a.at(k, 0));
                if (values[i * 2 + 1] < values[k * 2 + 1]) CHECK(a.at(i, 1) > a.at(k, 1));
            }
        }
    }
}

TEST_CASE("csv and json export") {
    const auto m = raw({0.1, 2e10, 1.0 / 3.0, -0.0}, specs({Sense::maximize, Sense::minimize}));
    std::ostringstream csv;
    write_matrix_csv(csv, m);
    CHECK(csv.str() == "symbol,c0,c1\nA0,0.1,2e+10\nA1,0.333333333,0\n");

    std::ostringstream meta;
    write_matrix_meta(meta, m);
    CHECK(meta.str().find("stage: raw") != std::string::npos);
    CHECK(meta.str().find("c1: minimize") != std::string::npos);

    const auto j = to_json(m);
    CHECK(j["stage"] == "raw");
    CHECK(j["values"][1][0].get<double>() == 1.0 / 3.0);
    CHECK(j["criteria"][1]["sense"] == "minimize");
}

TEST_CASE("read_matrix_csv reads the standard criteria layout") {
    std::istringstream in("symbol,xRV,sRV,xVV,sVV,xm,xR2\nAAA,1,2,3,4,5,0.5\nBBB,2,3,4,5,6,0.25\n");
    const auto m = read_matrix_csv(in);
    CHECK(m.rows() == 2);
    CHECK(m.criteria()[1].sense == Sense::minimize);
    CHECK(m.at(1, 5) == 0.25);

    std::istringstream wrong("symbol,xRV,sRV\nAAA,1,2\n");
    CHECK_THROWS_AS(read_matrix_csv(wrong), SchemaError);
    std::istringstream bad("symbol,xRV,sRV,xVV,sVV,xm,xR2\nAAA,1,2,3,4,5,x\nBBB,2,3,4,5,6,1\n");
    CHECK_THROWS_AS(read_matrix_csv(bad), RowError);
}

}  // TEST_SUITE
