#include "doctest.h"
#include "genusforge/errors.hpp"
#include "report.hpp"

using namespace gf;
using namespace gf::cli;

TEST_CASE("dims") {
    const auto r = cmd_dims(4, std::nullopt, std::nullopt);
    REQUIRE(r.results["rows"].size() == 4);
    for (int i = 1; i <= 4; ++i) {
        const auto& row = r.results["rows"][static_cast<std::size_t>(i - 1)];
        CHECK(row["i"] == i);
        CHECK(row["cons_dim"] == (i == 1 ? 4 : (i - 1) * binom(4, i)));
    }
    CHECK(r.all_pass());
    CHECK(cmd_dims(std::nullopt, Shape({2, 1}), 2).results["dim"] == 2);
    const auto one = cmd_dims(1, std::nullopt, std::nullopt);
    CHECK(one.results["rows"].size() == 1);
    CHECK(one.results["rows"][0]["cons_dim"] == 1);
    CHECK_THROWS_AS(cmd_dims(std::nullopt, std::nullopt, std::nullopt), DomainError);
    CHECK_THROWS_AS(cmd_dims(3, std::nullopt, 4), DomainError);
    CHECK_THROWS_AS(cmd_dims(9, std::nullopt, std::nullopt), ResourceError);
}

TEST_CASE("universal") {
    const auto r = cmd_universal(3, std::nullopt, true);
    CHECK(r.results["enumerated_size"] == 256);
    CHECK(r.checks.at("axioms"));
    CHECK(r.all_pass());
    const auto s = cmd_universal(std::nullopt, Shape({2, 2}), false);
    CHECK(s.results["predicted_log2"] == 7);
    CHECK(s.results["predicted_size"] == 128);
    CHECK(cmd_universal(1, std::nullopt, false).results["predicted_size"] == 2);
    CHECK(cmd_universal(5, std::nullopt, false).results["predicted_size"] == "2^54");
    CHECK(cmd_universal(6, std::nullopt, false).results["predicted_size"] == "2^135");
    CHECK_THROWS_AS(cmd_universal(5, std::nullopt, true), ResourceError);
}

TEST_CASE("verify") {
    VerifyOptions o;
    o.smoke = true;
    const auto r = cmd_verify("all", o);
    CHECK(r.all_pass());
    CHECK(r.checks.size() >= 10);
    o.smoke = false;
    const auto e = cmd_verify("expmaps", o);
    CHECK(e.checks.at("expmaps.lcomm"));
    CHECK(e.checks.at("expmaps.universal_equation"));
    CHECK(e.all_pass());
    CHECK_THROWS_AS(cmd_verify("nope", o), DomainError);
}

TEST_CASE("reconstruct") {
    const auto a = cmd_reconstruct(Shape::ones(2), 2);
    CHECK(a.checks.at("matches_direct"));
    CHECK(a.results["dim"] == 4);
    CHECK(a.results["obstruction_count"] == 0);
    const auto b = cmd_reconstruct(Shape::ones(3), 3);
    CHECK(b.checks.at("matches_direct"));
    CHECK(b.results["dim"] == b.results["full_dim"]);
    const auto c = cmd_reconstruct(Shape::ones(2), 9);
    CHECK(c.checks.at("matches_direct"));
    CHECK(c.results["dim"] == 4);
    const auto d = cmd_reconstruct(Shape::ones(3), 1);
    CHECK(d.results["dim"] == 7);
    CHECK(d.all_pass());
    for (const auto& key : {"shape", "j", "dim", "basis_coords", "obstruction_count"}) CHECK(b.results.contains(key));
    CHECK(b.results["basis_coords"].size() == 12);
    CHECK_THROWS_AS(cmd_reconstruct(Shape::ones(2), 0), DomainError);
}

TEST_CASE("arith") {
    ArithArgs a;
    a.n = 2;
    a.omega = 4;
    const auto b = cmd_arith("bound", a);
    CHECK(b.results["bound"] == 5);
    CHECK(b.results["grades"] == json::array({2, 3}));
    ArithArgs c;
    c.values = {"5", "29"};
    CHECK(cmd_arith("consistent", c).results["consistent"] == true);
    CHECK(cmd_arith("maximal", c).results["maximal"] == true);
    c.values = {"5", "29", "109"};
    const auto m3 = cmd_arith("maximal", c);
    CHECK(m3.results["maximal"].is_null() == m3.results["consistent"].get<bool>());
    ArithArgs s;
    s.k = {1, 1};
    s.budget = 100;
    const auto f = cmd_arith("search", s);
    CHECK(f.results["found"] == true);
    CHECK(f.checks.at("verified"));
    s.budget = 13;
    const auto none = cmd_arith("search", s);
    CHECK(none.results["found"] == false);
    CHECK(none.all_pass());
    ArithArgs bad;
    bad.values = {"5", "15"};
    CHECK_THROWS_AS(cmd_arith("validate", bad), ValidationError);
    CHECK_THROWS_AS(cmd_arith("frobnicate", bad), DomainError);
}

TEST_CASE("tensors") {
    const auto r = cmd_tensors(3, 7, 0);
    CHECK(r.checks.at("in_cons"));
    CHECK(r.results["nonzero"] == 4);
    CHECK(parse_block_list("1,3") == 5);
    CHECK_THROWS_AS(parse_block_list("0"), DomainError);
}

TEST_CASE("reports serialize and round-trip") {
    const auto r = cmd_reconstruct(Shape({2, 1}), 2);
    const auto j = r.to_json();
    CHECK(j["schema"] == kReportSchema);
    CHECK(j["pass"] == true);
    const auto back = RunReport::from_json(json::parse(j.dump()));
    CHECK(back == r);
    CHECK(back.to_json() == j);
    // identical parameters give identical results
    CHECK(cmd_reconstruct(Shape({2, 1}), 2).results == r.results);
    CHECK(r.to_text().find("PASS matches_direct") != std::string::npos);
    RunReport failing = r;
    failing.checks["extra"] = false;
    CHECK(exit_code(failing) == 1);
    CHECK(exit_code(r) == 0);
    CHECK_THROWS_AS(RunReport::from_json(json{{"schema", "other"}}), DomainError);
}
