#include "support.hpp"

#include "folpsi/error.hpp"
#include "folpsi/scenario.hpp"

#include <doctest.h>

#include <string>

using namespace folpsi;

namespace {
std::string bundled(const std::string& name) { return std::string(FOLPSI_SCENARIO_DIR) + "/" + name; }

const CheckResult& find(const Report& r, const std::string& stage) {
    for (const auto& c : r.checks)
        if (c.stage == stage) return c;
    throw std::runtime_error("no stage " + stage);
}
}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("empty pipeline gives an empty passing report") {
    Report r = run(load_scenario(bundled("empty.json")));
    CHECK(r.checks.empty());
    CHECK(r.ok());
    CHECK(r.csv() == "abscissa,value,series\n");
}

TEST_CASE("so3 scenario") {
    ScenarioConfig cfg = load_scenario(bundled("so3.json"));
    CHECK(cfg.domain.kind == DomainKind::Box);
    CHECK(cfg.generators.size() == 3);
    Report r = run(cfg);
    CHECK(r.ok());
    const CheckResult& fibers = find(r, "fibers");
    CHECK(fibers.data["points"][0]["fiber_dim"] == 3);
    CHECK(fibers.data["points"][1]["fiber_dim"] == 2);
    CHECK(find(r, "laplacian").pass);
    CHECK(find(r, "laplacian").data["min_eigenvalue"].get<double>() >= -1e-8);
}

TEST_CASE("subcommands select stages") {
    ScenarioConfig cfg = load_scenario(bundled("so3.json"));
    RunOptions opts;
    opts.subcommand = "fibers";
    Report r = run(cfg, opts);
    for (const auto& c : r.checks) CHECK((c.check == "fibers" || c.check == "minimality"));
    CHECK(r.checks.size() == 2);
    opts.subcommand = "bogus";
    CHECK_THROWS_AS(run(cfg, opts), ConfigError);
}

TEST_CASE("reports are deterministic") {
    ScenarioConfig cfg = load_scenario(bundled("acceptance/c02-oracle.json"));
    Report a = run(cfg), b = run(cfg);
    CHECK(a.json() == b.json());
    CHECK(a.text() == b.text());
    CHECK(a.csv() == b.csv());
}

TEST_CASE("flat torus scenario") {
    Report r = run(load_scenario(bundled("flat-torus.json")));
    CHECK(r.ok());
    CHECK(r.checks.size() == 3);
    CHECK(find(r, "parametrix").data["trace"].size() == 3);
    CHECK(find(r, "sqrt").data["trace"].size() == 4);
    CHECK(r.csv().find("parametrix:I-QP") != std::string::npos);
}

TEST_CASE("failing checks make the report fail") {
    const char* text = R"({
      "id": "bad-expectation",
      "domain": {"kind": "torus", "dim": 2},
      "generators": [["1", "0"], ["0", "1"]],
      "pipeline": [{"check": "fibers", "points": [[0, 0]], "expect": [1]}]
    })";
    Report r = run(parse_scenario(text));
    CHECK_FALSE(r.ok());
    CHECK(r.json().find("\"verdict\": \"fail\"") != std::string::npos);
}

TEST_CASE("syntax errors name the line") {
    try {
        parse_scenario("{\n  \"id\": \"x\",\n  \"pipeline\": [,]\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "line 3");
    }
}

TEST_CASE("config errors name the field") {
    auto message = [](const char* text) {
        try {
            parse_scenario(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(R"({"domain": {"kind": "sphere"}})").find("scenario.domain.kind") != std::string::npos);
    CHECK(message(R"({"domain": {"kind": "torus", "dim": 2}, "generators": [["1"]]})")
              .find("scenario.generators[0]") != std::string::npos);
    CHECK(message(R"j({"generators": [["sin(q)"]]})j").find("scenario.generators[0][0]") != std::string::npos);
    CHECK(message(R"({"pipeline": [{"check": "nope"}]})").find("scenario.pipeline[0].check") != std::string::npos);
    CHECK(message(R"({"pipeline": [{"check": "fibers"}, {"check": "fibers"}]})").find("duplicate") !=
          std::string::npos);
    CHECK(message(R"({"caps": {"fiber_degree": "two"}})").find("scenario.caps.fiber_degree") != std::string::npos);
}

TEST_CASE("stage errors carry the stage name") {
    const char* text = R"({
      "domain": {"kind": "torus", "dim": 1},
      "generators": [["1"]],
      "pipeline": [{"check": "fibers", "name": "probe", "points": [[0, 0]]}]
    })";
    CHECK_THROWS_AS(run(parse_scenario(text)), ConfigError);
    const char* escape = R"({
      "domain": {"kind": "box", "lower": [-1], "upper": [1]},
      "generators": [["1"]],
      "pipeline": [{"check": "bisubmersion", "name": "flow", "radius": 5,
                    "samples": [{"y": [0.5], "xi": [3]}]}]
    })";
    try {
        run(parse_scenario(escape));
        FAIL("expected Error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).rfind("stage 'flow':", 0) == 0);
    }
}

TEST_CASE("grid override") {
    ScenarioConfig cfg = load_scenario(bundled("acceptance/c02-oracle.json"));
    RunOptions opts;
    opts.grid_override = 8;
    Report r = run(cfg, opts);
    CHECK(r.ok());
}

TEST_CASE("every check kind is reachable from a subcommand") {
    for (const auto& [check, sub] : check_catalog()) {
        CHECK_FALSE(check.empty());
        CHECK((sub == "check-foliation" || sub == "fibers" || sub == "laplacian" || sub == "parametrix" ||
               sub == "sqrt" || sub == "scan"));
    }
}

}  // TEST_SUITE
