#include "doctest.h"

#include <stdexcept>

#include "itc/config.hpp"

using namespace itc;
using Kind = ConfigValue::Kind;

TEST_CASE("scalar values are typed") {
    CHECK(parse_config_value("12").kind == Kind::kInteger);
    CHECK(parse_config_value("-3").number == -3.0);
    CHECK(parse_config_value("1.5e-3").kind == Kind::kReal);
    CHECK(parse_config_value("1.5e-3").number == 1.5e-3);
    CHECK(parse_config_value("true").kind == Kind::kBool);
    CHECK(parse_config_value("false").flag == false);
    CHECK(parse_config_value("sine").kind == Kind::kString);
    CHECK(parse_config_value("\"a b # c\"").text == "a b # c");
    CHECK(parse_config_value("  out/run_1 ").text == "out/run_1");
    CHECK_THROWS_AS(parse_config_value(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_value("1.2.3x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_value("\"open"), std::invalid_argument);
    CHECK(parse_config_value("inf").kind == Kind::kString);
    CHECK_THROWS_AS(config_real(parse_config_value("inf"), "kappa"), std::invalid_argument);
    CHECK_THROWS_AS(config_real(parse_config_value("1e999"), "kappa"), std::invalid_argument);
}

TEST_CASE("lists and ranges") {
    const auto l = parse_config_value("[10, 20, 30]");
    REQUIRE(l.kind == Kind::kList);
    CHECK(config_integer_list(l, "n") == std::vector<long long>{10, 20, 30});

    const auto r = parse_config_value("4..7");
    CHECK(config_integer_list(r, "n") == std::vector<long long>{4, 5, 6, 7});
    CHECK(config_integer_list(parse_config_value("3..3"), "n") == std::vector<long long>{3});
    CHECK(config_integer_list(parse_config_value("5"), "n") == std::vector<long long>{5});

    const auto mixed = parse_config_value("[0.5, 1, 2e0]");
    CHECK(config_real_list(mixed, "kappas") == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(parse_config_value("[]").items.empty());

    CHECK_THROWS_AS(parse_config_value("7..4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_value("1..x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_value("[1, , 2]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_value("[1, 2"), std::invalid_argument);
    CHECK_THROWS_AS(config_integer_list(mixed, "n"), std::invalid_argument);
}

TEST_CASE("config text parsing") {
    const auto m = parse_config(
        "# sweep\n"
        "experiment = conc_profile\n"
        "n_atoms = [10, 20]   # trailing comment\n"
        "\n"
        "k=1..3\n"
        "output_dir = \"res # 1\"\r\n"
        "plot = true\n");
    CHECK(m.size() == 5);
    CHECK(config_string(m.at("experiment"), "experiment") == "conc_profile");
    CHECK(config_integer_list(m.at("k"), "k") == std::vector<long long>{1, 2, 3});
    CHECK(config_string(m.at("output_dir"), "output_dir") == "res # 1");
    CHECK(config_bool(m.at("plot"), "plot"));
}

TEST_CASE("config errors name the line") {
    try {
        parse_config("a = 1\nb 2\n", "run.cfg");
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("run.cfg:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("a = 1\na = 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("= 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("a =\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_config_file("/nonexistent/file.cfg"), std::invalid_argument);
}

TEST_CASE("typed accessors reject mismatches") {
    CHECK_THROWS_AS(config_bool(parse_config_value("1"), "plot"), std::invalid_argument);
    CHECK_THROWS_AS(config_integer(parse_config_value("1.5"), "k"), std::invalid_argument);
    CHECK_THROWS_AS(config_string(parse_config_value("3"), "profile"), std::invalid_argument);
    CHECK(config_real(parse_config_value("3"), "kappa") == 3.0);
}
