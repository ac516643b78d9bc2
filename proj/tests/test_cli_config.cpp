#include <doctest.h>

#include "config.hpp"

using lelab::cli::ConfigError;
using lelab::cli::parse_config;
using json = nlohmann::json;

TEST_CASE("empty config yields the defaults") {
    const auto c = parse_config(json::object());
    CHECK(c.q == 0.5);
    CHECK(c.n == 257);
    CHECK(c.resolved_t_list() == std::vector<double>{0.0, 0.5, 2.0});
    CHECK(c.resolved_gt_pairs().size() == 3);
    CHECK(c.resolved_gt_pairs()[1].first == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("out-of-range q names the bound") {
    try {
        parse_config(json{{"q", 1.5}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("0 < q < 1") != std::string::npos);
    }
}

TEST_CASE("schema violations are rejected") {
    CHECK_THROWS_AS(parse_config(json{{"qq", 0.5}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"n", 64}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"n", 129.5}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"radii", "0.2"}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"centers", json::array({json::array({0.1})})}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"criteria", json::array({16})}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"pipeline", "plot"}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("explicit values survive a round trip") {
    const json in{{"pipeline", "profile1d"}, {"q", 0.3}, {"w0p", 2.0}, {"T", 5}, {"centers", {{0.1, 0.2}}},
                  {"gt_pairs", {{1.0, 0.3}}}, {"criteria", json::array()}};
    const auto c = parse_config(in);
    CHECK(c.pipeline == "profile1d");
    CHECK(c.criteria.empty());
    const auto back = parse_config(json::parse(lelab::cli::to_json(c).dump()));
    CHECK(back.q == 0.3);
    CHECK(back.w0p == 2.0);
    CHECK(back.T == 5.0);
    CHECK(back.centers[0].y == 0.2);
    CHECK(back.gt_pairs.size() == 1);
}
