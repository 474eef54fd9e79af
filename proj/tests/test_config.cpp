#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "minklab/config.hpp"

using namespace minklab;

TEST_CASE("ini parsing with sections, comments, lists") {
    const std::string text =
        "# experiment\n"
        "[metric]\n"
        "id = radial_bump   # catalog entry\n"
        "mu = 1.5\n"
        "n = 2\n"
        "\n"
        "[geodesic]\n"
        "ladder = 1, 2.5, 10\n";
    const ExperimentConfig cfg = ExperimentConfig::parse(text);
    CHECK(cfg.get_str("metric", "id", "") == "radial_bump");
    CHECK(cfg.get_double("metric", "mu", 0.0) == 1.5);
    CHECK(cfg.get_int("metric", "n", 0) == 2);
    CHECK(cfg.get_int("metric", "missing", 7) == 7);
    const std::vector<double> ladder = cfg.get_list("geodesic", "ladder", {});
    REQUIRE(ladder.size() == 3);
    CHECK(ladder[1] == 2.5);
}

TEST_CASE("parse errors carry line context") {
    try {
        ExperimentConfig::parse("[ok]\nk = 1\ngarbage line\n");
        FAIL("expected parse error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("keys before any section are rejected") {
    CHECK_THROWS(ExperimentConfig::parse("k = 1\n"));
}

TEST_CASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}
