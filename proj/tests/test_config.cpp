#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "polhdr/config.hpp"
#include "polhdr/error.hpp"

using namespace polhdr;

TEST_CASE("serialize/parse round-trips losslessly") {
    PipelineConfig cfg;
    cfg.pmin = 1.0;
    cfg.phi_deg = 77.125;
    cfg.rho = 1.0 / 3.0;  // not exactly representable in decimal
    cfg.seed = 18446744073709551615ull;
    cfg.shot_noise = true;
    cfg.quantize = false;
    cfg.channel = "G2";
    PipelineConfig back = PipelineConfig::parse(cfg.serialize());
    CHECK(back.serialize() == cfg.serialize());
    CHECK(back.rho == cfg.rho);
    CHECK(back.seed == cfg.seed);
    CHECK(back.shot_noise == cfg.shot_noise);
    CHECK(back.quantize == cfg.quantize);
    CHECK(back.channel == "G2");
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(PipelineConfig::parse("pmin = 5\nnot_a_key = 1\n"), Error);
    CHECK_THROWS_AS(PipelineConfig::parse("pmin 5\n"), Error);  // missing '='
}

TEST_CASE("bad values are rejected") {
    CHECK_THROWS_AS(PipelineConfig::parse("pmin = abc\n"), Error);
    CHECK_THROWS_AS(PipelineConfig::parse("bit_depth = 8.5\n"), Error);
    CHECK_THROWS_AS(PipelineConfig::parse("shot_noise = yes\n"), Error);
    CHECK_THROWS_AS(PipelineConfig::parse("seed = -1\n"), Error);
}

TEST_CASE("comments and blank lines are allowed") {
    PipelineConfig cfg = PipelineConfig::parse("# defaults\n\npmin = 7\n");
    CHECK(cfg.pmin == 7.0);
    CHECK(cfg.pmax == 250.0);
}

TEST_CASE("hash is deterministic and content sensitive") {
    PipelineConfig a, b;
    CHECK(a.hash() == b.hash());
    b.seed = 1;
    CHECK(a.hash() != b.hash());
}

TEST_CASE("save/load through a file") {
    auto path = (std::filesystem::temp_directory_path() / "polhdr_cfg_test.txt").string();
    PipelineConfig cfg;
    cfg.rho = 0.002;
    cfg.phi_deg = 30.0;
    cfg.save(path);
    PipelineConfig back = PipelineConfig::load(path);
    CHECK(back.hash() == cfg.hash());
}
