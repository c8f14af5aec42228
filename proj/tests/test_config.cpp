//============================================================================
// Run-configuration parsing: sections, typed access, duplicate/unknown key
// rejection and the provenance hash.
//============================================================================

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>

#include "srg/config.hpp"
#include "srg/serialize.hpp"

using namespace srg;

static const char* kSample =
    "# run configuration\n"
    "[window]\n"
    "dim = 2\n"
    "side = 1.5\n"
    "\n"
    "[run]\n"
    "seed = 42\n"
    "flags = 0.5, 1.25, 3\n"
    "verbose = true\n"
    "name = demo ; trailing comment lines are separate, this is a value\n";

TEST_CASE("sections and typed getters") {
    const ConfigMap cfg = ConfigMap::parse_text(kSample);
    CHECK(cfg.has("window.dim"));
    CHECK(cfg.get_long("window.dim", 0) == 2);
    CHECK(cfg.get_double("window.side", 0.0) == 1.5);
    CHECK(cfg.get_uint64("run.seed", 0) == 42);
    CHECK(cfg.get_bool("run.verbose", false));
    const auto flags = cfg.get_double_list("run.flags", {});
    REQUIRE(flags.size() == 3);
    CHECK(flags[1] == 1.25);
    // fallbacks apply to absent keys only
    CHECK(cfg.get_double("window.missing", 7.5) == 7.5);
    CHECK(cfg.get_string("none.at.all", "x") == "x");
}

TEST_CASE("malformed input is rejected deterministically") {
    CHECK_THROWS_AS(ConfigMap::parse_text("[run]\nseed = 1\nseed = 2\n"), ValidationError);
    CHECK_THROWS_WITH_AS(ConfigMap::parse_text("[a]\nk = 1\n[b]\n[a]\nk = 2\n"),
                         doctest::Contains("a.k"), ValidationError);
    CHECK_THROWS_AS(ConfigMap::parse_text("[broken\nk = 1\n"), ValidationError);
    CHECK_THROWS_AS(ConfigMap::parse_text("just some text\n"), ValidationError);
    CHECK_THROWS_AS(ConfigMap::parse_text("[s]\n= 3\n"), ValidationError);

    const ConfigMap cfg = ConfigMap::parse_text("[s]\nx = abc\nn = 1.5\n");
    CHECK_THROWS_WITH_AS(cfg.get_double("s.x", 0.0), doctest::Contains("s.x"),
                         ValidationError);
    CHECK_THROWS_AS(cfg.get_long("s.n", 0), ValidationError);
    CHECK_THROWS_AS(cfg.get_bool("s.x", false), ValidationError);
}

TEST_CASE("unknown keys are named in the error") {
    const ConfigMap cfg = ConfigMap::parse_text("[run]\nseed = 1\nseedd = 2\n");
    CHECK_THROWS_WITH_AS(cfg.require_known({"run.seed"}), doctest::Contains("run.seedd"),
                         ValidationError);
    cfg.require_known({"run.seed", "run.seedd"});  // no throw when declared
}

TEST_CASE("hash is stable, order-insensitive and content-sensitive") {
    const ConfigMap a = ConfigMap::parse_text("[w]\nx = 1\ny = 2\n");
    const ConfigMap b = ConfigMap::parse_text("[w]\ny = 2\nx = 1\n");
    const ConfigMap c = ConfigMap::parse_text("[w]\nx = 1\ny = 3\n");
    CHECK(a.hash() == b.hash());          // canonical ordering
    CHECK(a.hash() != c.hash());
    CHECK(a.hash().size() == 16);
    // comments and spacing do not change the hash
    const ConfigMap d = ConfigMap::parse_text("# hi\n[w]\n  x=1\n\ny =  2\n");
    CHECK(d.hash() == a.hash());
}

TEST_CASE("known vector of the reference hash function") {
    // FNV-1a 64 test vectors
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("files parse like text") {
    const std::string path = "config_test_tmp.cfg";
    write_text_file(path, "[run]\nseed = 9\n");
    const ConfigMap cfg = ConfigMap::parse_file(path);
    CHECK(cfg.get_uint64("run.seed", 0) == 9);
    std::remove(path.c_str());
    CHECK_THROWS_AS(ConfigMap::parse_file("missing_config_file.cfg"), ValidationError);
}
