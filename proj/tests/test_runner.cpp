#include <doctest.h>

#include <cstdio>
#include <cstdlib>

#include "divtriage/clusterer.hpp"
#include "divtriage/runner.hpp"
#include "test_util.hpp"

using namespace divtriage;
using testutil::stub_engine;

TEST_CASE("run_one captures stdout of a stub engine") {
    testutil::TempDir dir;
    auto engine = stub_engine(dir, "echoer", "echo ok");
    EngineResult r = run_one(engine, "ignored");
    CHECK(r.stdout_text == "ok\n");
    CHECK(r.exit_code == 0);
    CHECK_FALSE(r.timed_out);
    CHECK(r.engine_name == "echoer");
}

TEST_CASE("run_one passes the snippet path to the engine") {
    testutil::TempDir dir;
    auto engine = stub_engine(dir, "catter", "cat \"$1\"");
    EngineResult r = run_one(engine, "print(42);\n");
    CHECK(r.stdout_text == "print(42);\n");
}

TEST_CASE("run_one records exit code and stderr") {
    testutil::TempDir dir;
    auto engine = stub_engine(dir, "failer", "echo boom >&2; exit 7");
    EngineResult r = run_one(engine, "x");
    CHECK(r.exit_code == 7);
    CHECK(r.stderr_text == "boom\n");
    CHECK(r.stdout_text.empty());
}

TEST_CASE("run_one kills a sleeping engine at the timeout") {
    testutil::TempDir dir;
    auto engine = stub_engine(dir, "sleeper", "echo before; sleep 30; echo after", 300);
    EngineResult r = run_one(engine, "x");
    CHECK(r.timed_out);
    CHECK(r.exit_code == kTimeoutExitCode);
    CHECK(r.stdout_text == "before\n");
    CHECK(r.wall_time_ms >= 250);
    CHECK(r.wall_time_ms < 5000);
    // the process group is gone: no stray sleep with our marker remains
    int rc = std::system("pgrep -f 'slee[p] 30' > /dev/null 2>&1");
    CHECK(rc != 0);
}

TEST_CASE("run_one truncates oversized output with a marker") {
    testutil::TempDir dir;
    auto engine = stub_engine(dir, "flooder", "head -c 2097152 /dev/zero | tr '\\0' 'a'");
    EngineResult r = run_one(engine, "x");
    CHECK(r.stdout_text.size() <= kMaxCapturedBytes + std::string(kTruncationMarker).size());
    CHECK(r.stdout_text.find(kTruncationMarker) != std::string::npos);
}

TEST_CASE("run_one reports spawn failure distinctly") {
    EngineConfig missing;
    missing.name = "ghost";
    missing.command = "/nonexistent/engine-binary";
    missing.args_template = {kSnippetPlaceholder};
    CHECK_THROWS_AS(run_one(missing, "x"), SpawnError);
}

TEST_CASE("run_one applies environment overrides") {
    testutil::TempDir dir;
    auto engine = stub_engine(dir, "envy", "echo \"$DIVTRIAGE_TEST_VAR\"");
    engine.env["DIVTRIAGE_TEST_VAR"] = "hello";
    EngineResult r = run_one(engine, "x");
    CHECK(r.stdout_text == "hello\n");
}

TEST_CASE("run_differential preserves configuration order and synthesizes spawn failures") {
    testutil::TempDir dir;
    std::vector<EngineConfig> engines = {
        stub_engine(dir, "one", "echo 1"),
        stub_engine(dir, "two", "echo 2"),
    };
    EngineConfig ghost;
    ghost.name = "ghost";
    ghost.command = "/nonexistent/engine-binary";
    ghost.args_template = {kSnippetPlaceholder};
    engines.push_back(ghost);

    Finding f = run_differential(engines, "x", "f1");
    REQUIRE(f.engine_results.size() == 3);
    CHECK(f.engine_results[0].engine_name == "one");
    CHECK(f.engine_results[1].engine_name == "two");
    CHECK(f.engine_results[2].engine_name == "ghost");
    CHECK(f.engine_results[2].exit_code == kSpawnFailureExitCode);
    CHECK(f.engine_results[2].stdout_text.empty());
    CHECK(is_differential(f));
}

TEST_CASE("run_differential rejects fewer than two engines") {
    testutil::TempDir dir;
    std::vector<EngineConfig> one = {stub_engine(dir, "solo", "echo 1")};
    CHECK_THROWS(run_differential(one, "x", "f1"));
}

TEST_CASE("identical stub outputs produce a non-differential finding") {
    testutil::TempDir dir;
    std::vector<EngineConfig> engines = {stub_engine(dir, "a", "echo same"),
                                         stub_engine(dir, "b", "echo same")};
    CHECK_FALSE(is_differential(run_differential(engines, "x", "f1")));
}

TEST_CASE("exit tuple maps to the documented pattern key") {
    testutil::TempDir dir;
    std::vector<EngineConfig> engines = {
        stub_engine(dir, "a", "echo a; exit 7"), stub_engine(dir, "b", "echo b; exit 3"),
        stub_engine(dir, "c", "echo c; exit 0"), stub_engine(dir, "d", "echo d; exit 1")};
    Finding f = run_differential(engines, "x", "f1");
    CHECK(exit_pattern_of(f).key() == "pattern_7_3_0_1");
}

TEST_CASE("run_corpus filters non-differential findings unless keep-all") {
    testutil::TempDir dir;
    // engines diverge only when the snippet contains "diverge"
    std::vector<EngineConfig> engines = {
        stub_engine(dir, "a", "cat \"$1\""),
        stub_engine(dir, "b", "grep -q diverge \"$1\" && echo DIFFERENT || cat \"$1\""),
    };
    std::vector<std::string> snippets = {"same one", "this one should diverge", "same two"};

    auto kept = run_corpus(engines, snippets, 2);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].id == "s1");

    auto all = run_corpus(engines, snippets, 2, /*keep_all=*/true);
    CHECK(all.size() == 3);
    CHECK(all[0].id == "s0");
    CHECK(all[2].id == "s2");
}

TEST_CASE("run_corpus output order is invariant under parallelism") {
    testutil::TempDir dir;
    std::vector<EngineConfig> engines = {
        stub_engine(dir, "a", "cat \"$1\""),
        stub_engine(dir, "b", "cat \"$1\"; echo extra"),
    };
    std::vector<std::string> snippets;
    for (int i = 0; i < 12; ++i) snippets.push_back("snippet " + std::to_string(i));

    auto serial = run_corpus(engines, snippets, 1);
    auto parallel = run_corpus(engines, snippets, 8);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].id == parallel[i].id);
        REQUIRE(serial[i].engine_results.size() == parallel[i].engine_results.size());
        for (std::size_t e = 0; e < serial[i].engine_results.size(); ++e) {
            CHECK(serial[i].engine_results[e].stdout_text ==
                  parallel[i].engine_results[e].stdout_text);
            CHECK(serial[i].engine_results[e].exit_code ==
                  parallel[i].engine_results[e].exit_code);
        }
    }
    CHECK(run_corpus(engines, {}, 4).empty());
    CHECK_THROWS(run_corpus(engines, snippets, 0));
}

TEST_CASE("engine config file loading and validation") {
    testutil::TempDir dir;
    auto path = dir.file("engines.json");
    testutil::write_file(path, R"([
      {"name": "a", "command": "/bin/sh", "args_template": ["{snippet}"], "timeout_ms": 2000},
      {"name": "b", "command": "/bin/sh", "args_template": ["-x", "{snippet}"],
       "env": {"K": "V"}}
    ])");
    auto engines = load_engine_configs(path);
    REQUIRE(engines.size() == 2);
    CHECK(engines[0].timeout_ms == 2000);
    CHECK(engines[1].timeout_ms == kDefaultTimeoutMs);
    CHECK(engines[1].env.at("K") == "V");

    SUBCASE("missing placeholder is rejected") {
        testutil::write_file(path, R"([{"name":"a","command":"/bin/sh","args_template":["x"]}])");
        CHECK_THROWS(load_engine_configs(path));
    }
    SUBCASE("duplicate names are rejected") {
        testutil::write_file(path, R"([
          {"name":"a","command":"/bin/sh","args_template":["{snippet}"]},
          {"name":"a","command":"/bin/sh","args_template":["{snippet}"]}
        ])");
        CHECK_THROWS(load_engine_configs(path));
    }
}
