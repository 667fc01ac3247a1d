#include <doctest.h>

#include <algorithm>
#include <random>

#include "divtriage/corpus.hpp"
#include "test_util.hpp"

using namespace divtriage;
using testutil::make_finding;
using testutil::make_result;

TEST_CASE("load_corpus on an empty file yields an empty list") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("empty.findings.jsonl"), "");
    CHECK(load_corpus(dir.file("empty.findings.jsonl")).empty());
}

TEST_CASE("save then load reproduces findings field for field") {
    testutil::TempDir dir;
    std::vector<Finding> findings = {
        make_finding("f1", {make_result("a", "1\n", "", 0), make_result("b", "2\n", "", 0)}),
        make_finding("f2", {make_result("a", "", "boom\n", 7), make_result("b", "", "", 0)}),
    };
    auto path = dir.file("two.findings.jsonl");
    save_corpus(findings, path);
    CHECK(load_corpus(path) == findings);
}

TEST_CASE("round-trip property over random findings") {
    testutil::TempDir dir;
    std::mt19937_64 rng(7);
    std::vector<Finding> findings;
    for (int i = 0; i < 100; ++i)
        findings.push_back(testutil::random_finding(rng, "f" + std::to_string(i)));
    auto path = dir.file("rand.findings.jsonl");
    save_corpus(findings, path);
    CHECK(load_corpus(path) == findings);
}

TEST_CASE("duplicate ids are rejected with the offending id") {
    testutil::TempDir dir;
    std::vector<Finding> findings = {
        make_finding("f1", {make_result("a", "x", "", 0), make_result("b", "y", "", 0)}),
        make_finding("f2", {make_result("a", "x", "", 0), make_result("b", "y", "", 0)}),
        make_finding("f1", {make_result("a", "x", "", 0), make_result("b", "y", "", 0)}),
    };
    auto path = dir.file("dup.findings.jsonl");
    save_corpus(findings, path);
    CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("f1"), CorpusError);
}

TEST_CASE("parse errors carry the line number") {
    testutil::TempDir dir;
    auto path = dir.file("bad.findings.jsonl");
    testutil::write_file(path, "{\"id\":\"ok\",\"snippet\":\"\",\"engine_results\":[],"
                               "\"created_at\":0}\nnot json\n");
    CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("line 2"), CorpusError);
}

TEST_CASE("is_differential") {
    SUBCASE("identical outputs across four engines are excluded") {
        auto f = make_finding("f", {make_result("a", "1\n", "", 0), make_result("b", "1\n", "", 0),
                                    make_result("c", "1\n", "", 0), make_result("d", "1\n", "", 0)});
        CHECK_FALSE(is_differential(f));
    }
    SUBCASE("one divergent stdout flips the result") {
        auto f = make_finding("f", {make_result("a", "1", "", 0), make_result("b", "1", "", 0),
                                    make_result("c", "1", "", 0), make_result("d", "2", "", 0)});
        CHECK(is_differential(f));
    }
    SUBCASE("identical crashes are excluded") {
        auto f = make_finding("f", {make_result("a", "", "SIGSEGV", 139),
                                    make_result("b", "", "SIGSEGV", 139)});
        CHECK_FALSE(is_differential(f));
    }
    SUBCASE("exit-code-only difference is not a divergence") {
        auto f = make_finding("f", {make_result("a", "out", "err", 0),
                                    make_result("b", "out", "err", 3)});
        CHECK_FALSE(is_differential(f));
    }
    SUBCASE("fewer than two engines is an error") {
        auto f = make_finding("f", {make_result("a", "1", "", 0)});
        CHECK_THROWS_AS(is_differential(f), CorpusError);
    }
}

TEST_CASE("is_differential is invariant under engine permutation") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto f = testutil::random_finding(rng, "f");
        bool base = is_differential(f);
        auto shuffled = f;
        std::shuffle(shuffled.engine_results.begin(), shuffled.engine_results.end(), rng);
        CHECK(is_differential(shuffled) == base);
    }
}

TEST_CASE("labels round-trip") {
    testutil::TempDir dir;
    std::vector<Label> labels = {{"f1", LabelVerdict::Bug, "parser"},
                                 {"f2", LabelVerdict::NoBug, ""}};
    auto path = dir.file("x.labels.jsonl");
    save_labels(labels, path);
    CHECK(load_labels(path) == labels);
}
