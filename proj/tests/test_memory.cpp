#include <doctest.h>

#include <random>

#include "divtriage/memory.hpp"
#include "test_util.hpp"

using namespace divtriage;

TEST_CASE("record_issue grows the store and assigns distinct ids") {
    IssueStore store;
    CHECK(store.size() == 0);
    auto& r1 = store.record_issue("TypeError on Array.prototype.at in v8", "f1");
    CHECK(store.size() == 1);
    auto& r2 = store.record_issue("RangeError mismatch in Date parsing", "f2");
    CHECK(store.size() == 2);
    CHECK(r1.issue_id != r2.issue_id);
    CHECK_THROWS(store.record_issue("", "f3"));
}

TEST_CASE("empty store returns an empty result") {
    IssueStore store;
    CHECK(store.top_k_similar("anything", 10).empty());
}

TEST_CASE("exact summary lookup ranks first with similarity 1.0") {
    IssueStore store;
    store.record_issue("TypeError on Array.prototype.at in v8", "f1");
    store.record_issue("RangeError mismatch in Date parsing", "f2");
    store.record_issue("segfault during regexp compilation", "f3");
    auto hits = store.top_k_similar("RangeError mismatch in Date parsing", 10);
    REQUIRE(!hits.empty());
    CHECK(hits[0].first.finding_id == "f2");
    CHECK(hits[0].second == doctest::Approx(1.0).epsilon(1e-9));

    SUBCASE("also for a single-record store") {
        IssueStore small;
        small.record_issue("only one summary here", "f9");
        auto h = small.top_k_similar("only one summary here", 10);
        REQUIRE(h.size() == 1);
        CHECK(h[0].second == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("top_k_similar truncates to k and matches a brute-force scan") {
    std::mt19937_64 rng(31);
    IssueStore store;
    std::vector<std::string> words = {"typeerror", "rangeerror", "parser", "regexp", "date",
                                      "array",     "proxy",      "promise", "bigint", "crash"};
    std::uniform_int_distribution<int> len(3, 8), pick(0, 9);
    for (int i = 0; i < 15; ++i) {
        std::string summary;
        int n = len(rng);
        for (int w = 0; w < n; ++w) summary += words[pick(rng)] + " ";
        summary += std::to_string(i);
        store.record_issue(summary, "f" + std::to_string(i));
    }

    std::string query = "parser crash with regexp and bigint";
    auto hits = store.top_k_similar(query, 10);
    CHECK(hits.size() == 10);
    for (std::size_t i = 1; i < hits.size(); ++i) CHECK(hits[i - 1].second >= hits[i].second);

    // full scan oracle: similarity of every record, take top 10
    auto all = store.top_k_similar(query, static_cast<int>(store.size()));
    CHECK(all.size() == store.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
        CHECK(hits[i].first.issue_id == all[i].first.issue_id);
        CHECK(hits[i].second == doctest::Approx(all[i].second));
    }
    CHECK_THROWS(store.top_k_similar(query, 0));
}

TEST_CASE("persistence round-trip across store instances") {
    testutil::TempDir dir;
    auto path = dir.file("issues.jsonl");
    {
        IssueStore store(path);
        store.record_issue("TypeError on Array.prototype.at in v8", "f1");
        store.record_issue("RangeError mismatch in Date parsing", "f2");
    }
    IssueStore reloaded(path);
    CHECK(reloaded.size() == 2);
    auto hits = reloaded.top_k_similar("RangeError mismatch in Date parsing", 1);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].first.finding_id == "f2");
    CHECK(hits[0].second == doctest::Approx(1.0).epsilon(1e-9));
}
