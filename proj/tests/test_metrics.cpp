#include <doctest.h>

#include "divtriage/metrics.hpp"

using namespace divtriage;

TEST_CASE("recall") {
    CHECK(recall({37, 0, 0, 7}) == doctest::Approx(37.0 / 44.0));
    CHECK(round2(recall({37, 0, 0, 7})) == doctest::Approx(0.84));
    CHECK(recall({0, 0, 0, 5}) == doctest::Approx(0.0));
    CHECK(recall({12, 0, 0, 4}) == doctest::Approx(0.75));
    CHECK_THROWS_AS(recall({0, 3, 9, 0}), UndefinedMetric);
}

TEST_CASE("false positive rate") {
    CHECK(false_positive_rate({0, 24, 112, 0}) == doctest::Approx(24.0 / 136.0));
    CHECK(round2(false_positive_rate({0, 24, 112, 0})) == doctest::Approx(0.18));
    CHECK(false_positive_rate({0, 0, 10, 0}) == doctest::Approx(0.0));
    CHECK(false_positive_rate({0, 5, 5, 0}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(false_positive_rate({4, 0, 0, 2}), UndefinedMetric);
}

TEST_CASE("confusion totals") {
    ConfusionCounts c{1, 2, 3, 4};
    CHECK(c.total() == 10);
}
