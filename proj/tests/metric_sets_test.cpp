#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wijsman/metric_sets.hpp"

using namespace wijsman;

namespace {

Point random_point(std::mt19937_64& rng, std::size_t dim, double span = 10.0) {
    std::uniform_real_distribution<double> u(-span, span);
    std::vector<double> c(dim);
    for (auto& v : c) v = u(rng);
    return Point(std::move(c));
}

}  // namespace

TEST_CASE("point validation") {
    CHECK_THROWS_AS(Point(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(Point({1.0, std::nan("")}), std::invalid_argument);
    CHECK(Point::scalar(3.0).coords.size() == 1);
}

TEST_CASE("dist anchors") {
    CHECK(dist(Point::scalar(0.0), ClosedSet::singleton(Point::scalar(1.0))) == 1.0);
    const Point p({2.0, -1.0});
    CHECK(dist(p, ClosedSet::singleton(p)) == 0.0);
    CHECK(dist(Point({3.0, 4.0}), ClosedSet::ball(Point({0.0, 0.0}), 1.0)) ==
          doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("box distance: interior, face, corner") {
    const auto box = ClosedSet::box(Point({0.0, 0.0}), Point({2.0, 1.0}));
    CHECK(dist(Point({1.0, 0.5}), box) == 0.0);
    CHECK(dist(Point({3.0, 0.5}), box) == doctest::Approx(1.0));
    CHECK(dist(Point({3.0, 2.0}), box) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS((void)ClosedSet::box(Point({1.0}), Point({0.0})), std::invalid_argument);
}

TEST_CASE("ball distance and validation") {
    const auto ball = ClosedSet::ball(Point::scalar(0.0), 2.0);
    CHECK(dist(Point::scalar(1.0), ball) == 0.0);
    CHECK(dist(Point::scalar(5.0), ball) == doctest::Approx(3.0));
    CHECK_THROWS_AS((void)ClosedSet::ball(Point::scalar(0.0), -1.0), std::invalid_argument);
}

TEST_CASE("cloud distance equals brute force exactly") {
    std::mt19937_64 rng(101);
    for (std::size_t dim : {1u, 2u, 3u}) {
        std::vector<Point> members;
        for (int i = 0; i < 500; ++i) members.push_back(random_point(rng, dim));
        const auto cloud = ClosedSet::cloud(members);
        for (int q = 0; q < 500; ++q) {
            const Point x = random_point(rng, dim, 20.0);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& m : members) best = std::min(best, euclidean(x, m));
            CHECK(dist(x, cloud) == best);  // exact agreement, not approx
        }
    }
    CHECK_THROWS_AS((void)ClosedSet::cloud(std::vector<Point>{}), std::invalid_argument);
}

TEST_CASE("membership gives distance zero for every representation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const Point m = random_point(rng, 2);
        CHECK(dist(m, ClosedSet::singleton(m)) == 0.0);
        CHECK(dist(m, ClosedSet::cloud({random_point(rng, 2), m})) == 0.0);
        // interior samples
        const Point c = random_point(rng, 2);
        const double r = 1.0 + u(rng);
        const Point inside({c.coords[0] + 0.5 * r * u(rng), c.coords[1]});
        CHECK(dist(inside, ClosedSet::ball(c, r)) == 0.0);
        const Point lo({0.0, 0.0}), hi({2.0, 3.0});
        CHECK(dist(Point({2.0 * u(rng), 3.0 * u(rng)}), ClosedSet::box(lo, hi)) == 0.0);
    }
}

TEST_CASE("dist is 1-Lipschitz in the point for every representation") {
    std::mt19937_64 rng(55);
    std::vector<ClosedSet> sets;
    sets.push_back(ClosedSet::singleton(random_point(rng, 2)));
    {
        std::vector<Point> members;
        for (int i = 0; i < 50; ++i) members.push_back(random_point(rng, 2));
        sets.push_back(ClosedSet::cloud(std::move(members)));
    }
    sets.push_back(ClosedSet::box(Point({-1.0, -2.0}), Point({1.5, 0.5})));
    sets.push_back(ClosedSet::ball(random_point(rng, 2), 2.0));
    for (const auto& s : sets) {
        for (int i = 0; i < 2000; ++i) {
            const Point x = random_point(rng, 2), y = random_point(rng, 2);
            CHECK(std::abs(dist(x, s) - dist(y, s)) <= euclidean(x, y) + 1e-12);
        }
    }
}

TEST_CASE("oracle representation passes values through and rejects bad ones") {
    const auto good = ClosedSet::oracle(1, [](const Point& x) { return std::abs(x.coords[0]); });
    CHECK(dist(Point::scalar(-2.5), good) == 2.5);
    const auto bad = ClosedSet::oracle(1, [](const Point&) { return -1.0; });
    CHECK_THROWS_AS((void)dist(Point::scalar(0.0), bad), std::runtime_error);
    const auto nan_oracle = ClosedSet::oracle(1, [](const Point&) { return std::nan(""); });
    CHECK_THROWS_AS((void)dist(Point::scalar(0.0), nan_oracle), std::runtime_error);
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS((void)dist(Point({1.0, 2.0}), ClosedSet::singleton(Point::scalar(0.0))),
                    std::invalid_argument);
}

TEST_CASE("materialized sequences index from 1") {
    const auto seq = SetSequence::materialized(
        {ClosedSet::singleton(Point::scalar(1.0)), ClosedSet::singleton(Point::scalar(2.0))},
        ClosedSet::singleton(Point::scalar(0.0)));
    CHECK(seq.length() == 2);
    CHECK(dist(Point::scalar(0.0), seq.item(1)) == 1.0);
    CHECK(dist(Point::scalar(0.0), seq.item(2)) == 2.0);
    CHECK_THROWS_AS((void)seq.item(0), std::out_of_range);
    CHECK_THROWS_AS((void)seq.item(3), std::out_of_range);
}

TEST_CASE("indicator sequences follow their blocks") {
    const auto seq = SetSequence::indicator(
        {{2, 3}, {6, 6}}, 8, ClosedSet::singleton(Point::scalar(1.0)),
        ClosedSet::singleton(Point::scalar(0.0)), ClosedSet::singleton(Point::scalar(0.0)));
    const Point x = Point::scalar(0.0);
    for (std::uint64_t k = 1; k <= 8; ++k) {
        const bool hi = (k >= 2 && k <= 3) || k == 6;
        CHECK(gap(x, k, seq) == (hi ? 1.0 : 0.0));
    }
}

TEST_CASE("block validation rejects overlap, disorder, and out-of-range") {
    const auto hi = ClosedSet::singleton(Point::scalar(1.0));
    const auto lo = ClosedSet::singleton(Point::scalar(0.0));
    CHECK_THROWS_AS((void)SetSequence::indicator({{3, 2}}, 8, hi, lo, lo),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)SetSequence::indicator({{1, 4}, {3, 6}}, 8, hi, lo, lo),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)SetSequence::indicator({{1, 9}}, 8, hi, lo, lo), std::invalid_argument);
    CHECK_THROWS_AS((void)SetSequence::indicator({{0, 2}}, 8, hi, lo, lo), std::invalid_argument);
}

TEST_CASE("valued sequences carry scalar singleton values") {
    const auto seq =
        SetSequence::valued({{1, 2, 0.5}, {3, 4, 0.25}}, 5,
                            ClosedSet::singleton(Point::scalar(0.0)),
                            ClosedSet::singleton(Point::scalar(0.0)));
    const Point x = Point::scalar(0.0);
    CHECK(gap(x, 1, seq) == 0.5);
    CHECK(gap(x, 3, seq) == 0.25);
    CHECK(gap(x, 5, seq) == 0.0);
}

TEST_CASE("gap anchors") {
    const auto seq = SetSequence::indicator({{1, 1}}, 2, ClosedSet::singleton(Point::scalar(1.0)),
                                            ClosedSet::singleton(Point::scalar(0.0)),
                                            ClosedSet::singleton(Point::scalar(0.0)));
    CHECK(gap(Point::scalar(0.0), 1, seq) == 1.0);
    CHECK(gap(Point::scalar(0.25), 1, seq) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gap(Point::scalar(0.0), 2, seq) == 0.0);  // item equals the limit candidate
    CHECK(gap(Point::scalar(0.5), 1, seq) == 0.0);  // degenerate witness
}
