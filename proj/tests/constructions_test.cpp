#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wijsman/constructions.hpp"
#include "wijsman/diagnostics.hpp"

using namespace wijsman;

TEST_CASE("check_step_inequality anchors") {
    CHECK(check_step_inequality(10, 0.5, 0.25, 9));        // 0.6389 > 0.5556
    CHECK_FALSE(check_step_inequality(10, 0.5, 0.25, 8));  // 0.625 > 0.625 fails strictly
    // RHS -> 0 as m_next grows with the rest fixed
    CHECK(check_step_inequality(10, 0.5, 0.25, 1u << 20));
}

TEST_CASE("eps_pow2 rule") {
    const auto eps = eps_pow2(4);
    REQUIRE(eps.size() == 4);
    CHECK(eps[0] == 0.5);
    CHECK(eps[3] == 0.0625);
}

TEST_CASE("stat separation: checkpoints are the minimal feasible integers") {
    const auto f = log1p_modulus();
    const double c = 0.5;
    const std::size_t K = 6;
    const auto eps = eps_pow2(K);
    const auto built = build_stat_separation(f, c, eps, K);
    const auto& s = built.schedule;
    REQUIRE(s.checkpoints.size() == K);

    // oracle: independent linear scan with the same feasibility predicate
    std::uint64_t m_prev = 0, n_prev = 0;
    double eps_prev = 1.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double e = eps[k - 1];
        std::uint64_t m = m_prev + 1;
        for (;; ++m) {
            const double md = static_cast<double>(m);
            const bool level = f(md * e) >= c * f(md);
            const bool step = k == 1 || check_step_inequality(m_prev, eps_prev, e, m);
            const std::uint64_t n =
                static_cast<std::uint64_t>(static_cast<long double>(m) * e) + 1;
            if (level && step && n > n_prev) break;
        }
        CHECK(s.checkpoints[k - 1] == m);
        m_prev = m;
        n_prev = s.counts[k - 1];
        eps_prev = e;
    }
}

TEST_CASE("stat separation invariants") {
    const auto built = build_stat_separation(log1p_modulus(), 0.5, eps_pow2(8), 8);
    const auto& s = built.schedule;
    const auto f = log1p_modulus();
    std::uint64_t n_prev = 0;
    for (std::size_t k = 0; k < 8; ++k) {
        const double m = static_cast<double>(s.checkpoints[k]);
        CHECK(f(m * s.eps[k]) >= 0.5 * f(m) - 1e-12);
        CHECK(s.counts[k] == static_cast<std::uint64_t>(
                                 static_cast<long double>(s.checkpoints[k]) * s.eps[k]) +
                                 1);
        // block carries exactly the new gap indices and ends at the checkpoint
        CHECK(s.blocks[k].hi == s.checkpoints[k]);
        CHECK(s.blocks[k].hi - s.blocks[k].lo + 1 == s.counts[k] - n_prev);
        if (k > 0) CHECK(s.blocks[k].lo > s.checkpoints[k - 1]);
        n_prev = s.counts[k];
    }
    CHECK_FALSE(built.compatibility_warning);  // log1p is non-compatible
}

TEST_CASE("stat separation at higher c needs deeper checkpoints but still fits") {
    // log1p at c = 0.9 forces m_k near 2^{10k}; depth 3 stays inside the cap
    const auto built = build_stat_separation(log1p_modulus(), 0.9, eps_pow2(3), 3);
    const auto f = log1p_modulus();
    for (std::size_t k = 0; k < 3; ++k) {
        const double m = static_cast<double>(built.schedule.checkpoints[k]);
        CHECK(f(m * built.schedule.eps[k]) >= 0.9 * f(m) - 1e-12);
    }
}

TEST_CASE("identity cannot support a separation: failure names the step") {
    CHECK_THROWS_WITH_AS((void)build_stat_separation(identity_modulus(), 0.9, eps_pow2(4), 4),
                         doctest::Contains("k=1"), ConstructionError);
    // a compatible modulus triggers the transience warning when it succeeds
    const auto built = build_stat_separation(identity_modulus(), 0.4, eps_pow2(1), 1);
    CHECK(built.compatibility_warning);
}

TEST_CASE("stat separation argument validation") {
    CHECK_THROWS_AS((void)build_stat_separation(log1p_modulus(), 0.5, eps_pow2(4), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)build_stat_separation(log1p_modulus(), 1.5, eps_pow2(4), 4),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)build_stat_separation(log1p_modulus(), 0.5, {0.5, 0.5}, 2),
                    std::invalid_argument);
}

TEST_CASE("indicator sequence gaps at x=0 are 1 exactly on the selected blocks") {
    const auto built = build_stat_separation(log1p_modulus(), 0.5, eps_pow2(5), 5);
    const auto t = make_gap_trace(built.sequence, Point::scalar(0.0));
    std::uint64_t inside = 0;
    for (const auto& b : built.schedule.blocks) {
        inside += b.hi - b.lo + 1;
        CHECK(t.value(b.lo) == 1.0);
        CHECK(t.value(b.hi) == 1.0);
    }
    CHECK(t.prefix_count(0.5, built.schedule.horizon) == inside);
    CHECK(t.prefix_count(0.5, built.schedule.horizon) == built.schedule.counts.back());
}

TEST_CASE("empty and full indicator sequences") {
    const auto empty = indicator_sequence({}, 16);
    const auto t_empty = make_gap_trace(empty, Point::scalar(0.0));
    CHECK(t_empty.prefix_sum(16) == 0.0);
    const auto full = indicator_sequence({{1, 16}}, 16);
    const auto t_full = make_gap_trace(full, Point::scalar(0.0));
    CHECK(t_full.prefix_count(0.5, 16) == 16);
}

TEST_CASE("separation witness: WS converges while WSf stalls at c") {
    const auto built = build_stat_separation(log1p_modulus(), 0.5, eps_pow2(8), 8);
    const auto& s = built.schedule;
    const auto W = WitnessSet::default_line();

    AssessParams ws;
    ws.mode = Mode::WS;
    ws.delta = 2.0 * static_cast<double>(s.counts.back()) / static_cast<double>(s.horizon);
    CHECK(assess(built.sequence, W, ws).converged_at_scale);

    AssessParams wsf;
    wsf.mode = Mode::WSf;
    wsf.f = log1p_modulus();
    wsf.delta = 0.5 * (1.0 - 1e-9);
    CHECK_FALSE(assess(built.sequence, W, wsf).converged_at_scale);
}

TEST_CASE("ui separation: r values, boundedness, telescoping sums") {
    const auto f = log1p_modulus();
    const auto built = build_ui_separation(f, 0.5, eps_pow2(6), 6);
    const auto& s = built.schedule;
    REQUIRE(s.values.size() == 6);
    CHECK(s.values[0] == s.eps[0]);  // r_1 = m_1 eps_1 / m_1
    for (std::size_t k = 1; k < 6; ++k) {
        CHECK(s.values[k] > 0.0);
        CHECK(s.values[k] < s.values[k - 1]);
    }

    const auto t = make_gap_trace(built.sequence, Point::scalar(0.0));
    for (std::uint64_t k = 1; k <= s.horizon; ++k) CHECK(t.value(k) <= s.values[0]);
    // block sums telescope to m_k eps_k
    for (std::size_t k = 0; k < 6; ++k) {
        const double expected = static_cast<double>(s.checkpoints[k]) * s.eps[k];
        CHECK(t.prefix_sum(s.checkpoints[k]) == doctest::Approx(expected).epsilon(1e-9));
        CHECK(f(t.prefix_sum(s.checkpoints[k])) / f(static_cast<double>(s.checkpoints[k])) >=
              0.5 * (1.0 - 1e-6));
    }
    CHECK(uniform_integrability_diag(t, {s.values[0] * 1.000001})[0].second == 0.0);
}

TEST_CASE("lacunary separation: selected blocks are minimal and carry the density") {
    const auto f = log1p_modulus();
    const auto theta = LacunarySchedule::powers_of_two(62);
    const std::size_t K = 6;
    const auto built = build_lacunary_separation(f, theta, 0.9, eps_pow2(K), K);
    const auto& s = built.schedule;
    REQUIRE(s.block_index.size() == K);

    // oracle: exhaustive scan over block indices
    std::size_t r_prev = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double e = s.eps[k - 1];
        std::size_t r = r_prev + 1;
        for (;; ++r) {
            REQUIRE(r <= theta.block_count());
            const double h = static_cast<double>(theta.gap(r));
            if (f(h * e) >= 0.9 * f(h) && h * (1.0 - e) - 1.0 > 0.0) break;
        }
        CHECK(s.block_index[k - 1] == r);
        r_prev = r;
    }

    const auto t = make_gap_trace(built.sequence, Point::scalar(0.0));
    for (std::size_t k = 0; k < K; ++k) {
        const auto [lo, hi] = theta.block(s.block_index[k]);
        const double h = static_cast<double>(theta.gap(s.block_index[k]));
        const auto count = t.range_count(0.5, lo, hi);
        CHECK(count == s.counts[k]);
        CHECK(f(static_cast<double>(count)) / f(h) >= 0.9 - 1e-9);
        CHECK(static_cast<double>(count) / h <= s.eps[k] + 1.0 / h);
    }
}

TEST_CASE("lacunary separation fails when the schedule is too short") {
    const auto theta = LacunarySchedule::powers_of_two(8);
    CHECK_THROWS_AS(
        (void)build_lacunary_separation(log1p_modulus(), theta, 0.9, eps_pow2(6), 6),
        ConstructionError);
}

TEST_CASE("lacunary ui separation: whole blocks at value eps_k") {
    const auto f = log1p_modulus();
    const auto theta = LacunarySchedule::powers_of_two(62);
    const auto built = build_lacunary_ui_separation(f, theta, 0.9, eps_pow2(6), 6);
    const auto& s = built.schedule;
    const auto t = make_gap_trace(built.sequence, Point::scalar(0.0));
    for (std::size_t k = 0; k < 6; ++k) {
        const auto [lo, hi] = theta.block(s.block_index[k]);
        const double h = static_cast<double>(theta.gap(s.block_index[k]));
        CHECK(t.range_sum(lo, hi) == doctest::Approx(h * s.eps[k]).epsilon(1e-12));
        CHECK(f(t.range_sum(lo, hi)) / f(h) >= 0.9 - 1e-9);
    }
    CHECK(lacunary_ui_diag(t, theta, {s.eps[0] * 1.000001})[0].second == 0.0);
}

TEST_CASE("validate_schedule rejects tampered schedules") {
    auto built = build_stat_separation(log1p_modulus(), 0.5, eps_pow2(4), 4);
    auto broken = built.schedule;
    broken.counts[2] += 1;
    CHECK_THROWS_AS(validate_schedule(broken, log1p_modulus()), ConstructionError);
    auto wrong_order = built.schedule;
    std::swap(wrong_order.checkpoints[1], wrong_order.checkpoints[2]);
    CHECK_THROWS_AS(validate_schedule(wrong_order, log1p_modulus()), ConstructionError);
}

TEST_CASE("lacunary schedule helpers") {
    const auto theta = LacunarySchedule::powers_of_two(6);
    CHECK(theta.block_count() == 6);
    CHECK(theta.horizon() == 64);
    CHECK(theta.gap(1) == 2);  // k_1 = 2, k_0 = 0
    CHECK(theta.gap(6) == 32);
    const auto [lo, hi] = theta.block(3);
    CHECK(lo == 5);
    CHECK(hi == 8);
    CHECK(theta.complete_blocks(63) == 5);
    CHECK(theta.complete_blocks(64) == 6);
    CHECK(theta.gaps_diverge(16.0));
    CHECK_FALSE(theta.gaps_diverge(64.0));
    CHECK_THROWS_AS((void)LacunarySchedule(std::vector<std::uint64_t>{0, 3, 3}),
                    std::invalid_argument);
    const auto tri = LacunarySchedule::triangular(5);
    CHECK(tri.gap(5) == 5);
    CHECK(tri.horizon() == 15);
}
