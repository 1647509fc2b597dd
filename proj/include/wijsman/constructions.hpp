// Mechanized counterexample constructions: checkpoint searches m_k with
// f(m_k eps_k) >= c f(m_k), the step inequality, and the block sequences
// whose diagnostic traces exhibit weak-sense convergence together with an
// f-modulated ratio >= c.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wijsman/diagnostics.hpp"
#include "wijsman/lacunary.hpp"
#include "wijsman/metric_sets.hpp"
#include "wijsman/modulus.hpp"

namespace wijsman {

enum class ConstructionKind {
    stat_separation,
    cesaro_separation,
    ui_separation,
    lacunary_separation,
    lacunary_ui_separation
};

inline const char* to_string(ConstructionKind k) {
    switch (k) {
        case ConstructionKind::stat_separation: return "stat";
        case ConstructionKind::cesaro_separation: return "cesaro";
        case ConstructionKind::ui_separation: return "ui";
        case ConstructionKind::lacunary_separation: return "lacunary";
        case ConstructionKind::lacunary_ui_separation: return "lacunary-ui";
    }
    return "?";
}

struct ConstructionError : std::runtime_error {
    ConstructionError(std::size_t step, const std::string& what)
        : std::runtime_error("construction failed at step k=" + std::to_string(step) + ": " + what),
          step_k(step) {}
    std::size_t step_k;
};

struct ConstructionSchedule {
    ConstructionKind kind = ConstructionKind::stat_separation;
    double c = 0.0;
    std::vector<double> eps;                   // eps_k, strictly decreasing
    std::vector<std::uint64_t> checkpoints;    // m_k, or k_{r_k} for lacunary kinds
    std::vector<std::size_t> block_index;      // r_k for lacunary kinds
    std::vector<std::uint64_t> counts;         // n_k
    std::vector<IndexBlock> blocks;            // A_k
    std::vector<double> values;                // per-block set values (ui kinds)
    std::uint64_t horizon = 0;                 // emitted sequence length
};

/// Strict inequality 1 - eps_next - 1/m_next > (1 - eps_k) m_k / m_next.
inline bool check_step_inequality(std::uint64_t m_k, double eps_k, double eps_next,
                                  std::uint64_t m_next) {
    const double mn = static_cast<double>(m_next);
    return 1.0 - eps_next - 1.0 / mn > (1.0 - eps_k) * static_cast<double>(m_k) / mn;
}

/// eps_k = 2^-k for k = 1..K.
inline std::vector<double> eps_pow2(std::size_t K) {
    std::vector<double> e;
    for (std::size_t k = 1; k <= K; ++k) e.push_back(std::pow(2.0, -static_cast<double>(k)));
    return e;
}

namespace detail {

// Smallest m > lo with ok(m), by doubling then bisection. Exact when ok is
// monotone in m, which holds for every predicate used below; the emitted
// schedule is re-validated afterwards and minimality is confirmed by the
// bisection invariant ok(result - 1) == false.
template <typename Pred>
std::uint64_t minimal_above(std::uint64_t lo, std::uint64_t cap, std::size_t step, Pred ok) {
    if (lo >= cap) throw ConstructionError(step, "search interval empty (cap too small)");
    std::uint64_t span = 1;
    std::uint64_t hi = lo + 1;
    while (!ok(hi)) {
        if (hi >= cap)
            throw ConstructionError(step, "no feasible checkpoint below search cap " +
                                              std::to_string(cap) +
                                              " (c too large for this modulus, or horizon too short)");
        span = span > (cap - lo) / 2 ? cap - lo : span * 2;
        hi = lo + span;
        if (hi > cap) hi = cap;
    }
    std::uint64_t bad = lo, good = hi;  // ok(good), and lo itself is excluded
    while (good - bad > 1) {
        const std::uint64_t mid = bad + (good - bad) / 2;
        if (ok(mid)) good = mid;
        else bad = mid;
    }
    return good;
}

inline std::uint64_t count_from(double scale, double eps) {
    // n = floor(scale * eps) + 1 in extended precision; exact for the
    // dyadic grids used by every builder.
    const long double prod = static_cast<long double>(scale) * static_cast<long double>(eps);
    return static_cast<std::uint64_t>(std::floor(prod)) + 1;
}

inline void require_eps(const std::vector<double>& eps) {
    if (eps.empty()) throw std::invalid_argument("construction: empty eps sequence");
    double prev = 1.0;
    for (double e : eps) {
        if (!(e > 0.0) || !(e < prev))
            throw std::invalid_argument("construction: eps must be strictly decreasing in (0,1)");
        prev = e;
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Indicator sequence over a union of blocks (the 0/1-valued B_k).

inline SetSequence indicator_sequence(std::vector<IndexBlock> blocks, std::uint64_t length,
                                      ClosedSet hi = ClosedSet::singleton(Point::scalar(1.0)),
                                      ClosedSet lo = ClosedSet::singleton(Point::scalar(0.0)),
                                      ClosedSet limit = ClosedSet::singleton(Point::scalar(0.0))) {
    return SetSequence::indicator(std::move(blocks), length, std::move(hi), std::move(lo),
                                  std::move(limit));
}

struct BuiltSeparation {
    ConstructionSchedule schedule;
    SetSequence sequence;
    bool compatibility_warning = false;  // f looked compatible (or phi_theta below c)
};

// ---------------------------------------------------------------------------
// Schedule validation: every emitted schedule must pass its own invariants.

inline void validate_schedule(const ConstructionSchedule& s, const ModulusFunction& f,
                              const LacunarySchedule* theta = nullptr) {
    const std::size_t K = s.checkpoints.size();
    auto fail = [&](std::size_t k, const std::string& msg) {
        throw ConstructionError(k, "schedule invariant violated: " + msg);
    };
    if (s.eps.size() != K || s.counts.size() != K) fail(0, "ragged schedule arrays");

    const bool lacunary = s.kind == ConstructionKind::lacunary_separation ||
                          s.kind == ConstructionKind::lacunary_ui_separation;
    for (std::size_t k = 0; k < K; ++k) {
        const double scale = lacunary
                                 ? static_cast<double>(theta->gap(s.block_index.at(k)))
                                 : static_cast<double>(s.checkpoints[k]);
        if (!(f(scale * s.eps[k]) >= s.c * f(scale) * (1.0 - 1e-12)))
            fail(k + 1, "f(scale*eps) >= c*f(scale) fails");
        if (s.counts[k] != detail::count_from(scale, s.eps[k]))
            fail(k + 1, "n_k != floor(scale*eps_k) + 1");
        if (k > 0 && s.checkpoints[k] <= s.checkpoints[k - 1])
            fail(k + 1, "checkpoints not strictly increasing");
    }

    if (s.kind == ConstructionKind::stat_separation ||
        s.kind == ConstructionKind::cesaro_separation) {
        for (std::size_t k = 0; k + 1 < K; ++k)
            if (!check_step_inequality(s.checkpoints[k], s.eps[k], s.eps[k + 1],
                                       s.checkpoints[k + 1]))
                fail(k + 2, "step inequality fails");
        // blocks: A_k ends at m_k, starts after m_{k-1}, and carries exactly
        // n_k - n_{k-1} indices so that #(A cap [1, m_k]) = n_k.
        std::uint64_t cum = 0;
        for (std::size_t k = 0; k < K; ++k) {
            const auto& b = s.blocks.at(k);
            if (b.hi != s.checkpoints[k]) fail(k + 1, "block must end at m_k");
            if (k > 0 && b.lo <= s.checkpoints[k - 1]) fail(k + 1, "block leaks below m_{k-1}");
            cum += b.hi - b.lo + 1;
            if (cum != s.counts[k]) fail(k + 1, "#(A cap [1, m_k]) != n_k");
        }
    }

    if (s.kind == ConstructionKind::ui_separation) {
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) {
            if (!(s.values.at(k) > 0.0) || !(s.values[k] < prev))
                fail(k + 1, "r_k must be positive and strictly decreasing");
            prev = s.values[k];
        }
        if (K >= 2 && !(s.values.back() < 0.5 * s.values.front()))
            fail(K, "r_k does not decay over the horizon");
    }

    if (lacunary) {
        if (theta == nullptr) fail(0, "lacunary schedule missing theta");
        for (std::size_t k = 0; k < K; ++k) {
            const std::size_t r = s.block_index.at(k);
            if (k > 0 && r <= s.block_index[k - 1]) fail(k + 1, "block indices not increasing");
            const auto [lo, hi] = theta->block(r);
            const auto& b = s.blocks.at(k);
            if (b.lo < lo || b.hi > hi) fail(k + 1, "A_k not contained in I_{r_k}");
            if (s.kind == ConstructionKind::lacunary_separation) {
                const double h = static_cast<double>(theta->gap(r));
                if (!(h * (1.0 - s.eps[k]) - 1.0 > 0.0)) fail(k + 1, "h(1-eps)-1 > 0 fails");
                if (theta->gap(r) <= s.counts[k]) fail(k + 1, "h_{r_k} - n_k > 0 fails");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Theorem (converse of WS = WS^f): 0/1 indicator sequence with f-density >= c
// at every checkpoint m_k while the classical density vanishes.

inline BuiltSeparation build_stat_separation(const ModulusFunction& f, double c,
                                             std::vector<double> eps, std::size_t K,
                                             std::uint64_t search_cap = 1000000000000ull,
                                             ConstructionKind kind = ConstructionKind::stat_separation) {
    if (K == 0 || eps.size() < K) throw std::invalid_argument("build_stat_separation: bad K");
    eps.resize(K);
    detail::require_eps(eps);
    if (!(c > 0.0) || !(c < 1.0)) throw std::invalid_argument("build_stat_separation: c in (0,1)");

    ConstructionSchedule s;
    s.kind = kind;
    s.c = c;
    s.eps = eps;

    std::uint64_t m_prev = 0, n_prev = 0;
    double eps_prev = 1.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double e = eps[k - 1];
        auto ok = [&](std::uint64_t m) {
            const double md = static_cast<double>(m);
            if (!(f(md * e) >= c * f(md))) return false;
            if (k > 1 && !check_step_inequality(m_prev, eps_prev, e, m)) return false;
            return detail::count_from(md, e) > n_prev;  // keeps n_k strictly increasing
        };
        const std::uint64_t m = detail::minimal_above(m_prev, search_cap, k, ok);
        const std::uint64_t n = detail::count_from(static_cast<double>(m), e);
        s.checkpoints.push_back(m);
        s.counts.push_back(n);
        s.blocks.push_back({m - (n - n_prev) + 1, m});
        m_prev = m;
        n_prev = n;
        eps_prev = e;
    }
    s.horizon = s.checkpoints.back();
    validate_schedule(s, f);

    BuiltSeparation out{std::move(s), indicator_sequence(std::vector<IndexBlock>(), 1), false};
    out.sequence = indicator_sequence(out.schedule.blocks, out.schedule.horizon);
    out.compatibility_warning =
        classify_compatibility(f).verdict == CompatibilityVerdict::compatible;
    return out;
}

// ---------------------------------------------------------------------------
// Converse of WN^f = WS^f cap WI: blocks (m_{k-1}, m_k] carry the value
// r_k = (m_k eps_k - m_{k-1} eps_{k-1}) / (m_k - m_{k-1}) with m_0 = 0, so
// block sums telescope to sum_{l<=m_k} gap = m_k eps_k exactly.

inline BuiltSeparation build_ui_separation(const ModulusFunction& f, double c,
                                           std::vector<double> eps, std::size_t K,
                                           std::uint64_t search_cap = 1000000000000ull) {
    if (K < 2 || eps.size() < K) throw std::invalid_argument("build_ui_separation: need K >= 2");
    eps.resize(K);
    detail::require_eps(eps);
    if (!(c > 0.0) || !(c < 1.0)) throw std::invalid_argument("build_ui_separation: c in (0,1)");

    ConstructionSchedule s;
    s.kind = ConstructionKind::ui_separation;
    s.c = c;
    s.eps = eps;

    std::uint64_t m_prev = 0, n_prev = 0;
    double eps_prev = 1.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double e = eps[k - 1];
        // r_k(m) is increasing in m with limit eps_k, so requiring
        // r_k >= eps_{k+1} at step k guarantees r_{k+1} < eps_{k+1} <= r_k.
        const double r_floor = k < K ? eps[k] : 0.0;
        auto r_of = [&](std::uint64_t m) {
            const double md = static_cast<double>(m);
            const double mp = static_cast<double>(m_prev);
            return (md * e - mp * eps_prev) / (md - mp);
        };
        auto ok = [&](std::uint64_t m) {
            const double md = static_cast<double>(m);
            if (!(f(md * e) >= c * f(md))) return false;
            if (k > 1 && !check_step_inequality(m_prev, eps_prev, e, m)) return false;
            if (detail::count_from(md, e) <= n_prev) return false;
            const double r = r_of(m);
            return r > 0.0 && r >= r_floor;
        };
        const std::uint64_t m = detail::minimal_above(m_prev, search_cap, k, ok);
        s.checkpoints.push_back(m);
        s.counts.push_back(detail::count_from(static_cast<double>(m), e));
        s.values.push_back(k == 1 ? e : r_of(m));  // r_1 = m_1 eps_1 / m_1
        s.blocks.push_back({m_prev + 1, m});
        n_prev = s.counts.back();
        m_prev = m;
        eps_prev = e;
    }
    s.horizon = s.checkpoints.back();
    validate_schedule(s, f);

    std::vector<ValuedBlock> vb;
    for (std::size_t k = 0; k < K; ++k)
        vb.push_back({s.blocks[k].lo, s.blocks[k].hi, s.values[k]});
    SetSequence seq = SetSequence::valued(std::move(vb), s.horizon,
                                          ClosedSet::singleton(Point::scalar(0.0)),
                                          ClosedSet::singleton(Point::scalar(0.0)));
    const bool warn = classify_compatibility(f).verdict == CompatibilityVerdict::compatible;
    return {std::move(s), std::move(seq), warn};
}

// ---------------------------------------------------------------------------
// Lacunary separation (0/1 sequence with A_k = (k_{r_k} - n_k, k_{r_k}]).

inline BuiltSeparation build_lacunary_separation(const ModulusFunction& f,
                                                 const LacunarySchedule& theta, double c,
                                                 std::vector<double> eps, std::size_t K) {
    if (K == 0 || eps.size() < K) throw std::invalid_argument("build_lacunary_separation: bad K");
    eps.resize(K);
    detail::require_eps(eps);
    if (!(c > 0.0) || !(c < 1.0)) throw std::invalid_argument("build_lacunary_separation: c in (0,1)");

    ConstructionSchedule s;
    s.kind = ConstructionKind::lacunary_separation;
    s.c = c;
    s.eps = eps;

    std::size_t r_prev = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double e = eps[k - 1];
        std::size_t r = 0;
        for (std::size_t cand = r_prev + 1; cand <= theta.block_count(); ++cand) {
            const double h = static_cast<double>(theta.gap(cand));
            if (f(h * e) >= c * f(h) && h * (1.0 - e) - 1.0 > 0.0) {
                r = cand;
                break;
            }
        }
        if (r == 0)
            throw ConstructionError(k, "no qualifying block within horizon (R = " +
                                           std::to_string(theta.block_count()) + ")");
        const std::uint64_t n = detail::count_from(static_cast<double>(theta.gap(r)), e);
        s.block_index.push_back(r);
        s.checkpoints.push_back(theta.index(r));
        s.counts.push_back(n);
        s.blocks.push_back({theta.index(r) - n + 1, theta.index(r)});
        r_prev = r;
    }
    s.horizon = s.checkpoints.back();
    validate_schedule(s, f, &theta);

    SetSequence seq = indicator_sequence(s.blocks, s.horizon);
    const std::size_t t_probe = theta.block_count();
    const bool warn = phi_theta_hat(f, theta, eps.back(), t_probe) < c;
    return {std::move(s), std::move(seq), warn};
}

// ---------------------------------------------------------------------------
// Lacunary UI separation: B_l = {eps_k} on the whole block I_{r_k}, {0}
// elsewhere.

inline BuiltSeparation build_lacunary_ui_separation(const ModulusFunction& f,
                                                    const LacunarySchedule& theta, double c,
                                                    std::vector<double> eps, std::size_t K) {
    if (K == 0 || eps.size() < K) throw std::invalid_argument("build_lacunary_ui_separation: bad K");
    eps.resize(K);
    detail::require_eps(eps);
    if (!(c > 0.0) || !(c < 1.0))
        throw std::invalid_argument("build_lacunary_ui_separation: c in (0,1)");

    ConstructionSchedule s;
    s.kind = ConstructionKind::lacunary_ui_separation;
    s.c = c;
    s.eps = eps;

    std::size_t r_prev = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double e = eps[k - 1];
        std::size_t r = 0;
        for (std::size_t cand = r_prev + 1; cand <= theta.block_count(); ++cand) {
            const double h = static_cast<double>(theta.gap(cand));
            if (f(h * e) >= c * f(h)) {
                r = cand;
                break;
            }
        }
        if (r == 0)
            throw ConstructionError(k, "no qualifying block within horizon (R = " +
                                           std::to_string(theta.block_count()) + ")");
        const auto [lo, hi] = theta.block(r);
        s.block_index.push_back(r);
        s.checkpoints.push_back(theta.index(r));
        s.counts.push_back(detail::count_from(static_cast<double>(theta.gap(r)), e));
        s.blocks.push_back({lo, hi});
        s.values.push_back(e);
        r_prev = r;
    }
    s.horizon = s.checkpoints.back();
    validate_schedule(s, f, &theta);

    std::vector<ValuedBlock> vb;
    for (std::size_t k = 0; k < K; ++k)
        vb.push_back({s.blocks[k].lo, s.blocks[k].hi, s.values[k]});
    SetSequence seq = SetSequence::valued(std::move(vb), s.horizon,
                                          ClosedSet::singleton(Point::scalar(0.0)),
                                          ClosedSet::singleton(Point::scalar(0.0)));
    const bool warn = phi_theta_hat(f, theta, eps.back(), theta.block_count()) < c;
    return {std::move(s), std::move(seq), warn};
}

}  // namespace wijsman
