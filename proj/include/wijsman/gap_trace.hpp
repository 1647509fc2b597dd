// Per-witness gap sequences g_k = |d(x,A_k) - d(x,A)| with prefix and block
// aggregates. Two storages: a dense vector for materialized sequences, and a
// piecewise-constant form (value on disjoint integer intervals, background
// elsewhere) for rule-based sequences whose horizon cannot be materialized.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "wijsman/metric_sets.hpp"

namespace wijsman {

class GapTrace {
  public:
    static GapTrace dense(Point witness, std::vector<double> gaps) {
        if (gaps.empty()) throw std::invalid_argument("GapTrace: empty gap vector");
        for (double g : gaps)
            if (!std::isfinite(g) || g < 0.0)
                throw std::invalid_argument("GapTrace: gaps must be finite and nonnegative");
        GapTrace t;
        t.witness_ = std::move(witness);
        t.n_ = gaps.size();
        Dense d;
        d.cumsum.resize(gaps.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < gaps.size(); ++i) {
            acc += gaps[i];
            d.cumsum[i] = acc;
        }
        d.g = std::move(gaps);
        t.storage_ = std::move(d);
        return t;
    }

    static GapTrace piecewise(Point witness, std::vector<ValuedBlock> segments,
                              double background, std::uint64_t length) {
        if (length == 0) throw std::invalid_argument("GapTrace: zero length");
        if (!(background >= 0.0) || !std::isfinite(background))
            throw std::invalid_argument("GapTrace: invalid background gap");
        std::uint64_t prev_hi = 0;
        for (const auto& s : segments) {
            if (s.lo < 1 || s.hi < s.lo || s.hi > length || s.lo <= prev_hi)
                throw std::invalid_argument("GapTrace: segments must be sorted, disjoint, in [1,N]");
            if (!(s.value >= 0.0) || !std::isfinite(s.value))
                throw std::invalid_argument("GapTrace: invalid segment value");
            prev_hi = s.hi;
        }
        GapTrace t;
        t.witness_ = std::move(witness);
        t.n_ = length;
        t.storage_ = Piecewise{std::move(segments), background};
        return t;
    }

    const Point& witness() const { return witness_; }
    std::uint64_t length() const { return n_; }
    bool is_dense() const { return std::holds_alternative<Dense>(storage_); }

    double value(std::uint64_t k) const {
        if (k < 1 || k > n_) throw std::out_of_range("GapTrace: index out of range");
        if (const auto* d = std::get_if<Dense>(&storage_)) return d->g[k - 1];
        const auto& p = std::get<Piecewise>(storage_);
        for (const auto& s : p.segs)
            if (k >= s.lo && k <= s.hi) return s.value;
        return p.background;
    }

    /// sum_{k<=n} g_k
    double prefix_sum(std::uint64_t n) const {
        check(n);
        if (const auto* d = std::get_if<Dense>(&storage_)) return d->cumsum[n - 1];
        const auto& p = std::get<Piecewise>(storage_);
        double sum = 0.0;
        std::uint64_t covered = 0;
        for (const auto& s : p.segs) {
            if (s.lo > n) break;
            const std::uint64_t hi = std::min(s.hi, n);
            const std::uint64_t len = hi - s.lo + 1;
            sum += s.value * static_cast<double>(len);
            covered += len;
        }
        return sum + p.background * static_cast<double>(n - covered);
    }

    /// #{k <= n : g_k > eps}
    std::uint64_t prefix_count(double eps, std::uint64_t n) const {
        check(n);
        if (const auto* d = std::get_if<Dense>(&storage_)) {
            std::uint64_t c = 0;
            for (std::uint64_t k = 0; k < n; ++k)
                if (d->g[k] > eps) ++c;
            return c;
        }
        const auto& p = std::get<Piecewise>(storage_);
        std::uint64_t count = 0, covered = 0;
        for (const auto& s : p.segs) {
            if (s.lo > n) break;
            const std::uint64_t hi = std::min(s.hi, n);
            const std::uint64_t len = hi - s.lo + 1;
            if (s.value > eps) count += len;
            covered += len;
        }
        if (p.background > eps) count += n - covered;
        return count;
    }

    /// #{k in [lo, hi] : g_k > eps}
    std::uint64_t range_count(double eps, std::uint64_t lo, std::uint64_t hi) const {
        return prefix_count(eps, hi) - (lo > 1 ? prefix_count(eps, lo - 1) : 0);
    }
    double range_sum(std::uint64_t lo, std::uint64_t hi) const {
        return prefix_sum(hi) - (lo > 1 ? prefix_sum(lo - 1) : 0.0);
    }

    /// Truncated-sum aggregate sum_{k<=n, g_k >= c} g_k.
    double truncated_prefix_sum(double c, std::uint64_t n) const {
        check(n);
        if (const auto* d = std::get_if<Dense>(&storage_)) {
            double s = 0.0;
            for (std::uint64_t k = 0; k < n; ++k)
                if (d->g[k] >= c) s += d->g[k];
            return s;
        }
        const auto& p = std::get<Piecewise>(storage_);
        double sum = 0.0;
        std::uint64_t covered = 0;
        for (const auto& s : p.segs) {
            if (s.lo > n) break;
            const std::uint64_t hi = std::min(s.hi, n);
            const std::uint64_t len = hi - s.lo + 1;
            if (s.value >= c) sum += s.value * static_cast<double>(len);
            covered += len;
        }
        if (p.background >= c) sum += p.background * static_cast<double>(n - covered);
        return sum;
    }

    /// sup_{n<=N} (1/n) sum_{k<=n, g_k >= c} g_k. For the piecewise storage
    /// the quotient is monotone between segment boundaries, so boundary
    /// candidates are exact.
    double ui_sup(double c) const {
        if (const auto* d = std::get_if<Dense>(&storage_)) {
            double best = 0.0, s = 0.0;
            for (std::uint64_t k = 1; k <= n_; ++k) {
                const double g = d->g[k - 1];
                if (g >= c) s += g;
                best = std::max(best, s / static_cast<double>(k));
            }
            return best;
        }
        const auto& p = std::get<Piecewise>(storage_);
        std::vector<std::uint64_t> candidates{1, n_};
        for (const auto& s : p.segs) {
            for (std::uint64_t cand : {s.lo > 1 ? s.lo - 1 : 1, s.lo, s.hi,
                                       s.hi < n_ ? s.hi + 1 : n_})
                candidates.push_back(cand);
        }
        double best = 0.0;
        for (std::uint64_t n : candidates)
            best = std::max(best, truncated_prefix_sum(c, n) / static_cast<double>(n));
        return best;
    }

  private:
    struct Dense {
        std::vector<double> g;
        std::vector<double> cumsum;
    };
    struct Piecewise {
        std::vector<ValuedBlock> segs;
        double background;
    };

    void check(std::uint64_t n) const {
        if (n < 1 || n > n_) throw std::out_of_range("GapTrace: prefix index out of range");
    }

    Point witness_{0.0};
    std::uint64_t n_ = 0;
    std::variant<Dense, Piecewise> storage_;
};

/// Largest sequence we will materialize gap-by-gap.
inline constexpr std::uint64_t kDenseTraceLimit = std::uint64_t{1} << 26;

/// Build the witness gap trace from a sequence, choosing dense or piecewise
/// storage to match the sequence representation.
inline GapTrace make_gap_trace(const SetSequence& seq, const Point& x) {
    const double base = dist(x, seq.limit_candidate());
    if (const auto* m = seq.as_materialized()) {
        std::vector<double> g;
        g.reserve(m->items.size());
        for (const auto& s : m->items) g.push_back(std::abs(dist(x, s) - base));
        return GapTrace::dense(x, std::move(g));
    }
    if (const auto* ind = seq.as_indicator()) {
        const double on = std::abs(dist(x, ind->hi) - base);
        const double off = std::abs(dist(x, ind->lo) - base);
        std::vector<ValuedBlock> segs;
        segs.reserve(ind->blocks.size());
        for (const auto& b : ind->blocks) segs.push_back({b.lo, b.hi, on});
        return GapTrace::piecewise(x, std::move(segs), off, seq.length());
    }
    const auto* vr = seq.as_valued();
    const double off = std::abs(dist(x, vr->lo) - base);
    std::vector<ValuedBlock> segs;
    segs.reserve(vr->blocks.size());
    for (const auto& b : vr->blocks) {
        const double on = std::abs(dist(x, ClosedSet::singleton(Point::scalar(b.value))) - base);
        segs.push_back({b.lo, b.hi, on});
    }
    return GapTrace::piecewise(x, std::move(segs), off, seq.length());
}

}  // namespace wijsman
