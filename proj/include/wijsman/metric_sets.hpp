// Closed-set representations over Euclidean R^d and the distance oracle
// d(x, A) consumed by all Wijsman diagnostics. The scalar line is d = 1;
// the complex plane is handled as R^2.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wijsman {

struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c) : coords(std::move(c)) { validate(); }
    Point(std::initializer_list<double> c) : coords(c) { validate(); }
    /// Scalar-line convenience.
    static Point scalar(double x) { return Point{x}; }

    std::size_t dim() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }

    bool operator==(const Point& o) const { return coords == o.coords; }

  private:
    void validate() const {
        if (coords.empty()) throw std::invalid_argument("Point: empty coordinate vector");
        for (double c : coords)
            if (!std::isfinite(c)) throw std::invalid_argument("Point: non-finite coordinate");
    }
};

inline double euclidean(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("euclidean: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

class ClosedSet {
  public:
    struct Singleton { Point p; };
    struct Cloud { std::vector<Point> pts; };
    struct Box { Point lo, hi; };
    struct Ball { Point center; double radius; };
    struct Oracle {
        std::size_t dim;
        std::function<double(const Point&)> dist;
    };

    static ClosedSet singleton(Point p) { return ClosedSet(Singleton{std::move(p)}); }
    static ClosedSet cloud(std::vector<Point> pts) {
        if (pts.empty()) throw std::invalid_argument("ClosedSet: empty point cloud");
        const std::size_t d = pts.front().dim();
        for (const auto& p : pts)
            if (p.dim() != d) throw std::invalid_argument("ClosedSet: inconsistent cloud dimensions");
        return ClosedSet(Cloud{std::move(pts)});
    }
    static ClosedSet box(Point lo, Point hi) {
        if (lo.dim() != hi.dim()) throw std::invalid_argument("ClosedSet: box dimension mismatch");
        for (std::size_t i = 0; i < lo.dim(); ++i)
            if (lo[i] > hi[i]) throw std::invalid_argument("ClosedSet: box lower bound above upper");
        return ClosedSet(Box{std::move(lo), std::move(hi)});
    }
    static ClosedSet ball(Point center, double radius) {
        if (!(radius >= 0.0)) throw std::invalid_argument("ClosedSet: negative ball radius");
        return ClosedSet(Ball{std::move(center), radius});
    }
    static ClosedSet oracle(std::size_t dim, std::function<double(const Point&)> dist) {
        if (dim == 0 || !dist) throw std::invalid_argument("ClosedSet: invalid distance oracle");
        return ClosedSet(Oracle{dim, std::move(dist)});
    }

    std::size_t dim() const {
        return std::visit(
            [](const auto& r) -> std::size_t {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Singleton>) return r.p.dim();
                else if constexpr (std::is_same_v<T, Cloud>) return r.pts.front().dim();
                else if constexpr (std::is_same_v<T, Box>) return r.lo.dim();
                else if constexpr (std::is_same_v<T, Ball>) return r.center.dim();
                else return r.dim;
            },
            repr_);
    }

    template <typename T>
    const T* get_if() const { return std::get_if<T>(&repr_); }

    template <typename Visitor>
    decltype(auto) visit(Visitor&& v) const { return std::visit(std::forward<Visitor>(v), repr_); }

  private:
    using Repr = std::variant<Singleton, Cloud, Box, Ball, Oracle>;
    explicit ClosedSet(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

/// Infimum distance d(x, S). Exact for singleton/cloud/box/ball; the oracle
/// representation returns the user value after validation.
inline double dist(const Point& x, const ClosedSet& S) {
    if (x.dim() != S.dim()) throw std::invalid_argument("dist: dimension mismatch");
    return S.visit([&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ClosedSet::Singleton>) {
            return euclidean(x, r.p);
        } else if constexpr (std::is_same_v<T, ClosedSet::Cloud>) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& p : r.pts) best = std::min(best, euclidean(x, p));
            return best;
        } else if constexpr (std::is_same_v<T, ClosedSet::Box>) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.dim(); ++i) {
                const double c = std::clamp(x[i], r.lo[i], r.hi[i]);
                const double d = x[i] - c;
                s += d * d;
            }
            return std::sqrt(s);
        } else if constexpr (std::is_same_v<T, ClosedSet::Ball>) {
            return std::max(0.0, euclidean(x, r.center) - r.radius);
        } else {
            const double v = r.dist(x);
            if (!std::isfinite(v) || v < 0.0)
                throw std::runtime_error("dist: oracle returned invalid value " + std::to_string(v));
            return v;
        }
    });
}

// ---------------------------------------------------------------------------
// Sequences of closed sets, indices 1..N.
//
// Besides a materialized list, two rule representations cover the block
// constructions whose horizons (up to 2^61) cannot be materialized:
//   IndicatorRule  — hi on a union of integer intervals, lo elsewhere
//   ValueRule      — scalar singleton {v_i} on interval i, lo elsewhere

struct IndexBlock {
    std::uint64_t lo = 0, hi = 0;  // inclusive
};

struct ValuedBlock {
    std::uint64_t lo = 0, hi = 0;  // inclusive
    double value = 0.0;
};

class SetSequence {
  public:
    struct Materialized { std::vector<ClosedSet> items; };
    struct IndicatorRule {
        std::vector<IndexBlock> blocks;  // sorted, disjoint
        ClosedSet hi, lo;
    };
    struct ValueRule {
        std::vector<ValuedBlock> blocks;  // sorted, disjoint; item = singleton {value}
        ClosedSet lo;
    };

    static SetSequence materialized(std::vector<ClosedSet> items, ClosedSet limit) {
        if (items.empty()) throw std::invalid_argument("SetSequence: empty item list");
        const std::uint64_t n = items.size();
        return SetSequence(Materialized{std::move(items)}, std::move(limit), n);
    }
    static SetSequence indicator(std::vector<IndexBlock> blocks, std::uint64_t length,
                                 ClosedSet hi, ClosedSet lo, ClosedSet limit) {
        check_blocks(blocks, length);
        return SetSequence(IndicatorRule{std::move(blocks), std::move(hi), std::move(lo)},
                           std::move(limit), length);
    }
    static SetSequence valued(std::vector<ValuedBlock> blocks, std::uint64_t length,
                              ClosedSet lo, ClosedSet limit) {
        std::vector<IndexBlock> shape;
        shape.reserve(blocks.size());
        for (const auto& b : blocks) shape.push_back({b.lo, b.hi});
        check_blocks(shape, length);
        return SetSequence(ValueRule{std::move(blocks), std::move(lo)}, std::move(limit), length);
    }

    std::uint64_t length() const { return length_; }
    const ClosedSet& limit_candidate() const { return limit_; }

    /// A_k for k in 1..length().
    ClosedSet item(std::uint64_t k) const {
        if (k < 1 || k > length_) throw std::out_of_range("SetSequence: index out of range");
        if (const auto* m = std::get_if<Materialized>(&repr_)) return m->items[k - 1];
        if (const auto* ind = std::get_if<IndicatorRule>(&repr_)) {
            for (const auto& b : ind->blocks)
                if (k >= b.lo && k <= b.hi) return ind->hi;
            return ind->lo;
        }
        const auto& vr = std::get<ValueRule>(repr_);
        for (const auto& b : vr.blocks)
            if (k >= b.lo && k <= b.hi) return ClosedSet::singleton(Point::scalar(b.value));
        return vr.lo;
    }

    const Materialized* as_materialized() const { return std::get_if<Materialized>(&repr_); }
    const IndicatorRule* as_indicator() const { return std::get_if<IndicatorRule>(&repr_); }
    const ValueRule* as_valued() const { return std::get_if<ValueRule>(&repr_); }

  private:
    using Repr = std::variant<Materialized, IndicatorRule, ValueRule>;
    SetSequence(Repr r, ClosedSet limit, std::uint64_t n)
        : repr_(std::move(r)), limit_(std::move(limit)), length_(n) {}

    static void check_blocks(const std::vector<IndexBlock>& blocks, std::uint64_t length) {
        std::uint64_t prev_hi = 0;
        for (const auto& b : blocks) {
            if (b.lo < 1 || b.hi < b.lo || b.hi > length)
                throw std::invalid_argument("SetSequence: block outside [1, N]");
            if (b.lo <= prev_hi)
                throw std::invalid_argument("SetSequence: blocks must be sorted and disjoint");
            prev_hi = b.hi;
        }
    }

    Repr repr_;
    ClosedSet limit_;
    std::uint64_t length_;
};

/// |d(x, A_k) - d(x, A)| for k in 1..seq.length().
inline double gap(const Point& x, std::uint64_t k, const SetSequence& seq) {
    return std::abs(dist(x, seq.item(k)) - dist(x, seq.limit_candidate()));
}

}  // namespace wijsman
