// Modulus functions: builtin families, numerical axiom checks, and the
// compatibility classifier based on finite estimates of
// phi(eps) = limsup_n f(n*eps)/f(n) and its lacunary analogue.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wijsman/lacunary.hpp"

namespace wijsman {

/// Evaluation oracle for f: R+ -> R+ plus metadata.
struct ModulusFunction {
    std::string name;
    std::function<double(double)> eval;
    std::map<std::string, double> params;

    double operator()(double t) const { return eval(t); }
};

namespace detail {

// Lambert W on [0, inf): inverse of w*e^w, Halley iteration started at
// log1p(x). Relative error <= 1e-12.
inline double lambert_w0(double x) {
    if (!(x >= 0.0)) throw std::domain_error("lambert_w: negative argument");
    if (x == 0.0) return 0.0;
    double w = std::log1p(x);
    for (int it = 0; it < 64; ++it) {
        const double ew = std::exp(w);
        const double res = w * ew - x;
        const double denom = ew * (w + 1.0) - (w + 2.0) * res / (2.0 * w + 2.0);
        const double step = res / denom;
        w -= step;
        if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

inline void require_exponent(double p, const char* which) {
    if (!(p > 0.0) || !(p <= 1.0))
        throw std::invalid_argument(std::string("modulus exponent ") + which +
                                    " out of range (0,1]: " + std::to_string(p));
}

}  // namespace detail

inline ModulusFunction identity_modulus() {
    return {"identity", [](double t) { return t; }, {}};
}

/// f(x) = x^p + x^q with 0 < p,q <= 1.
inline ModulusFunction power_sum_modulus(double p, double q) {
    detail::require_exponent(p, "p");
    detail::require_exponent(q, "q");
    return {"power_sum",
            [p, q](double t) { return std::pow(t, p) + std::pow(t, q); },
            {{"p", p}, {"q", q}}};
}

/// f(x) = x^p + log(x+1) with 0 < p <= 1.
inline ModulusFunction power_plus_log_modulus(double p) {
    detail::require_exponent(p, "p");
    return {"power_plus_log",
            [p](double t) { return std::pow(t, p) + std::log1p(t); },
            {{"p", p}}};
}

/// f(x) = x + x/(x+1).
inline ModulusFunction x_plus_rational_modulus() {
    return {"x_plus_rational", [](double t) { return t + t / (t + 1.0); }, {}};
}

/// f(x) = log(x+1).
inline ModulusFunction log1p_modulus() {
    return {"log1p", [](double t) { return std::log1p(t); }, {}};
}

/// f(x) = W(x), the inverse of x*e^x on R+.
inline ModulusFunction lambert_w_modulus() {
    return {"lambert_w", [](double t) { return detail::lambert_w0(t); }, {}};
}

/// Builtin lookup for config/CLI use. Unknown names are rejected.
inline ModulusFunction make_builtin(const std::string& name,
                                    const std::map<std::string, double>& params = {}) {
    auto get = [&](const char* key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "identity") return identity_modulus();
    if (name == "power_sum") return power_sum_modulus(get("p", 1.0), get("q", 1.0));
    if (name == "power_plus_log") return power_plus_log_modulus(get("p", 1.0));
    if (name == "x_plus_rational") return x_plus_rational_modulus();
    if (name == "log1p") return log1p_modulus();
    if (name == "lambert_w") return lambert_w_modulus();
    throw std::invalid_argument("unknown builtin modulus: " + name);
}

// ---------------------------------------------------------------------------
// Axiom checks (sampled, with recorded tolerance)

struct AxiomGrid {
    double t_max = 1e6;
    double tol = 1e-9;
    int geometric_points = 41;  // t_max / 2^j samples
};

struct AxiomCheck {
    bool pass = true;
    std::string detail;  // witness description on failure
};

struct AxiomReport {
    AxiomCheck vanishes_only_at_zero;  // axiom 1
    AxiomCheck subadditive;            // axiom 2
    AxiomCheck increasing;             // axiom 3
    AxiomCheck continuous_at_zero;     // axiom 4
    AxiomCheck unbounded;
    AxiomGrid grid;

    bool all_pass() const {
        return vanishes_only_at_zero.pass && subadditive.pass && increasing.pass &&
               continuous_at_zero.pass && unbounded.pass;
    }
};

inline AxiomReport check_axioms(const ModulusFunction& f, AxiomGrid grid = {}) {
    if (!(grid.t_max > 0.0) || grid.geometric_points < 2)
        throw std::invalid_argument("check_axioms: grid needs >= 2 points in (0, t_max]");
    AxiomReport rep;
    rep.grid = grid;

    std::vector<double> pts;
    for (int j = 0; j < grid.geometric_points; ++j)
        pts.push_back(grid.t_max / std::pow(2.0, j));
    for (double extra : {1.0, 2.0, 3.0})
        if (extra <= grid.t_max) pts.push_back(extra);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    auto scale = [&](double v) { return grid.tol * std::max(1.0, std::abs(v)); };

    // axiom 1: f(0)=0, f(t)>0 for t>0, finite everywhere sampled
    const double f0 = f(0.0);
    if (!std::isfinite(f0) || std::abs(f0) > grid.tol) {
        rep.vanishes_only_at_zero = {false, "f(0) = " + std::to_string(f0)};
    }
    for (double t : pts) {
        const double v = f(t);
        if (!std::isfinite(v) || v <= 0.0) {
            rep.vanishes_only_at_zero = {false, "f(" + std::to_string(t) + ") = " + std::to_string(v)};
            break;
        }
    }

    // axiom 2: f(s+t) <= f(s)+f(t) on all sampled pairs
    for (double s : pts) {
        for (double t : pts) {
            const double lhs = f(s + t);
            const double rhs = f(s) + f(t);
            if (lhs > rhs + scale(rhs)) {
                rep.subadditive = {false, "f(" + std::to_string(s) + "+" + std::to_string(t) +
                                             ") = " + std::to_string(lhs) + " > " + std::to_string(rhs)};
                break;
            }
        }
        if (!rep.subadditive.pass) break;
    }

    // axiom 3: monotone on the sorted grid
    double prev = f0;
    double prev_t = 0.0;
    for (double t : pts) {
        const double v = f(t);
        if (v + scale(v) < prev) {
            rep.increasing = {false, "f(" + std::to_string(prev_t) + ") > f(" + std::to_string(t) + ")"};
            break;
        }
        prev = v;
        prev_t = t;
    }

    // axiom 4: f -> 0 along t = 2^-j
    {
        const double top = f(1.0);
        const double bottom = f(std::pow(2.0, -60));
        bool monotone = true;
        double last = top;
        for (int j = 1; j <= 60; ++j) {
            const double v = f(std::pow(2.0, -j));
            if (v > last + scale(last)) { monotone = false; break; }
            last = v;
        }
        const bool decays = bottom <= 1e-3 || (top > 0.0 && bottom / top <= 1e-2);
        if (!monotone || !decays)
            rep.continuous_at_zero = {false, "f(2^-60) = " + std::to_string(bottom) +
                                                ", f(1) = " + std::to_string(top)};
    }

    // unboundedness probe along t = 2^j
    {
        double last = f(1.0);
        bool growing = true;
        for (int j = 1; j <= 60; ++j) {
            const double v = f(std::pow(2.0, j));
            if (v <= last) { growing = false; break; }
            last = v;
        }
        const double bound = 10.0 * std::max(1e-9, f(1.0));
        if (!growing || last < bound)
            rep.unbounded = {false, "f(2^60) = " + std::to_string(last)};
    }
    return rep;
}

// ---------------------------------------------------------------------------
// phi estimators and the compatibility classifier

/// Tail maximum of f(n*eps)/f(n) over the geometric probe grid
/// n = tail_start * 2^j <= n_max. Finite estimator of the limsup.
inline double phi_hat(const ModulusFunction& f, double eps,
                      double n_max = 1099511627776.0 /* 2^40 */,
                      double tail_start = 1048576.0 /* 2^20 */) {
    if (!(eps > 0.0) || !(eps <= 1.0))
        throw std::invalid_argument("phi_hat: eps must lie in (0,1]");
    if (!(tail_start >= 1.0) || !(tail_start < n_max))
        throw std::invalid_argument("phi_hat: need 1 <= tail_start < n_max");
    double best = 0.0;
    for (double n = tail_start; n <= n_max; n *= 2.0) {
        const double denom = f(n);
        if (!(denom > 0.0))
            throw std::runtime_error("phi_hat: f(" + std::to_string(n) +
                                     ") = 0, violates axiom 1");
        best = std::max(best, f(n * eps) / denom);
    }
    return best;
}

/// Tail maximum of f(h_t*eps)/f(h_t) over t in [t_max/2, t_max].
inline double phi_theta_hat(const ModulusFunction& f, const LacunarySchedule& theta,
                            double eps, std::size_t t_max) {
    if (!(eps > 0.0) || !(eps <= 1.0))
        throw std::invalid_argument("phi_theta_hat: eps must lie in (0,1]");
    if (theta.block_count() < t_max)
        throw std::out_of_range("phi_theta_hat: schedule exhausted, horizon is " +
                                std::to_string(theta.block_count()) + " blocks, requested " +
                                std::to_string(t_max));
    double best = 0.0;
    for (std::size_t t = std::max<std::size_t>(1, t_max / 2); t <= t_max; ++t) {
        const double h = static_cast<double>(theta.gap(t));
        const double denom = f(h);
        if (!(denom > 0.0))
            throw std::runtime_error("phi_theta_hat: f(h_t) = 0 at t = " + std::to_string(t));
        best = std::max(best, f(h * eps) / denom);
    }
    return best;
}

enum class CompatibilityVerdict { compatible, non_compatible, inconclusive };

inline const char* to_string(CompatibilityVerdict v) {
    switch (v) {
        case CompatibilityVerdict::compatible: return "compatible";
        case CompatibilityVerdict::non_compatible: return "non-compatible";
        default: return "inconclusive";
    }
}

struct CompatibilityReport {
    std::vector<std::pair<double, double>> phi_estimates;  // (eps, phi_hat)
    CompatibilityVerdict verdict = CompatibilityVerdict::inconclusive;
    double probe_ceiling = 0.0;
    double threshold = 0.0;
};

inline std::vector<double> default_eps_grid(int depth = 20) {
    std::vector<double> grid;
    for (int i = 1; i <= depth; ++i) grid.push_back(std::pow(2.0, -i));
    return grid;
}

/// Classify f by the behaviour of phi_hat along a decreasing eps grid.
/// compatible: the estimate decays below `threshold` and is still falling.
/// non-compatible: the estimate stalls at or above `threshold` (the last
/// three grid points agree to within 20% relative).
inline CompatibilityReport classify_compatibility(
    const ModulusFunction& f, std::vector<double> eps_grid = default_eps_grid(),
    double n_max = 1099511627776.0, double threshold = 0.05) {
    if (eps_grid.size() < 3)
        throw std::invalid_argument("classify_compatibility: need >= 3 eps values");
    for (std::size_t i = 1; i < eps_grid.size(); ++i)
        if (!(eps_grid[i] < eps_grid[i - 1]))
            throw std::invalid_argument("classify_compatibility: eps grid must be strictly decreasing");

    CompatibilityReport rep;
    rep.probe_ceiling = n_max;
    rep.threshold = threshold;
    for (double eps : eps_grid)
        rep.phi_estimates.emplace_back(eps, phi_hat(f, eps, n_max));

    const std::size_t m = rep.phi_estimates.size();
    const double a = rep.phi_estimates[m - 3].second;
    const double b = rep.phi_estimates[m - 2].second;
    const double c = rep.phi_estimates[m - 1].second;
    const double tail = c;

    const bool falling = a > b - 1e-15 && b > c - 1e-15 && a > c;
    const double hi = std::max({a, b, c});
    const double lo = std::min({a, b, c});
    const bool plateau = hi > 0.0 && (hi - lo) <= 0.2 * hi;

    if (tail < threshold && falling)
        rep.verdict = CompatibilityVerdict::compatible;
    else if (tail >= threshold && plateau)
        rep.verdict = CompatibilityVerdict::non_compatible;
    else
        rep.verdict = CompatibilityVerdict::inconclusive;
    return rep;
}

}  // namespace wijsman
