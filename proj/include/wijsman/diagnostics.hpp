// Finite-truncation convergence traces: classical and f-modulated densities,
// strong Cesaro ratios, their lacunary block versions, uniform-integrability
// diagnostics, and the witness-set verdict aggregator.
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wijsman/gap_trace.hpp"
#include "wijsman/lacunary.hpp"
#include "wijsman/modulus.hpp"

namespace wijsman {

struct WitnessSet {
    std::vector<Point> points;

    explicit WitnessSet(std::vector<Point> pts) : points(std::move(pts)) {
        if (points.empty()) throw std::invalid_argument("WitnessSet: empty");
        for (const auto& p : points)
            if (p.dim() != points.front().dim())
                throw std::invalid_argument("WitnessSet: inconsistent dimensions");
    }

    /// {0, 1/4, 1/2, 3/4, 1, 2} on the line. x = 1/2 is kept deliberately:
    /// it is the degenerate witness with |1-x| = |x|.
    static WitnessSet default_line() {
        return WitnessSet({Point::scalar(0.0), Point::scalar(0.25), Point::scalar(0.5),
                           Point::scalar(0.75), Point::scalar(1.0), Point::scalar(2.0)});
    }
};

inline std::vector<double> default_diag_eps_grid() {
    return {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
}

namespace detail {
inline void require_dense(const GapTrace& t, const char* op) {
    if (!t.is_dense())
        throw std::invalid_argument(std::string(op) +
                                    ": full per-n trace requires a dense gap trace; "
                                    "use the *_ratio_at accessors for rule-based sequences");
}
}  // namespace detail

// --- per-n traces (dense storage) ------------------------------------------

/// r_n = #{k<=n : g_k > eps} / n, n = 1..N.
inline std::vector<double> density_trace(const GapTrace& t, double eps) {
    detail::require_dense(t, "density_trace");
    std::vector<double> out(t.length());
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= t.length(); ++n) {
        if (t.value(n) > eps) ++count;
        out[n - 1] = static_cast<double>(count) / static_cast<double>(n);
    }
    return out;
}

/// r_n = f(#{k<=n : g_k > eps}) / f(n).
inline std::vector<double> f_density_trace(const GapTrace& t, double eps,
                                           const ModulusFunction& f) {
    detail::require_dense(t, "f_density_trace");
    std::vector<double> out(t.length());
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= t.length(); ++n) {
        if (t.value(n) > eps) ++count;
        out[n - 1] = f(static_cast<double>(count)) / f(static_cast<double>(n));
    }
    return out;
}

/// r_n = (1/n) sum_{k<=n} g_k.
inline std::vector<double> cesaro_trace(const GapTrace& t) {
    detail::require_dense(t, "cesaro_trace");
    std::vector<double> out(t.length());
    for (std::uint64_t n = 1; n <= t.length(); ++n)
        out[n - 1] = t.prefix_sum(n) / static_cast<double>(n);
    return out;
}

/// r_n = f(sum_{k<=n} g_k) / f(n).
inline std::vector<double> f_cesaro_trace(const GapTrace& t, const ModulusFunction& f) {
    detail::require_dense(t, "f_cesaro_trace");
    std::vector<double> out(t.length());
    for (std::uint64_t n = 1; n <= t.length(); ++n)
        out[n - 1] = f(t.prefix_sum(n)) / f(static_cast<double>(n));
    return out;
}

// --- checkpoint accessors (any storage) -------------------------------------

inline double density_ratio_at(const GapTrace& t, double eps, std::uint64_t n) {
    return static_cast<double>(t.prefix_count(eps, n)) / static_cast<double>(n);
}
inline double f_density_ratio_at(const GapTrace& t, double eps, const ModulusFunction& f,
                                 std::uint64_t n) {
    return f(static_cast<double>(t.prefix_count(eps, n))) / f(static_cast<double>(n));
}
inline double cesaro_ratio_at(const GapTrace& t, std::uint64_t n) {
    return t.prefix_sum(n) / static_cast<double>(n);
}
inline double f_cesaro_ratio_at(const GapTrace& t, const ModulusFunction& f, std::uint64_t n) {
    return f(t.prefix_sum(n)) / f(static_cast<double>(n));
}

// --- lacunary block traces ---------------------------------------------------

struct BlockTrace {
    std::vector<double> ratios;       // one per complete block, r = 1..R
    std::size_t complete_blocks = 0;
    bool final_block_incomplete = false;  // trailing partial block was excluded
};

/// rho_r = f(#{k in I_r : g_k > eps}) / f(h_r) over complete blocks.
inline BlockTrace lacunary_f_density_trace(const GapTrace& t, double eps,
                                           const ModulusFunction& f,
                                           const LacunarySchedule& theta) {
    BlockTrace out;
    out.complete_blocks = theta.complete_blocks(t.length());
    if (out.complete_blocks == 0)
        throw std::invalid_argument("lacunary trace: no complete block within the trace length");
    out.final_block_incomplete = theta.index(out.complete_blocks) < t.length();
    out.ratios.reserve(out.complete_blocks);
    for (std::size_t r = 1; r <= out.complete_blocks; ++r) {
        const auto [lo, hi] = theta.block(r);
        const double count = static_cast<double>(t.range_count(eps, lo, hi));
        out.ratios.push_back(f(count) / f(static_cast<double>(theta.gap(r))));
    }
    return out;
}

/// rho_r = f(sum_{k in I_r} g_k) / f(h_r) over complete blocks.
inline BlockTrace lacunary_f_cesaro_trace(const GapTrace& t, const ModulusFunction& f,
                                          const LacunarySchedule& theta) {
    BlockTrace out;
    out.complete_blocks = theta.complete_blocks(t.length());
    if (out.complete_blocks == 0)
        throw std::invalid_argument("lacunary trace: no complete block within the trace length");
    out.final_block_incomplete = theta.index(out.complete_blocks) < t.length();
    out.ratios.reserve(out.complete_blocks);
    for (std::size_t r = 1; r <= out.complete_blocks; ++r) {
        const auto [lo, hi] = theta.block(r);
        out.ratios.push_back(f(t.range_sum(lo, hi)) / f(static_cast<double>(theta.gap(r))));
    }
    return out;
}

// --- uniform integrability ----------------------------------------------------

/// For each cutoff c: sup_{n<=N} (1/n) sum_{k<=n, g_k>=c} g_k.
inline std::vector<std::pair<double, double>> uniform_integrability_diag(
    const GapTrace& t, const std::vector<double>& c_grid) {
    if (c_grid.empty()) throw std::invalid_argument("uniform_integrability_diag: empty cutoff grid");
    std::vector<std::pair<double, double>> out;
    out.reserve(c_grid.size());
    for (double c : c_grid) out.emplace_back(c, t.ui_sup(c));
    return out;
}

/// Lacunary variant: sup over complete blocks t of the block-truncated sum.
/// Normalized by 1/h_t by default; `normalized = false` gives the raw block
/// sum for fidelity against the unnormalized display.
inline std::vector<std::pair<double, double>> lacunary_ui_diag(
    const GapTrace& t, const LacunarySchedule& theta, const std::vector<double>& c_grid,
    bool normalized = true) {
    if (c_grid.empty()) throw std::invalid_argument("lacunary_ui_diag: empty cutoff grid");
    const std::size_t R = theta.complete_blocks(t.length());
    if (R == 0)
        throw std::invalid_argument("lacunary_ui_diag: no complete block within the trace length");
    std::vector<std::pair<double, double>> out;
    out.reserve(c_grid.size());
    for (double c : c_grid) {
        double best = 0.0;
        for (std::size_t r = 1; r <= R; ++r) {
            const auto [lo, hi] = theta.block(r);
            double v = t.truncated_prefix_sum(c, hi) -
                       (lo > 1 ? t.truncated_prefix_sum(c, lo - 1) : 0.0);
            if (normalized) v /= static_cast<double>(theta.gap(r));
            best = std::max(best, v);
        }
        out.emplace_back(c, best);
    }
    return out;
}

// --- verdicts -----------------------------------------------------------------

enum class Mode { WS, WSf, WN, WNf, WS_theta, WSf_theta, WN_theta, WNf_theta, WI, WI_theta };

inline const char* to_string(Mode m) {
    switch (m) {
        case Mode::WS: return "WS";
        case Mode::WSf: return "WSf";
        case Mode::WN: return "WN";
        case Mode::WNf: return "WNf";
        case Mode::WS_theta: return "WS-theta";
        case Mode::WSf_theta: return "WSf-theta";
        case Mode::WN_theta: return "WN-theta";
        case Mode::WNf_theta: return "WNf-theta";
        case Mode::WI: return "WI";
        case Mode::WI_theta: return "WI-theta";
    }
    return "?";
}

inline bool mode_needs_f(Mode m) {
    return m == Mode::WSf || m == Mode::WNf || m == Mode::WSf_theta || m == Mode::WNf_theta;
}
inline bool mode_needs_theta(Mode m) {
    return m == Mode::WS_theta || m == Mode::WSf_theta || m == Mode::WN_theta ||
           m == Mode::WNf_theta || m == Mode::WI_theta;
}

inline Mode parse_mode(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    auto norm = [&](const char* utf8theta, const char* ascii) {
        auto pos = s.find(utf8theta);
        if (pos != std::string::npos) s.replace(pos, std::string(utf8theta).size(), ascii);
    };
    norm("\xce\xb8", "-theta");  // accept the Greek spelling
    if (s == "ws") return Mode::WS;
    if (s == "wsf") return Mode::WSf;
    if (s == "wn") return Mode::WN;
    if (s == "wnf") return Mode::WNf;
    if (s == "ws-theta" || s == "ws_theta" || s == "wstheta" || s == "wst") return Mode::WS_theta;
    if (s == "wsf-theta" || s == "wsf_theta" || s == "wsftheta" || s == "ws-thetaf" || s == "wstf")
        return Mode::WSf_theta;
    if (s == "wn-theta" || s == "wn_theta" || s == "wntheta" || s == "wnt") return Mode::WN_theta;
    if (s == "wnf-theta" || s == "wnf_theta" || s == "wnftheta" || s == "wn-thetaf" || s == "wntf")
        return Mode::WNf_theta;
    if (s == "wi") return Mode::WI;
    if (s == "wi-theta" || s == "wi_theta" || s == "witheta" || s == "wit") return Mode::WI_theta;
    throw std::invalid_argument("unknown diagnostic mode: " + s);
}

struct WitnessOutcome {
    Point witness{0.0};
    double terminal_ratio = 0.0;  // worst ratio over the mode's eps/cutoff grid
};

struct Verdict {
    Mode mode = Mode::WS;
    std::uint64_t scale = 0;          // N, or complete-block horizon for theta modes
    double tolerance = 0.0;           // delta
    std::vector<double> eps_grid;     // density modes
    std::vector<double> cutoff_grid;  // WI modes
    std::vector<WitnessOutcome> per_witness;
    bool converged_at_scale = false;
};

struct AssessParams {
    Mode mode = Mode::WS;
    std::optional<ModulusFunction> f;
    std::optional<LacunarySchedule> theta;
    std::vector<double> eps_grid = default_diag_eps_grid();
    std::vector<double> cutoff_grid = {1.0, 2.0, 4.0, 8.0};
    double delta = 0.05;
    std::uint64_t scale = 0;  // 0: use seq.length()
};

/// Run the mode's trace per witness; converged-at-scale iff every witness's
/// terminal ratio is <= delta (for density modes: for every eps in the grid).
inline Verdict assess(const SetSequence& seq, const WitnessSet& witnesses, AssessParams p) {
    if (mode_needs_f(p.mode) && !p.f)
        throw std::invalid_argument("assess: mode requires a modulus function");
    if (mode_needs_theta(p.mode) && !p.theta)
        throw std::invalid_argument("assess: mode requires a lacunary schedule");
    const std::uint64_t N = p.scale == 0 ? seq.length() : p.scale;
    if (N > seq.length())
        throw std::invalid_argument("assess: scale exceeds sequence length");

    const ModulusFunction ident = identity_modulus();
    const ModulusFunction& f = p.f ? *p.f : ident;

    Verdict v;
    v.mode = p.mode;
    v.scale = N;
    v.tolerance = p.delta;
    v.eps_grid = p.eps_grid;
    v.cutoff_grid = p.cutoff_grid;
    v.converged_at_scale = true;

    for (const auto& x : witnesses.points) {
        const GapTrace trace = make_gap_trace(seq, x);
        double worst = 0.0;
        switch (p.mode) {
            case Mode::WS:
            case Mode::WSf:
                for (double eps : p.eps_grid)
                    worst = std::max(worst, f_density_ratio_at(trace, eps, f, N));
                break;
            case Mode::WN:
            case Mode::WNf:
                worst = f_cesaro_ratio_at(trace, f, N);
                break;
            case Mode::WS_theta:
            case Mode::WSf_theta: {
                const std::size_t R = p.theta->complete_blocks(N);
                if (R == 0) throw std::invalid_argument("assess: no complete block within scale");
                const auto [lo, hi] = p.theta->block(R);
                const double h = static_cast<double>(p.theta->gap(R));
                for (double eps : p.eps_grid) {
                    const double count = static_cast<double>(trace.range_count(eps, lo, hi));
                    worst = std::max(worst, f(count) / f(h));
                }
                v.scale = R;
                break;
            }
            case Mode::WN_theta:
            case Mode::WNf_theta: {
                const std::size_t R = p.theta->complete_blocks(N);
                if (R == 0) throw std::invalid_argument("assess: no complete block within scale");
                const auto [lo, hi] = p.theta->block(R);
                worst = f(trace.range_sum(lo, hi)) / f(static_cast<double>(p.theta->gap(R)));
                v.scale = R;
                break;
            }
            case Mode::WI: {
                const auto diag = uniform_integrability_diag(trace, p.cutoff_grid);
                worst = diag.back().second;  // largest cutoff
                break;
            }
            case Mode::WI_theta: {
                const auto diag = lacunary_ui_diag(trace, *p.theta, p.cutoff_grid);
                worst = diag.back().second;
                break;
            }
        }
        v.per_witness.push_back({x, worst});
        if (worst > p.delta) v.converged_at_scale = false;
    }
    return v;
}

}  // namespace wijsman
