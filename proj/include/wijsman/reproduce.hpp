// Scripted reproduction suites: one per theorem, each running a
// construct -> diagnose -> compare pipeline at a declared desk scale and
// emitting a per-assertion report plus CSV-ready trace rows.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wijsman/constructions.hpp"
#include "wijsman/diagnostics.hpp"
#include "wijsman/io.hpp"
#include "wijsman/random_sequences.hpp"

namespace wijsman {

struct Assertion {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    std::string cmp;  // "<=", ">=", "=="
    bool pass = false;
};

struct ReproductionReport {
    std::string theorem_id;
    nlohmann::json params;
    std::uint64_t seed = 0;
    std::vector<Assertion> assertions;
    std::map<std::string, std::vector<io::TraceRow>> traces;
    std::string construction_failure;  // nonempty: the pipeline never reached its assertions

    bool pass() const {
        if (!construction_failure.empty()) return false;
        for (const auto& a : assertions)
            if (!a.pass) return false;
        return !assertions.empty();
    }
};

struct RunConfig {
    std::string theorem_id;
    std::string fn;  // empty: suite default
    std::map<std::string, double> fn_params;
    double c = 0.0;       // 0: suite default
    std::size_t K = 0;    // 0: suite default
    std::uint64_t seed = 1;
    std::uint64_t N = 100000;
    double delta = 0.05;
    double delta_f = 0.25;
    double density = 0.01;
    unsigned theta_R = 62;
    std::uint64_t search_cap = 1000000000000ull;
};

namespace detail {

inline void assert_cmp(ReproductionReport& rep, std::string name, double measured,
                       const std::string& cmp, double bound) {
    bool ok = false;
    if (cmp == "<=") ok = measured <= bound;
    else if (cmp == ">=") ok = measured >= bound;
    else ok = measured == bound;
    rep.assertions.push_back({std::move(name), measured, bound, cmp, ok});
}

inline ModulusFunction suite_modulus(const RunConfig& cfg, const std::string& fallback) {
    if (!cfg.fn.empty()) return make_builtin(cfg.fn, cfg.fn_params);
    if (fallback == "power_sum_half") return power_sum_modulus(0.5, 0.5);
    return make_builtin(fallback);
}

/// Worst slack of the finite Chebyshev bound
/// f(#{k<=n: g_k>eps}) <= ceil(1/eps) * f(sum_{k<=n} g_k) over all n, as the
/// ratio lhs/rhs; a value <= 1 means the bound holds everywhere. Between
/// count increments the left side is constant and the right side
/// nondecreasing, so increment points are the exact worst candidates.
inline double chebyshev_worst_dense(const std::vector<double>& gaps, const ModulusFunction& f,
                                    double eps) {
    const double multiplier = std::ceil(1.0 / eps);
    double worst = 0.0, sum = 0.0;
    std::uint64_t count = 0;
    for (double g : gaps) {
        sum += g;
        if (g > eps) {
            ++count;
            const double rhs = multiplier * f(sum);
            const double lhs = f(static_cast<double>(count));
            worst = std::max(worst, rhs > 0.0 ? lhs / rhs : 2.0);
        }
    }
    return worst;
}

inline double chebyshev_worst_piecewise(const GapTrace& t, const ModulusFunction& f, double eps,
                                        const std::vector<IndexBlock>& segments) {
    const double multiplier = std::ceil(1.0 / eps);
    std::vector<std::uint64_t> candidates{1, t.length()};
    for (const auto& s : segments) {
        for (std::uint64_t n : {s.lo, s.hi}) candidates.push_back(n);
        if (s.lo > 1) candidates.push_back(s.lo - 1);
        if (s.hi < t.length()) candidates.push_back(s.hi + 1);
        // geometric interior samples of the segment
        for (std::uint64_t off = 1; s.lo + off <= s.hi; off *= 2)
            candidates.push_back(s.lo + off);
    }
    double worst = 0.0;
    for (std::uint64_t n : candidates) {
        const auto count = t.prefix_count(eps, n);
        if (count == 0) continue;
        const double rhs = multiplier * f(t.prefix_sum(n));
        const double lhs = f(static_cast<double>(count));
        worst = std::max(worst, rhs > 0.0 ? lhs / rhs : 2.0);
    }
    return worst;
}

inline std::vector<ModulusFunction> all_builtins() {
    return {power_sum_modulus(1.0, 1.0), power_sum_modulus(0.5, 0.5),
            power_sum_modulus(0.5, 1.0), power_plus_log_modulus(1.0),
            x_plus_rational_modulus(),   log1p_modulus(),
            lambert_w_modulus(),         identity_modulus()};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Compatible-modulus equivalence suites (positive controls, seeded)

inline ReproductionReport reproduce_th1compatible(const RunConfig& cfg) {
    ReproductionReport rep;
    rep.theorem_id = "th1compatible";
    rep.seed = cfg.seed;
    const ModulusFunction f = detail::suite_modulus(cfg, "power_sum_half");
    rep.params = {{"fn", f.name}, {"N", cfg.N}, {"density", cfg.density},
                  {"delta", cfg.delta}, {"delta_f", cfg.delta_f}};

    const SetSequence seq = random_singleton_sequence(cfg.N, cfg.density, cfg.seed);
    const WitnessSet W = WitnessSet::default_line();

    AssessParams ws;
    ws.mode = Mode::WS;
    ws.delta = cfg.delta;
    const Verdict vs = assess(seq, W, ws);

    AssessParams wsf;
    wsf.mode = Mode::WSf;
    wsf.f = f;
    wsf.delta = cfg.delta_f;
    const Verdict vf = assess(seq, W, wsf);

    double worst_ws = 0.0, worst_wsf = 0.0;
    for (const auto& w : vs.per_witness) worst_ws = std::max(worst_ws, w.terminal_ratio);
    for (const auto& w : vf.per_witness) worst_wsf = std::max(worst_wsf, w.terminal_ratio);
    detail::assert_cmp(rep, "WS terminal ratio <= delta", worst_ws, "<=", cfg.delta);
    detail::assert_cmp(rep, "WSf terminal ratio <= delta_f (compatible upgrade)", worst_wsf,
                       "<=", cfg.delta_f);

    std::vector<io::TraceRow> rows;
    for (std::size_t i = 0; i < vs.per_witness.size(); ++i)
        rows.push_back({cfg.N, static_cast<int>(i), std::nullopt, vs.per_witness[i].terminal_ratio});
    rep.traces["ws_terminal"] = rows;
    return rep;
}

inline ReproductionReport reproduce_th2compatible(const RunConfig& cfg) {
    ReproductionReport rep;
    rep.theorem_id = "th2compatible";
    rep.seed = cfg.seed;
    const ModulusFunction f = detail::suite_modulus(cfg, "power_sum_half");
    rep.params = {{"fn", f.name}, {"N", cfg.N}, {"density", cfg.density},
                  {"delta", cfg.delta}, {"delta_f", cfg.delta_f}};

    const SetSequence seq = random_singleton_sequence(cfg.N, cfg.density, cfg.seed);
    const WitnessSet W = WitnessSet::default_line();

    AssessParams wn;
    wn.mode = Mode::WN;
    wn.delta = cfg.delta;
    const Verdict vn = assess(seq, W, wn);
    AssessParams wnf;
    wnf.mode = Mode::WNf;
    wnf.f = f;
    wnf.delta = cfg.delta_f;
    const Verdict vnf = assess(seq, W, wnf);

    double worst_wn = 0.0, worst_wnf = 0.0;
    for (const auto& w : vn.per_witness) worst_wn = std::max(worst_wn, w.terminal_ratio);
    for (const auto& w : vnf.per_witness) worst_wnf = std::max(worst_wnf, w.terminal_ratio);
    detail::assert_cmp(rep, "WN terminal ratio <= delta", worst_wn, "<=", cfg.delta);
    detail::assert_cmp(rep, "WNf terminal ratio <= delta_f (compatible upgrade)", worst_wnf,
                       "<=", cfg.delta_f);
    return rep;
}

// ---------------------------------------------------------------------------
// converse of WS = WS^f and WN = WN^f (indicator counterexample)

inline ReproductionReport reproduce_converse1(const RunConfig& cfg) {
    ReproductionReport rep;
    rep.theorem_id = "converse1";
    rep.seed = cfg.seed;
    const ModulusFunction f = detail::suite_modulus(cfg, "log1p");
    const double c = cfg.c > 0.0 ? cfg.c : 0.5;
    const std::size_t K = cfg.K > 0 ? cfg.K : 8;
    rep.params = {{"fn", f.name}, {"c", c}, {"K", K}};

    BuiltSeparation built = [&] {
        try {
            return build_stat_separation(f, c, eps_pow2(K), K, cfg.search_cap);
        } catch (const ConstructionError& e) {
            rep.construction_failure = e.what();
            throw;
        }
    }();
    const auto& s = built.schedule;
    const GapTrace t0 = make_gap_trace(built.sequence, Point::scalar(0.0));

    double min_fdensity = 1.0;
    std::vector<io::TraceRow> rows;
    for (std::size_t k = 0; k < K; ++k) {
        const double r = f_density_ratio_at(t0, 0.5, f, s.checkpoints[k]);
        min_fdensity = std::min(min_fdensity, r);
        rows.push_back({s.checkpoints[k], 0, 0.5, r});
    }
    rep.traces["f_density_checkpoints"] = rows;
    detail::assert_cmp(rep, "f-density ratio at every checkpoint m_k", min_fdensity, ">=",
                       c - 1e-9);

    const WitnessSet W = WitnessSet::default_line();
    double worst_density = 0.0;
    for (const auto& x : W.points) {
        const GapTrace t = make_gap_trace(built.sequence, x);
        for (double eps : default_diag_eps_grid())
            worst_density = std::max(worst_density, density_ratio_at(t, eps, s.horizon));
    }
    const double bound = 2.0 * static_cast<double>(s.counts.back()) /
                         static_cast<double>(s.checkpoints.back());
    detail::assert_cmp(rep, "classical density at m_K <= 2 n_K / m_K", worst_density, "<=", bound);

    bool steps_ok = true;
    for (std::size_t k = 0; k + 1 < K; ++k)
        steps_ok = steps_ok && check_step_inequality(s.checkpoints[k], s.eps[k], s.eps[k + 1],
                                                     s.checkpoints[k + 1]);
    detail::assert_cmp(rep, "step inequality at every step", steps_ok ? 1.0 : 0.0, "==", 1.0);

    bool contained = true;
    for (std::size_t k = 0; k < K; ++k) {
        const std::uint64_t lo_limit = k == 0 ? 1 : s.checkpoints[k - 1] + 1;
        contained = contained && s.blocks[k].lo >= lo_limit && s.blocks[k].hi == s.checkpoints[k];
    }
    detail::assert_cmp(rep, "A_k within (m_{k-1}, m_k]", contained ? 1.0 : 0.0, "==", 1.0);

    const GapTrace thalf = make_gap_trace(built.sequence, Point::scalar(0.5));
    detail::assert_cmp(rep, "degenerate witness x=1/2 sees ratio 0",
                       density_ratio_at(thalf, 0.25, s.horizon), "==", 0.0);
    return rep;
}

inline ReproductionReport reproduce_converse2(const RunConfig& cfg) {
    ReproductionReport rep;
    rep.theorem_id = "converse2";
    rep.seed = cfg.seed;
    const ModulusFunction f = detail::suite_modulus(cfg, "log1p");
    const double c = cfg.c > 0.0 ? cfg.c : 0.5;
    const std::size_t K = cfg.K > 0 ? cfg.K : 8;
    rep.params = {{"fn", f.name}, {"c", c}, {"K", K}};

    BuiltSeparation built = [&] {
        try {
            return build_stat_separation(f, c, eps_pow2(K), K, cfg.search_cap,
                                         ConstructionKind::cesaro_separation);
        } catch (const ConstructionError& e) {
            rep.construction_failure = e.what();
            throw;
        }
    }();
    const auto& s = built.schedule;
    const GapTrace t0 = make_gap_trace(built.sequence, Point::scalar(0.0));

    double min_fcesaro = 1.0;
    double count_sum_mismatch = 0.0;
    std::vector<io::TraceRow> rows;
    for (std::size_t k = 0; k < K; ++k) {
        const double r = f_cesaro_ratio_at(t0, f, s.checkpoints[k]);
        min_fcesaro = std::min(min_fcesaro, r);
        rows.push_back({s.checkpoints[k], 0, std::nullopt, r});
        const double sum = t0.prefix_sum(s.checkpoints[k]);
        const double count = static_cast<double>(t0.prefix_count(0.5, s.checkpoints[k]));
        count_sum_mismatch = std::max(count_sum_mismatch, std::abs(sum - count));
    }
    rep.traces["f_cesaro_checkpoints"] = rows;
    detail::assert_cmp(rep, "f-Cesaro ratio at every checkpoint m_k", min_fcesaro, ">=", c - 1e-9);
    detail::assert_cmp(rep, "0/1 gaps make prefix sum equal prefix count", count_sum_mismatch,
                       "==", 0.0);

    const WitnessSet W = WitnessSet::default_line();
    double worst_cesaro = 0.0;
    for (const auto& x : W.points) {
        const GapTrace t = make_gap_trace(built.sequence, x);
        worst_cesaro = std::max(worst_cesaro, cesaro_ratio_at(t, s.horizon));
    }
    const double bound = 2.0 * static_cast<double>(s.counts.back()) /
                         static_cast<double>(s.checkpoints.back());
    detail::assert_cmp(rep, "classical Cesaro at m_K <= 2 n_K / m_K", worst_cesaro, "<=", bound);
    return rep;
}

// ---------------------------------------------------------------------------
// Bridge inequality (finite form of WN^f subset of WS^f): Chebyshev bound

inline ReproductionReport reproduce_bridge(const RunConfig& cfg) {
    ReproductionReport rep;
    rep.theorem_id = "bridge";
    rep.seed = cfg.seed;
    const std::size_t n_traces = 100;
    const std::uint64_t N = cfg.N;
    rep.params = {{"traces", n_traces}, {"N", N}};

    const auto builtins = detail::all_builtins();
    const auto eps_grid = default_diag_eps_grid();
    const double densities[] = {0.01, 0.05, 0.1, 0.2, 0.3};

    double worst = 0.0;
    for (std::size_t t = 0; t < n_traces; ++t) {
        const auto gaps = random_gaps(N, densities[t % 5], cfg.seed + t);
        for (const auto& f : builtins)
            for (double eps : eps_grid)
                worst = std::max(worst, detail::chebyshev_worst_dense(gaps, f, eps));
    }
    detail::assert_cmp(rep, "random traces: f(count) <= ceil(1/eps) f(sum)", worst, "<=",
                       1.0 + 1e-12);

    // the construction traces, all witnesses
    const ModulusFunction flog = log1p_modulus();
    const BuiltSeparation stat = build_stat_separation(flog, 0.5, eps_pow2(8), 8, cfg.search_cap);
    const BuiltSeparation ui = build_ui_separation(flog, 0.5, eps_pow2(8), 8, cfg.search_cap);
    double worst_c = 0.0;
    for (const auto* built : {&stat, &ui}) {
        std::vector<IndexBlock> segs;
        for (const auto& b : built->schedule.blocks) segs.push_back(b);
        for (const auto& x : WitnessSet::default_line().points) {
            const GapTrace t = make_gap_trace(built->sequence, x);
            for (const auto& f : builtins)
                for (double eps : eps_grid)
                    worst_c = std::max(worst_c, detail::chebyshev_worst_piecewise(t, f, eps, segs));
        }
    }
    detail::assert_cmp(rep, "construction traces: f(count) <= ceil(1/eps) f(sum)", worst_c, "<=",
                       1.0 + 1e-12);
    return rep;
}

// ---------------------------------------------------------------------------
// Converse of WN^f = WS^f cap WI (the {r_k}-valued sequence)

inline ReproductionReport reproduce_bridge_converse(const RunConfig& cfg) {
    ReproductionReport rep;
    rep.theorem_id = "bridge-converse";
    rep.seed = cfg.seed;
    const ModulusFunction f = detail::suite_modulus(cfg, "log1p");
    const double c = cfg.c > 0.0 ? cfg.c : 0.5;
    const std::size_t K = cfg.K > 0 ? cfg.K : 6;
    // two extra checkpoints extend the horizon so the terminal classical
    // density is judged well past the last large-gap block
    const std::size_t K_pad = K + 2;
    rep.params = {{"fn", f.name}, {"c", c}, {"K", K}, {"K_internal", K_pad}};

    BuiltSeparation built = [&] {
        try {
            return build_ui_separation(f, c, eps_pow2(K_pad), K_pad, cfg.search_cap);
        } catch (const ConstructionError& e) {
            rep.construction_failure = e.what();
            throw;
        }
    }();
    const auto& s = built.schedule;
    const GapTrace t0 = make_gap_trace(built.sequence, Point::scalar(0.0));

    double min_fcesaro = 1.0;
    std::vector<io::TraceRow> rows;
    for (std::size_t k = 0; k < K_pad; ++k) {
        const double r = f_cesaro_ratio_at(t0, f, s.checkpoints[k]);
        min_fcesaro = std::min(min_fcesaro, r);
        rows.push_back({s.checkpoints[k], 0, std::nullopt, r});
    }
    rep.traces["f_cesaro_checkpoints"] = rows;
    detail::assert_cmp(rep, "f-Cesaro ratio at every checkpoint m_k", min_fcesaro, ">=",
                       c * (1.0 - 1e-6));

    const double r1 = s.values.front();
    const auto ui = uniform_integrability_diag(t0, {r1 * (1.0 + 1e-6), 2.0 * r1});
    double worst_ui = 0.0;
    for (const auto& [cutoff, v] : ui) worst_ui = std::max(worst_ui, v);
    detail::assert_cmp(rep, "UI diagnostic vanishes above cutoff r_1", worst_ui, "==", 0.0);

    AssessParams ws;
    ws.mode = Mode::WS;
    ws.delta = cfg.delta;
    const Verdict v = assess(built.sequence, WitnessSet::default_line(), ws);
    double worst_ws = 0.0;
    for (const auto& w : v.per_witness) worst_ws = std::max(worst_ws, w.terminal_ratio);
    detail::assert_cmp(rep, "classical WS verdict converged-at-scale", worst_ws, "<=", cfg.delta);

    bool decreasing = true;
    for (std::size_t k = 1; k < s.values.size(); ++k)
        decreasing = decreasing && s.values[k] < s.values[k - 1] && s.values[k] > 0.0;
    detail::assert_cmp(rep, "r_k strictly decreasing and positive",
                       decreasing && s.values.front() > 0.0 ? 1.0 : 0.0, "==", 1.0);
    return rep;
}

// ---------------------------------------------------------------------------
// Lacunary positive controls (theta-compatible upgrade)

inline ReproductionReport reproduce_lacunary_positive(const RunConfig& cfg, bool cesaro) {
    ReproductionReport rep;
    rep.theorem_id = cesaro ? "lacunary-cesaro" : "lacunary-stat";
    rep.seed = cfg.seed;
    const ModulusFunction f = detail::suite_modulus(cfg, "power_sum_half");
    const unsigned R = 16;
    const LacunarySchedule theta = LacunarySchedule::powers_of_two(R);
    const std::uint64_t N = theta.horizon();
    rep.params = {{"fn", f.name}, {"theta", "pow2"}, {"R", R}, {"N", N},
                  {"density", cfg.density}, {"delta", cfg.delta}, {"delta_f", cfg.delta_f}};

    const SetSequence seq = random_singleton_sequence(N, cfg.density, cfg.seed);
    const WitnessSet W = WitnessSet::default_line();

    AssessParams classical;
    classical.mode = cesaro ? Mode::WN_theta : Mode::WS_theta;
    classical.theta = theta;
    classical.delta = cfg.delta;
    const Verdict vc = assess(seq, W, classical);

    AssessParams modulated;
    modulated.mode = cesaro ? Mode::WNf_theta : Mode::WSf_theta;
    modulated.theta = theta;
    modulated.f = f;
    modulated.delta = cfg.delta_f;
    const Verdict vm = assess(seq, W, modulated);

    double worst_c = 0.0, worst_m = 0.0;
    for (const auto& w : vc.per_witness) worst_c = std::max(worst_c, w.terminal_ratio);
    for (const auto& w : vm.per_witness) worst_m = std::max(worst_m, w.terminal_ratio);
    detail::assert_cmp(rep, "classical lacunary terminal ratio <= delta", worst_c, "<=", cfg.delta);
    detail::assert_cmp(rep, "f-modulated lacunary terminal ratio <= delta_f", worst_m, "<=",
                       cfg.delta_f);
    return rep;
}

// ---------------------------------------------------------------------------
// Theorem (lacunary converse), parts a and b

inline ReproductionReport reproduce_reciprocolacunary(const RunConfig& cfg, bool cesaro) {
    ReproductionReport rep;
    rep.theorem_id = cesaro ? "reciprocolacunary-b" : "reciprocolacunary-a";
    rep.seed = cfg.seed;
    const ModulusFunction f = detail::suite_modulus(cfg, "log1p");
    const double c = cfg.c > 0.0 ? cfg.c : 0.9;
    const std::size_t K = cfg.K > 0 ? cfg.K : 6;
    const LacunarySchedule theta = LacunarySchedule::powers_of_two(cfg.theta_R);
    rep.params = {{"fn", f.name}, {"c", c}, {"K", K}, {"theta", "pow2"}, {"R", cfg.theta_R}};

    BuiltSeparation built = [&] {
        try {
            return build_lacunary_separation(f, theta, c, eps_pow2(K), K);
        } catch (const ConstructionError& e) {
            rep.construction_failure = e.what();
            throw;
        }
    }();
    const auto& s = built.schedule;
    const GapTrace t0 = make_gap_trace(built.sequence, Point::scalar(0.0));

    auto block_ratio = [&](std::size_t r) {
        const auto [lo, hi] = theta.block(r);
        const double h = static_cast<double>(theta.gap(r));
        if (cesaro) return f(t0.range_sum(lo, hi)) / f(h);
        return f(static_cast<double>(t0.range_count(0.5, lo, hi))) / f(h);
    };

    double min_selected = 1.0;
    std::vector<io::TraceRow> rows;
    for (std::size_t k = 0; k < K; ++k) {
        const double r = block_ratio(s.block_index[k]);
        min_selected = std::min(min_selected, r);
        rows.push_back({s.block_index[k], 0, cesaro ? std::optional<double>{} : std::optional<double>{0.5}, r});
    }
    rep.traces["block_ratio_selected"] = rows;
    detail::assert_cmp(rep, "block ratio at selected blocks r_k", min_selected, ">=", c - 1e-9);

    const std::size_t R_complete = theta.complete_blocks(s.horizon);
    double worst_other = 0.0;
    for (std::size_t r = 1; r <= R_complete; ++r) {
        if (std::find(s.block_index.begin(), s.block_index.end(), r) != s.block_index.end())
            continue;
        const auto [lo, hi] = theta.block(r);
        worst_other = std::max(worst_other, static_cast<double>(t0.range_count(0.5, lo, hi)));
    }
    detail::assert_cmp(rep, "zero gap count on all other complete blocks", worst_other, "==", 0.0);

    double worst_classical = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double h = static_cast<double>(theta.gap(s.block_index[k]));
        const double classical = static_cast<double>(s.counts[k]) / h;
        worst_classical = std::max(worst_classical, classical - (s.eps[k] + 1.0 / h));
    }
    detail::assert_cmp(rep, "classical block density n_k/h <= eps_k + 1/h", worst_classical, "<=",
                       0.0);
    return rep;
}

// ---------------------------------------------------------------------------
// Lacunary bridge: per-block Chebyshev bound

inline ReproductionReport reproduce_lacunary_bridge(const RunConfig& cfg) {
    ReproductionReport rep;
    rep.theorem_id = "lacunary-bridge";
    rep.seed = cfg.seed;
    const unsigned R = 16;
    const LacunarySchedule theta = LacunarySchedule::powers_of_two(R);
    const std::uint64_t N = theta.horizon();
    const std::size_t n_traces = 20;
    rep.params = {{"traces", n_traces}, {"N", N}, {"theta", "pow2"}, {"R", R}};

    const auto builtins = detail::all_builtins();
    const auto eps_grid = default_diag_eps_grid();
    const double densities[] = {0.01, 0.05, 0.1, 0.2, 0.3};

    double worst = 0.0;
    for (std::size_t t = 0; t < n_traces; ++t) {
        const GapTrace trace =
            GapTrace::dense(Point::scalar(0.0), random_gaps(N, densities[t % 5], cfg.seed + t));
        for (const auto& f : builtins) {
            for (double eps : eps_grid) {
                const double multiplier = std::ceil(1.0 / eps);
                for (std::size_t r = 1; r <= R; ++r) {
                    const auto [lo, hi] = theta.block(r);
                    const auto count = trace.range_count(eps, lo, hi);
                    if (count == 0) continue;
                    const double rhs = multiplier * f(trace.range_sum(lo, hi));
                    worst = std::max(worst,
                                     rhs > 0.0 ? f(static_cast<double>(count)) / rhs : 2.0);
                }
            }
        }
    }
    detail::assert_cmp(rep, "block Chebyshev bound on random traces", worst, "<=", 1.0 + 1e-12);

    const LacunarySchedule big = LacunarySchedule::powers_of_two(cfg.theta_R);
    const BuiltSeparation built = build_lacunary_separation(log1p_modulus(), big, 0.9, eps_pow2(6), 6);
    const GapTrace t0 = make_gap_trace(built.sequence, Point::scalar(0.0));
    double worst_c = 0.0;
    for (const auto& f : builtins) {
        for (double eps : eps_grid) {
            const double multiplier = std::ceil(1.0 / eps);
            for (std::size_t r = 1; r <= big.complete_blocks(built.schedule.horizon); ++r) {
                const auto [lo, hi] = big.block(r);
                const auto count = t0.range_count(eps, lo, hi);
                if (count == 0) continue;
                const double rhs = multiplier * f(t0.range_sum(lo, hi));
                worst_c = std::max(worst_c, rhs > 0.0 ? f(static_cast<double>(count)) / rhs : 2.0);
            }
        }
    }
    detail::assert_cmp(rep, "block Chebyshev bound on construction trace", worst_c, "<=",
                       1.0 + 1e-12);
    return rep;
}

// ---------------------------------------------------------------------------
// Lacunary bridge converse (the {eps_k}-valued whole-block sequence)

inline ReproductionReport reproduce_lacunary_bridge_converse(const RunConfig& cfg) {
    ReproductionReport rep;
    rep.theorem_id = "lacunary-bridge-converse";
    rep.seed = cfg.seed;
    const ModulusFunction f = detail::suite_modulus(cfg, "log1p");
    const double c = cfg.c > 0.0 ? cfg.c : 0.9;
    const std::size_t K = cfg.K > 0 ? cfg.K : 6;
    const LacunarySchedule theta = LacunarySchedule::powers_of_two(cfg.theta_R);
    rep.params = {{"fn", f.name}, {"c", c}, {"K", K}, {"theta", "pow2"}, {"R", cfg.theta_R}};

    BuiltSeparation built = [&] {
        try {
            return build_lacunary_ui_separation(f, theta, c, eps_pow2(K), K);
        } catch (const ConstructionError& e) {
            rep.construction_failure = e.what();
            throw;
        }
    }();
    const auto& s = built.schedule;
    const GapTrace t0 = make_gap_trace(built.sequence, Point::scalar(0.0));

    double min_selected = 1.0;
    std::vector<io::TraceRow> rows;
    for (std::size_t k = 0; k < K; ++k) {
        const auto [lo, hi] = theta.block(s.block_index[k]);
        const double h = static_cast<double>(theta.gap(s.block_index[k]));
        const double r = f(t0.range_sum(lo, hi)) / f(h);
        min_selected = std::min(min_selected, r);
        rows.push_back({s.block_index[k], 0, std::nullopt, r});
    }
    rep.traces["block_f_cesaro_selected"] = rows;
    detail::assert_cmp(rep, "block f-Cesaro ratio at selected blocks r_k", min_selected, ">=",
                       c - 1e-9);

    const double eps1 = s.values.front();
    const auto ui = lacunary_ui_diag(t0, theta, {eps1 * (1.0 + 1e-6), 1.0});
    double worst_ui = 0.0;
    for (const auto& [cutoff, v] : ui) worst_ui = std::max(worst_ui, v);
    detail::assert_cmp(rep, "lacunary UI diagnostic vanishes above cutoff eps_1", worst_ui, "==",
                       0.0);

    // terminal f-statistical block ratio: the last complete block carries
    // gap value eps_K, which no grid eps exceeds strictly
    const std::size_t R_complete = theta.complete_blocks(s.horizon);
    const auto [lo, hi] = theta.block(R_complete);
    double worst_terminal = 0.0;
    for (double eps : default_diag_eps_grid())
        worst_terminal =
            std::max(worst_terminal, static_cast<double>(t0.range_count(eps, lo, hi)));
    detail::assert_cmp(rep, "terminal block f-statistical gap count is 0", worst_terminal, "==",
                       0.0);
    return rep;
}

// ---------------------------------------------------------------------------

inline std::vector<std::string> known_theorem_ids() {
    return {"th1compatible",      "converse1",
            "th2compatible",      "converse2",
            "bridge",             "bridge-converse",
            "lacunary-stat",      "lacunary-cesaro",
            "reciprocolacunary-a", "reciprocolacunary-b",
            "lacunary-bridge",    "lacunary-bridge-converse"};
}

/// Dispatch a theorem suite. A ConstructionError is converted into a
/// construction-failure report naming the failing step.
inline ReproductionReport reproduce(const RunConfig& cfg) {
    auto run = [&]() -> ReproductionReport {
        const std::string& id = cfg.theorem_id;
        if (id == "th1compatible") return reproduce_th1compatible(cfg);
        if (id == "converse1") return reproduce_converse1(cfg);
        if (id == "th2compatible") return reproduce_th2compatible(cfg);
        if (id == "converse2") return reproduce_converse2(cfg);
        if (id == "bridge") return reproduce_bridge(cfg);
        if (id == "bridge-converse") return reproduce_bridge_converse(cfg);
        if (id == "lacunary-stat") return reproduce_lacunary_positive(cfg, false);
        if (id == "lacunary-cesaro") return reproduce_lacunary_positive(cfg, true);
        if (id == "reciprocolacunary-a") return reproduce_reciprocolacunary(cfg, false);
        if (id == "reciprocolacunary-b") return reproduce_reciprocolacunary(cfg, true);
        if (id == "lacunary-bridge") return reproduce_lacunary_bridge(cfg);
        if (id == "lacunary-bridge-converse") return reproduce_lacunary_bridge_converse(cfg);
        throw std::invalid_argument("unknown theorem id: " + id);
    };
    try {
        return run();
    } catch (const ConstructionError& e) {
        ReproductionReport rep;
        rep.theorem_id = cfg.theorem_id;
        rep.seed = cfg.seed;
        rep.construction_failure = e.what();
        return rep;
    }
}

inline nlohmann::json report_to_json(const ReproductionReport& rep) {
    nlohmann::json assertions = nlohmann::json::array();
    for (const auto& a : rep.assertions)
        assertions.push_back({{"name", a.name},
                              {"measured", a.measured},
                              {"bound", a.bound},
                              {"cmp", a.cmp},
                              {"pass", a.pass}});
    nlohmann::json j = {{"theorem", rep.theorem_id},
                        {"params", rep.params},
                        {"seed", rep.seed},
                        {"assertions", assertions},
                        {"pass", rep.pass()}};
    if (!rep.construction_failure.empty()) j["construction_failure"] = rep.construction_failure;
    return j;
}

}  // namespace wijsman
