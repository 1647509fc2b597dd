// wijsman-lab: batch front-end for the convergence-diagnostic library.
// Exit codes: 0 all assertions pass, 1 assertion failure, 2 config or
// construction error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wijsman/io.hpp"
#include "wijsman/reproduce.hpp"

namespace {

using nlohmann::json;

// Accepts "2^-20", "10^12" or plain numerics.
double parse_scale(const std::string& s) {
    const auto caret = s.find('^');
    if (caret != std::string::npos) {
        const double base = std::stod(s.substr(0, caret));
        const double exp = std::stod(s.substr(caret + 1));
        return std::pow(base, exp);
    }
    return std::stod(s);
}

std::uint64_t seed_override(std::uint64_t seed) {
    if (const char* env = std::getenv("WIJSMAN_LAB_SEED")) return std::stoull(env);
    return seed;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--param", "expected name=value, got " + kv);
        out[kv.substr(0, eq)] = parse_scale(kv.substr(eq + 1));
    }
    return out;
}

wijsman::LacunarySchedule parse_theta(const std::string& rule) {
    const auto colon = rule.find(':');
    const std::string name = rule.substr(0, colon);
    const unsigned R =
        colon == std::string::npos ? 62u : static_cast<unsigned>(std::stoul(rule.substr(colon + 1)));
    if (name == "pow2") return wijsman::LacunarySchedule::powers_of_two(R);
    if (name == "triangular") return wijsman::LacunarySchedule::triangular(R == 62 ? 50 : R);
    throw CLI::ValidationError("--theta", "unknown rule " + rule + " (pow2[:R], triangular[:R])");
}

wijsman::ConstructionKind parse_kind(const std::string& kind) {
    using K = wijsman::ConstructionKind;
    if (kind == "stat") return K::stat_separation;
    if (kind == "cesaro") return K::cesaro_separation;
    if (kind == "ui") return K::ui_separation;
    if (kind == "lacunary") return K::lacunary_separation;
    if (kind == "lacunary-ui") return K::lacunary_ui_separation;
    throw CLI::ValidationError("--kind", "unknown construction kind " + kind);
}

wijsman::BuiltSeparation run_construction(wijsman::ConstructionKind kind,
                                          const wijsman::ModulusFunction& f,
                                          const std::optional<wijsman::LacunarySchedule>& theta,
                                          double c, std::size_t K, std::uint64_t search_cap) {
    using Kk = wijsman::ConstructionKind;
    const auto eps = wijsman::eps_pow2(K);
    switch (kind) {
        case Kk::stat_separation:
        case Kk::cesaro_separation:
            return wijsman::build_stat_separation(f, c, eps, K, search_cap, kind);
        case Kk::ui_separation:
            return wijsman::build_ui_separation(f, c, eps, K, search_cap);
        case Kk::lacunary_separation:
        case Kk::lacunary_ui_separation:
            if (!theta) throw wijsman::ConstructionError(0, "lacunary kinds require --theta");
            return kind == Kk::lacunary_separation
                       ? wijsman::build_lacunary_separation(f, *theta, c, eps, K)
                       : wijsman::build_lacunary_ui_separation(f, *theta, c, eps, K);
    }
    throw wijsman::ConstructionError(0, "unreachable construction kind");
}

// --- subcommand payloads -----------------------------------------------------

int cmd_modulus_check(const std::string& fn, const std::vector<std::string>& params,
                      const std::string& eps_min, const std::string& n_max, double threshold,
                      const std::string& out) {
    const auto f = wijsman::make_builtin(fn, parse_params(params));
    const auto axioms = wijsman::check_axioms(f);

    const double floor = parse_scale(eps_min);
    std::vector<double> grid;
    for (double e = 0.5; e >= floor * (1.0 - 1e-12); e *= 0.5) grid.push_back(e);
    const auto rep = wijsman::classify_compatibility(f, grid, parse_scale(n_max), threshold);

    const json j = wijsman::io::compatibility_report_to_json(f.name, axioms, rep);
    if (!out.empty()) wijsman::io::write_json_file(j, out);
    std::cout << j.dump(2) << '\n';
    return axioms.all_pass() ? 0 : 1;
}

struct DiagnoseArgs {
    std::string seq;
    std::string mode = "WS";
    std::string fn;
    std::string theta;
    std::vector<std::string> eps;
    double delta = 0.05;
    std::string N;
    std::uint64_t seed = 1;
    double c = 0.5;
    std::size_t K = 8;
    std::string out = "trace.csv";
};

// Geometric checkpoints 1, 2, 4, ..., N for trace emission.
std::vector<std::uint64_t> trace_checkpoints(std::uint64_t N) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n < N; n *= 2) out.push_back(n);
    out.push_back(N);
    return out;
}

int cmd_diagnose(const DiagnoseArgs& a) {
    wijsman::SetSequence seq = [&] {
        if (a.seq.rfind("construct:", 0) == 0) {
            const auto kind = parse_kind(a.seq.substr(10));
            const auto f = wijsman::make_builtin(a.fn.empty() ? "log1p" : a.fn);
            std::optional<wijsman::LacunarySchedule> theta;
            if (!a.theta.empty()) theta = parse_theta(a.theta);
            return run_construction(kind, f, theta, a.c, a.K, 1000000000000ull).sequence;
        }
        return wijsman::io::sequence_from_json(wijsman::io::read_json_file(a.seq));
    }();

    wijsman::AssessParams p;
    p.mode = wijsman::parse_mode(a.mode);
    p.delta = a.delta;
    if (!a.N.empty()) p.scale = static_cast<std::uint64_t>(parse_scale(a.N));
    if (wijsman::mode_needs_f(p.mode)) p.f = wijsman::make_builtin(a.fn.empty() ? "identity" : a.fn);
    if (wijsman::mode_needs_theta(p.mode)) p.theta = parse_theta(a.theta.empty() ? "pow2:16" : a.theta);
    if (!a.eps.empty()) {
        p.eps_grid.clear();
        for (const auto& e : a.eps) p.eps_grid.push_back(parse_scale(e));
    }

    const wijsman::WitnessSet W = wijsman::WitnessSet::default_line();
    const wijsman::Verdict v = wijsman::assess(seq, W, p);

    // trace rows: per witness, the mode's ratio along geometric checkpoints
    std::vector<wijsman::io::TraceRow> rows;
    const std::uint64_t N = v.scale;
    for (std::size_t w = 0; w < W.points.size(); ++w) {
        const wijsman::GapTrace t = wijsman::make_gap_trace(seq, W.points[w]);
        for (std::uint64_t n : trace_checkpoints(N)) {
            using M = wijsman::Mode;
            switch (p.mode) {
                case M::WS:
                case M::WSf:
                    for (double eps : p.eps_grid)
                        rows.push_back({n, static_cast<int>(w), eps,
                                        p.mode == M::WS
                                            ? wijsman::density_ratio_at(t, eps, n)
                                            : wijsman::f_density_ratio_at(t, eps, *p.f, n)});
                    break;
                case M::WN:
                    rows.push_back({n, static_cast<int>(w), std::nullopt,
                                    wijsman::cesaro_ratio_at(t, n)});
                    break;
                case M::WNf:
                    rows.push_back({n, static_cast<int>(w), std::nullopt,
                                    wijsman::f_cesaro_ratio_at(t, *p.f, n)});
                    break;
                default:
                    break;  // block and UI modes traced below
            }
        }
        using M = wijsman::Mode;
        if (p.mode == M::WS_theta || p.mode == M::WSf_theta || p.mode == M::WN_theta ||
            p.mode == M::WNf_theta) {
            const auto& theta = *p.theta;
            const auto& f = p.f ? *p.f : wijsman::identity_modulus();
            const bool density = p.mode == M::WS_theta || p.mode == M::WSf_theta;
            const bool modulated = p.mode == M::WSf_theta || p.mode == M::WNf_theta;
            for (std::size_t r = 1; r <= theta.complete_blocks(N); ++r) {
                const auto [lo, hi] = theta.block(r);
                const double h = static_cast<double>(theta.gap(r));
                if (density) {
                    for (double eps : p.eps_grid) {
                        const double cnt = static_cast<double>(t.range_count(eps, lo, hi));
                        rows.push_back({r, static_cast<int>(w), eps,
                                        modulated ? f(cnt) / f(h) : cnt / h});
                    }
                } else {
                    const double sum = t.range_sum(lo, hi);
                    rows.push_back({r, static_cast<int>(w), std::nullopt,
                                    modulated ? f(sum) / f(h) : sum / h});
                }
            }
        } else if (p.mode == M::WI) {
            for (const auto& [cut, val] : wijsman::uniform_integrability_diag(t, p.cutoff_grid))
                rows.push_back({N, static_cast<int>(w), cut, val});
        } else if (p.mode == M::WI_theta) {
            for (const auto& [cut, val] : wijsman::lacunary_ui_diag(t, *p.theta, p.cutoff_grid))
                rows.push_back({N, static_cast<int>(w), cut, val});
        }
    }
    wijsman::io::emit_trace_csv(rows, a.out);
    std::cout << wijsman::io::verdict_to_json(v).dump(2) << '\n';
    return v.converged_at_scale ? 0 : 1;
}

int cmd_construct(const std::string& kind_name, const std::string& fn, const std::string& theta,
                  double c, std::size_t K, const std::string& search_cap, const std::string& out,
                  const std::string& emit_seq) {
    const auto kind = parse_kind(kind_name);
    const auto f = wijsman::make_builtin(fn);
    std::optional<wijsman::LacunarySchedule> th;
    if (!theta.empty()) th = parse_theta(theta);
    const auto built = run_construction(kind, f, th, c, K,
                                        static_cast<std::uint64_t>(parse_scale(search_cap)));
    const json j = wijsman::io::schedule_to_json(built.schedule);
    if (!out.empty()) wijsman::io::write_json_file(j, out);
    std::cout << j.dump(2) << '\n';
    if (built.compatibility_warning)
        std::cerr << "warning: " << f.name
                  << " classifies as compatible; the separation is only transient\n";
    if (!emit_seq.empty())
        wijsman::io::write_json_file(wijsman::io::sequence_to_json(built.sequence), emit_seq);
    return 0;
}

int cmd_reproduce(wijsman::RunConfig cfg, const std::string& out, const std::string& trace_dir) {
    cfg.seed = seed_override(cfg.seed);
    const auto rep = wijsman::reproduce(cfg);
    const json j = wijsman::report_to_json(rep);
    if (!out.empty()) wijsman::io::write_json_file(j, out);
    std::cout << j.dump(2) << '\n';
    if (!trace_dir.empty() && !rep.traces.empty()) {
        std::filesystem::create_directories(trace_dir);
        for (const auto& [name, rows] : rep.traces)
            wijsman::io::emit_trace_csv(
                rows, (std::filesystem::path(trace_dir) / (rep.theorem_id + "_" + name + ".csv"))
                          .string());
    }
    if (!rep.construction_failure.empty()) return 2;
    return rep.pass() ? 0 : 1;
}

// --config run.json: the whole run in one file.
int run_from_config(const std::string& path) {
    const json cfg = wijsman::io::read_json_file(path);
    const std::string command = cfg.at("command").get<std::string>();
    auto str = [&](const char* key, std::string dflt) {
        return cfg.value(key, std::move(dflt));
    };
    if (command == "modulus-check")
        return cmd_modulus_check(cfg.at("fn").get<std::string>(),
                                 cfg.value("params", std::vector<std::string>{}),
                                 str("eps_min", "2^-20"), str("n_max", "2^40"),
                                 cfg.value("threshold", 0.05), str("out", ""));
    if (command == "diagnose") {
        DiagnoseArgs a;
        a.seq = cfg.at("seq").get<std::string>();
        a.mode = str("mode", "WS");
        a.fn = str("fn", "");
        a.theta = str("theta", "");
        a.eps = cfg.value("eps", std::vector<std::string>{});
        a.delta = cfg.value("delta", 0.05);
        a.N = str("N", "");
        a.c = cfg.value("c", 0.5);
        a.K = cfg.value("K", std::size_t{8});
        a.out = str("out", "trace.csv");
        return cmd_diagnose(a);
    }
    if (command == "construct")
        return cmd_construct(cfg.at("kind").get<std::string>(), str("fn", "log1p"),
                             str("theta", ""), cfg.value("c", 0.5),
                             cfg.value("K", std::size_t{8}), str("search_cap", "10^12"),
                             str("out", ""), str("emit_seq", ""));
    if (command == "reproduce") {
        wijsman::RunConfig rc;
        rc.theorem_id = cfg.at("theorem").get<std::string>();
        rc.fn = str("fn", "");
        if (cfg.contains("fn_params"))
            rc.fn_params = cfg.at("fn_params").get<std::map<std::string, double>>();
        rc.c = cfg.value("c", 0.0);
        rc.K = cfg.value("K", std::size_t{0});
        rc.seed = cfg.value("seed", std::uint64_t{1});
        rc.N = cfg.value("N", std::uint64_t{100000});
        rc.delta = cfg.value("delta", 0.05);
        rc.delta_f = cfg.value("delta_f", 0.25);
        rc.density = cfg.value("density", 0.01);
        return cmd_reproduce(rc, str("out", ""), str("trace_dir", ""));
    }
    throw CLI::ValidationError("--config", "unknown command " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modulus-modulated Wijsman convergence diagnostics"};
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "run the full RunConfig from a JSON file");

    // modulus check
    auto* modulus = app.add_subcommand("modulus", "modulus-function tools");
    auto* check = modulus->add_subcommand("check", "axiom + compatibility report");
    std::string fn, eps_min = "2^-20", n_max = "2^40", mod_out;
    std::vector<std::string> fn_params;
    double threshold = 0.05;
    check->add_option("--fn", fn, "builtin name")->required();
    check->add_option("--param", fn_params, "builtin parameter name=value");
    check->add_option("--eps-min", eps_min, "smallest probe eps");
    check->add_option("--n-max", n_max, "probe ceiling");
    check->add_option("--threshold", threshold, "compatibility threshold");
    check->add_option("--out", mod_out, "report JSON path");

    // diagnose
    auto* diagnose = app.add_subcommand("diagnose", "run a convergence mode on a sequence");
    DiagnoseArgs da;
    diagnose->add_option("--seq", da.seq, "sequence JSON file or construct:<kind>")->required();
    diagnose->add_option("--mode", da.mode, "WS WSf WN WNf WStheta WSftheta WNtheta WNftheta WI WItheta");
    diagnose->add_option("--fn", da.fn, "builtin modulus for f-modes");
    diagnose->add_option("--theta", da.theta, "lacunary rule pow2[:R] or triangular[:R]");
    diagnose->add_option("--eps", da.eps, "density eps grid (accepts 2^-k)");
    diagnose->add_option("--delta", da.delta, "verdict tolerance");
    diagnose->add_option("--N", da.N, "assessment scale");
    diagnose->add_option("--c", da.c, "construction c (construct: refs)");
    diagnose->add_option("--K", da.K, "construction depth (construct: refs)");
    diagnose->add_option("--out", da.out, "trace CSV path");

    // construct
    auto* construct = app.add_subcommand("construct", "build a separation schedule");
    std::string kind, cfn = "log1p", ctheta, search_cap = "10^12", cout_path, emit_seq;
    double cc = 0.5;
    std::size_t cK = 8;
    construct->add_option("--kind", kind, "stat cesaro ui lacunary lacunary-ui")->required();
    construct->add_option("--fn", cfn, "builtin modulus");
    construct->add_option("--theta", ctheta, "lacunary rule (lacunary kinds)");
    construct->add_option("--c", cc, "separation level in (0,1)");
    construct->add_option("--K", cK, "number of checkpoints");
    construct->add_option("--search-cap", search_cap, "checkpoint search ceiling");
    construct->add_option("--out", cout_path, "schedule JSON path");
    construct->add_option("--emit-seq", emit_seq, "sequence JSON path");

    // reproduce
    auto* repro = app.add_subcommand("reproduce", "scripted theorem pipeline");
    wijsman::RunConfig rc;
    std::string rout, trace_dir;
    repro->add_option("--theorem", rc.theorem_id, "suite id")->required();
    repro->add_option("--fn", rc.fn, "override suite modulus");
    repro->add_option("--c", rc.c, "override separation level");
    repro->add_option("--K", rc.K, "override depth");
    repro->add_option("--seed", rc.seed, "RNG seed");
    repro->add_option("--N", rc.N, "scale for randomized suites");
    repro->add_option("--delta", rc.delta, "classical tolerance");
    repro->add_option("--delta-f", rc.delta_f, "modulated tolerance");
    repro->add_option("--density", rc.density, "gap density for randomized suites");
    repro->add_option("--out", rout, "report JSON path");
    repro->add_option("--trace-dir", trace_dir, "directory for suite CSV traces");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) return run_from_config(config_path);
        if (check->parsed())
            return cmd_modulus_check(fn, fn_params, eps_min, n_max, threshold, mod_out);
        if (diagnose->parsed()) return cmd_diagnose(da);
        if (construct->parsed())
            return cmd_construct(kind, cfn, ctheta, cc, cK, search_cap, cout_path, emit_seq);
        if (repro->parsed()) return cmd_reproduce(rc, rout, trace_dir);
        std::cerr << app.help();
        return 2;
    } catch (const wijsman::ConstructionError& e) {
        std::cerr << "construction error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
