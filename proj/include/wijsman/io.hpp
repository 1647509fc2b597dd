// JSON file formats (sets, set sequences, schedules, reports) and the
// deterministic CSV trace writer.
#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wijsman/constructions.hpp"
#include "wijsman/diagnostics.hpp"
#include "wijsman/metric_sets.hpp"
#include "wijsman/modulus.hpp"

namespace wijsman::io {

using nlohmann::json;

// --- sets -------------------------------------------------------------------

inline json set_to_json(const ClosedSet& s) {
    return s.visit([](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ClosedSet::Singleton>) {
            return {{"type", "singleton"}, {"point", r.p.coords}};
        } else if constexpr (std::is_same_v<T, ClosedSet::Cloud>) {
            json pts = json::array();
            for (const auto& p : r.pts) pts.push_back(p.coords);
            return {{"type", "cloud"}, {"points", pts}};
        } else if constexpr (std::is_same_v<T, ClosedSet::Box>) {
            return {{"type", "box"}, {"lo", r.lo.coords}, {"hi", r.hi.coords}};
        } else if constexpr (std::is_same_v<T, ClosedSet::Ball>) {
            return {{"type", "ball"}, {"center", r.center.coords}, {"radius", r.radius}};
        } else {
            throw std::invalid_argument("set_to_json: distance-oracle sets are not serializable");
        }
    });
}

inline ClosedSet set_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "singleton")
        return ClosedSet::singleton(Point(j.at("point").get<std::vector<double>>()));
    if (type == "cloud") {
        std::vector<Point> pts;
        for (const auto& p : j.at("points")) pts.emplace_back(p.get<std::vector<double>>());
        return ClosedSet::cloud(std::move(pts));
    }
    if (type == "box")
        return ClosedSet::box(Point(j.at("lo").get<std::vector<double>>()),
                              Point(j.at("hi").get<std::vector<double>>()));
    if (type == "ball")
        return ClosedSet::ball(Point(j.at("center").get<std::vector<double>>()),
                               j.at("radius").get<double>());
    throw std::invalid_argument("set_from_json: unknown set type " + type);
}

// --- set sequences -----------------------------------------------------------

inline json sequence_to_json(const SetSequence& seq) {
    json j;
    j["limit"] = set_to_json(seq.limit_candidate());
    if (const auto* m = seq.as_materialized()) {
        json items = json::array();
        for (const auto& s : m->items) items.push_back(set_to_json(s));
        j["items"] = items;
        return j;
    }
    if (const auto* ind = seq.as_indicator()) {
        json blocks = json::array();
        for (const auto& b : ind->blocks) blocks.push_back({b.lo, b.hi});
        j["rule"] = {{"kind", "indicator"},
                     {"length", seq.length()},
                     {"blocks", blocks},
                     {"hi", set_to_json(ind->hi)},
                     {"lo", set_to_json(ind->lo)}};
        return j;
    }
    const auto* vr = seq.as_valued();
    json blocks = json::array();
    for (const auto& b : vr->blocks) blocks.push_back({json(b.lo), json(b.hi), json(b.value)});
    j["rule"] = {{"kind", "values"},
                 {"length", seq.length()},
                 {"blocks", blocks},
                 {"lo", set_to_json(vr->lo)}};
    return j;
}

inline SetSequence sequence_from_json(const json& j) {
    ClosedSet limit = set_from_json(j.at("limit"));
    if (j.contains("items")) {
        std::vector<ClosedSet> items;
        for (const auto& it : j.at("items")) items.push_back(set_from_json(it));
        return SetSequence::materialized(std::move(items), std::move(limit));
    }
    const json& rule = j.at("rule");
    const std::string kind = rule.at("kind").get<std::string>();
    const std::uint64_t length = rule.at("length").get<std::uint64_t>();
    if (kind == "indicator") {
        std::vector<IndexBlock> blocks;
        for (const auto& b : rule.at("blocks"))
            blocks.push_back({b.at(0).get<std::uint64_t>(), b.at(1).get<std::uint64_t>()});
        return SetSequence::indicator(std::move(blocks), length, set_from_json(rule.at("hi")),
                                      set_from_json(rule.at("lo")), std::move(limit));
    }
    if (kind == "values") {
        std::vector<ValuedBlock> blocks;
        for (const auto& b : rule.at("blocks"))
            blocks.push_back({b.at(0).get<std::uint64_t>(), b.at(1).get<std::uint64_t>(),
                              b.at(2).get<double>()});
        return SetSequence::valued(std::move(blocks), length, set_from_json(rule.at("lo")),
                                   std::move(limit));
    }
    throw std::invalid_argument("sequence_from_json: unknown rule kind " + kind);
}

// --- schedules and reports ---------------------------------------------------

inline json schedule_to_json(const ConstructionSchedule& s) {
    json blocks = json::array();
    for (const auto& b : s.blocks) blocks.push_back({b.lo, b.hi});
    json j = {{"kind", to_string(s.kind)}, {"c", s.c},      {"eps", s.eps},
              {"m", s.checkpoints},        {"n", s.counts}, {"blocks", blocks},
              {"values", s.values},        {"horizon", s.horizon}};
    if (!s.block_index.empty()) j["r"] = s.block_index;
    return j;
}

inline json compatibility_report_to_json(const std::string& name, const AxiomReport& axioms,
                                         const CompatibilityReport& rep) {
    auto ax = [](const AxiomCheck& a) {
        json j = {{"pass", a.pass}};
        if (!a.detail.empty()) j["witness"] = a.detail;
        return j;
    };
    json phi = json::array();
    for (const auto& [eps, value] : rep.phi_estimates)
        phi.push_back({{"eps", eps}, {"value", value}});
    return {{"name", name},
            {"axioms",
             {{"vanishes_only_at_zero", ax(axioms.vanishes_only_at_zero)},
              {"subadditive", ax(axioms.subadditive)},
              {"increasing", ax(axioms.increasing)},
              {"continuous_at_zero", ax(axioms.continuous_at_zero)},
              {"unbounded", ax(axioms.unbounded)}}},
            {"phi", phi},
            {"verdict", to_string(rep.verdict)},
            {"n_max", rep.probe_ceiling},
            {"threshold", rep.threshold}};
}

inline json verdict_to_json(const Verdict& v) {
    json witnesses = json::array();
    for (const auto& w : v.per_witness)
        witnesses.push_back({{"x", w.witness.coords}, {"terminal_ratio", w.terminal_ratio}});
    return {{"mode", to_string(v.mode)},
            {"scale", v.scale},
            {"delta", v.tolerance},
            {"eps_grid", v.eps_grid},
            {"cutoff_grid", v.cutoff_grid},
            {"witnesses", witnesses},
            {"decision", v.converged_at_scale ? "converged-at-scale" : "not-converged-at-scale"}};
}

// --- CSV trace emission ------------------------------------------------------

struct TraceRow {
    std::uint64_t index = 0;  // n, or block number r
    int witness_id = 0;
    std::optional<double> epsilon;
    double ratio = 0.0;
};

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV with header index,witness_id,epsilon,ratio; floats at 17 significant
/// digits so re-parsing is bit-exact.
inline void emit_trace_csv(const std::vector<TraceRow>& rows, const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit_trace_csv: empty trace");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_trace_csv: cannot open " + path);
    out << "index,witness_id,epsilon,ratio\n";
    for (const auto& r : rows) {
        out << r.index << ',' << r.witness_id << ',';
        if (r.epsilon) out << format_g17(*r.epsilon);
        out << ',' << format_g17(r.ratio) << '\n';
    }
    if (!out) throw std::runtime_error("emit_trace_csv: write failure on " + path);
}

inline void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << '\n';
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace wijsman::io
