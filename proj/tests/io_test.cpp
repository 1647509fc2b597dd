#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wijsman/io.hpp"
#include "wijsman/reproduce.hpp"

using namespace wijsman;
using nlohmann::json;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("closed sets round-trip through JSON") {
    const std::vector<ClosedSet> sets{
        ClosedSet::singleton(Point({1.0, -2.0})),
        ClosedSet::cloud({Point::scalar(0.5), Point::scalar(1.0 / 3.0)}),
        ClosedSet::box(Point({0.0, 0.0}), Point({2.0, 1.0})),
        ClosedSet::ball(Point::scalar(0.25), 1.5)};
    for (const auto& s : sets) {
        const auto back = io::set_from_json(io::set_to_json(s));
        const Point probes[] = {Point(std::vector<double>(s.dim(), 0.7)),
                                Point(std::vector<double>(s.dim(), -3.1))};
        for (const auto& x : probes) CHECK(dist(x, s) == dist(x, back));
    }
    CHECK_THROWS_AS(
        (void)io::set_to_json(ClosedSet::oracle(1, [](const Point&) { return 1.0; })),
        std::invalid_argument);
    CHECK_THROWS_AS((void)io::set_from_json(json{{"type", "mystery"}}), std::invalid_argument);
}

TEST_CASE("sequences round-trip: materialized, indicator, valued") {
    const auto mat = SetSequence::materialized(
        {ClosedSet::singleton(Point::scalar(1.0)), ClosedSet::ball(Point::scalar(0.0), 0.5)},
        ClosedSet::singleton(Point::scalar(0.0)));
    const auto ind = indicator_sequence({{2, 4}, {7, 7}}, 9);
    const auto val = SetSequence::valued({{1, 3, 0.5}, {5, 8, 0.125}}, 8,
                                         ClosedSet::singleton(Point::scalar(0.0)),
                                         ClosedSet::singleton(Point::scalar(0.0)));
    for (const auto& seq : {mat, ind, val}) {
        const auto back = io::sequence_from_json(io::sequence_to_json(seq));
        REQUIRE(back.length() == seq.length());
        for (std::uint64_t k = 1; k <= seq.length(); ++k)
            for (double x : {0.0, 0.3, 1.0})
                CHECK(gap(Point::scalar(x), k, back) == gap(Point::scalar(x), k, seq));
    }
}

TEST_CASE("schedule JSON carries every field") {
    const auto built = build_stat_separation(log1p_modulus(), 0.5, eps_pow2(4), 4);
    const json j = io::schedule_to_json(built.schedule);
    CHECK(j.at("kind") == "stat");
    CHECK(j.at("c") == 0.5);
    CHECK(j.at("m").size() == 4);
    CHECK(j.at("n").size() == 4);
    CHECK(j.at("blocks").size() == 4);
    CHECK(j.at("horizon").get<std::uint64_t>() == built.schedule.horizon);

    const auto theta = LacunarySchedule::powers_of_two(62);
    const auto lac = build_lacunary_separation(log1p_modulus(), theta, 0.9, eps_pow2(3), 3);
    CHECK(io::schedule_to_json(lac.schedule).at("r").size() == 3);
}

TEST_CASE("compatibility report JSON shape") {
    const auto f = log1p_modulus();
    const json j =
        io::compatibility_report_to_json(f.name, check_axioms(f), classify_compatibility(f));
    CHECK(j.at("name") == "log1p");
    CHECK(j.at("verdict") == "non-compatible");
    CHECK(j.at("axioms").size() == 5);
    CHECK(j.at("phi").size() == default_eps_grid().size());
    for (const auto& row : j.at("phi")) {
        CHECK(row.contains("eps"));
        CHECK(row.contains("value"));
    }
}

TEST_CASE("verdict JSON decision strings") {
    const auto seq = indicator_sequence({}, 16);
    AssessParams p;
    const auto v = assess(seq, WitnessSet::default_line(), p);
    CHECK(io::verdict_to_json(v).at("decision") == "converged-at-scale");
}

TEST_CASE("trace CSV: header, rows, 17-digit round-trip") {
    const std::string path = temp_path("wl_trace_test.csv");
    const double awkward = 0.1 + 0.2;  // not exactly 0.3
    io::emit_trace_csv({{1, 0, 0.5, awkward}, {2, 0, std::nullopt, 1.0 / 3.0}, {3, 1, 0.25, 0.0}},
                       path);
    const std::string text = slurp(path);
    std::istringstream lines(text);
    std::string header, row1, row2;
    std::getline(lines, header);
    std::getline(lines, row1);
    std::getline(lines, row2);
    CHECK(header == "index,witness_id,epsilon,ratio");
    CHECK(row1.rfind("1,0,0.5,", 0) == 0);
    CHECK(std::stod(row1.substr(row1.rfind(',') + 1)) == awkward);  // bit-exact re-parse
    CHECK(row2.rfind("2,0,,", 0) == 0);  // empty epsilon column
    CHECK(std::stod(row2.substr(row2.rfind(',') + 1)) == 1.0 / 3.0);
    std::remove(path.c_str());

    CHECK_THROWS_AS(io::emit_trace_csv({}, temp_path("nope.csv")), std::invalid_argument);
}

TEST_CASE("json file round trip") {
    const std::string path = temp_path("wl_io_test.json");
    const json j = {{"a", 1}, {"b", {1.5, 2.5}}};
    io::write_json_file(j, path);
    CHECK(io::read_json_file(path) == j);
    std::remove(path.c_str());
    CHECK_THROWS_AS((void)io::read_json_file(temp_path("missing_wl.json")), std::runtime_error);
}

TEST_CASE("reproduction reports satisfy the shipped schema") {
    const json schema = io::read_json_file("schemas/report.schema.json");
    const auto required = schema.at("required").get<std::vector<std::string>>();
    const auto theorem_ids =
        schema.at("properties").at("theorem").at("enum").get<std::vector<std::string>>();
    CHECK(theorem_ids == known_theorem_ids());

    RunConfig cfg;
    cfg.theorem_id = "converse1";
    const json rep = report_to_json(reproduce(cfg));
    for (const auto& key : required) CHECK_MESSAGE(rep.contains(key), key);
    const auto assertion_required = schema.at("properties")
                                        .at("assertions")
                                        .at("items")
                                        .at("required")
                                        .get<std::vector<std::string>>();
    for (const auto& a : rep.at("assertions"))
        for (const auto& key : assertion_required) CHECK(a.contains(key));
    // no stray fields beyond the schema (additionalProperties: false)
    const auto& props = schema.at("properties");
    for (const auto& [key, value] : rep.items()) CHECK_MESSAGE(props.contains(key), key);

    // construction-failure reports carry the optional field and still validate
    cfg.fn = "identity";
    cfg.c = 0.9;
    const json failed = report_to_json(reproduce(cfg));
    CHECK(failed.at("pass") == false);
    CHECK(failed.at("construction_failure").is_string());
    for (const auto& [key, value] : failed.items()) CHECK(props.contains(key));
}

TEST_CASE("every suite passes with its defaults") {
    for (const auto& id : known_theorem_ids()) {
        if (id == "bridge") continue;  // heaviest suite, covered by the acceptance gate
        RunConfig cfg;
        cfg.theorem_id = id;
        const auto rep = reproduce(cfg);
        CHECK_MESSAGE(rep.pass(), id, " ", rep.construction_failure);
    }
}

TEST_CASE("reproduce reruns are bit-identical") {
    RunConfig cfg;
    cfg.theorem_id = "th1compatible";
    cfg.seed = 99;
    const auto a = reproduce(cfg);
    const auto b = reproduce(cfg);
    CHECK(report_to_json(a) == report_to_json(b));
    REQUIRE(a.traces.size() == b.traces.size());
    for (const auto& [name, rows] : a.traces) {
        const auto& other = b.traces.at(name);
        REQUIRE(rows.size() == other.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            CHECK(rows[i].ratio == other[i].ratio);
    }
}
