// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclap/errors.hpp"
#include "fraclap/io.hpp"
#include "support/test_graphs.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

using namespace fraclap;
using fraclap::io::Json;

namespace {

const std::string kData = FRACLAP_TEST_DATA;

}  // namespace

TEST_CASE("strict parser rejects duplicate keys at any depth") {
    CHECK_NOTHROW(io::parse_strict(R"({"a": 1, "b": {"a": 2}})"));
    CHECK_THROWS_AS(io::parse_strict(R"({"a": 1, "a": 2})"), ParseError);
    CHECK_THROWS_AS(io::parse_strict(R"({"v": [{"x": 1, "x": 1}]})"), ParseError);
    CHECK_THROWS_AS(io::parse_strict(R"({"a": 1,})"), ParseError);
    CHECK_THROWS_AS(io::parse_strict("[1, 2"), ParseError);
    // Sibling objects may reuse keys.
    CHECK_NOTHROW(io::parse_strict(R"([{"id": "a"}, {"id": "b"}])"));
}

TEST_CASE("graph loading and defaults") {
    const auto g = io::load_graph(kData + "/p2.json");
    CHECK(g->size() == 2);
    CHECK(g->volume() == 2.0);
    CHECK(g->weights()(0, 1) == 1.0);

    const auto d = io::graph_from_json(io::parse_strict(R"({"vertices": [{"id": "a"}, {"id": "b", "mu": 2.5}],
        "edges": [{"src": "a", "dst": "b"}]})"));
    CHECK(d->measure()[0] == 1.0);
    CHECK(d->measure()[1] == 2.5);
    CHECK(d->weights()(1, 0) == 1.0);

    const auto single = io::graph_from_json(io::parse_strict(R"({"vertices": [{"id": "only"}]})"));
    CHECK(single->size() == 1);
}

TEST_CASE("graph validation errors") {
    const auto load = [](const char* text) { return io::graph_from_json(io::parse_strict(text)); };
    CHECK_THROWS_AS(load(R"({"edges": []})"), ParseError);
    CHECK_THROWS_AS(load(R"({"vertices": [{"id": 3}]})"), ParseError);
    CHECK_THROWS_AS(load(R"({"vertices": [{"id": "a", "mu": "1"}]})"), ParseError);
    CHECK_THROWS_AS(load(R"({"vertices": [{"id": "a"}, {"id": "a"}]})"), ValidationError);
    CHECK_THROWS_AS(load(R"({"vertices": [{"id": "a", "mu": 0}]})"), ValidationError);
    CHECK_THROWS_AS(load(R"({"vertices": [{"id": "a", "mu": -1}]})"), ValidationError);
    CHECK_THROWS_AS(load(R"({"vertices": [{"id": "a"}, {"id": "b"}], "edges": [{"src": "a", "dst": "c"}]})"),
                    ValidationError);
    CHECK_THROWS_AS(load(R"({"vertices": [{"id": "a"}], "edges": [{"src": "a", "dst": "a"}]})"), ValidationError);
    CHECK_THROWS_AS(
        load(R"({"vertices": [{"id": "a"}, {"id": "b"}], "edges": [{"src": "a", "dst": "b", "w": 0}]})"),
        ValidationError);
    CHECK_THROWS_AS(load(R"({"vertices": [{"id": "a"}, {"id": "b"}],
        "edges": [{"src": "a", "dst": "b"}, {"src": "b", "dst": "a"}]})"),
                    ValidationError);
    CHECK_THROWS_AS(load(R"({"vertices": [{"id": "a"}, {"id": "b"}, {"id": "c"}],
        "edges": [{"src": "a", "dst": "b"}]})"),
                    DisconnectedError);
    CHECK_THROWS_AS(load(R"({"vertices": []})"), ValidationError);
    CHECK_THROWS_AS(io::load_graph(kData + "/does_not_exist.json"), ParseError);
}

TEST_CASE("function files") {
    const auto g = io::load_graph(kData + "/p2.json");
    const VertexFunction u = io::load_function(*g, kData + "/p2_u.json");
    CHECK(u[0] == 1.0);
    CHECK(u[1] == -1.0);

    // Keys are matched by id, not position.
    const VertexFunction r = io::function_from_json(*g, io::parse_strict(R"({"values": {"x2": 5, "x1": 7}})"));
    CHECK(r[0] == 7.0);
    CHECK(r[1] == 5.0);

    CHECK_THROWS_AS(io::function_from_json(*g, io::parse_strict(R"({"values": {"x1": 1}})")), ValidationError);
    CHECK_THROWS_AS(io::function_from_json(*g, io::parse_strict(R"({"values": {"x1": 1, "x2": 2, "x3": 3}})")),
                    ValidationError);
    CHECK_THROWS_AS(io::function_from_json(*g, io::parse_strict(R"({"values": {"x1": 1, "x2": null}})")),
                    ParseError);
    CHECK_THROWS_AS(io::function_from_json(*g, io::parse_strict(R"({"x1": 1, "x2": 2})")), ParseError);
    CHECK_THROWS_AS(io::function_from_json(*g, io::parse_strict(R"({"values": {"x1": 1, "x1": 2, "x2": 3}})")),
                    ParseError);
}

TEST_CASE("doubles survive a dump and parse round trip bit for bit") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const auto g = fraclap::testing::random_connected();
    VertexFunction u(static_cast<Eigen::Index>(g->size()));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        u[i] = std::ldexp(unif(rng), static_cast<int>(i) * 7 - 60);
    }
    u[0] = 0.1;
    u[1] = 1.0 / 3.0;
    u[2] = std::numeric_limits<double>::min();
    u[3] = std::numeric_limits<double>::max();
    u[4] = -0.0;
    for (int indent : {-1, 2}) {
        const std::string text = io::dump(io::function_to_json(*g, u), indent);
        const VertexFunction back = io::function_from_json(*g, io::parse_strict(text));
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            CHECK(back[i] == u[i]);
        }
    }
}

TEST_CASE("non-finite numbers are emitted as null") {
    Json j = Json::object();
    j["nan"] = std::nan("");
    j["inf"] = std::numeric_limits<double>::infinity();
    j["x"] = 0.5;
    CHECK(io::dump(j, -1) == "{\"nan\":null,\"inf\":null,\"x\":0.5}\n");
}

TEST_CASE("spectrum and graph round trip through files") {
    const auto g = fraclap::testing::weighted_path();
    Json doc;
    doc["vertices"] = Json::array();
    for (std::size_t i = 0; i < g->size(); ++i) {
        doc["vertices"].push_back(Json{{"id", g->ids()[i]}, {"mu", g->measure()[static_cast<Eigen::Index>(i)]}});
    }
    doc["edges"] = Json::array();
    for (const auto& e : g->edges()) {
        doc["edges"].push_back(Json{{"src", g->ids()[e.src]}, {"dst", g->ids()[e.dst]}, {"w", e.w}});
    }
    const auto path = (std::filesystem::temp_directory_path() / "fraclap_test_io_graph.json").string();
    io::write_file(path, io::dump(doc));
    const auto back = io::load_graph(path);
    std::filesystem::remove(path);
    CHECK(back->ids() == g->ids());
    CHECK(back->measure() == g->measure());
    CHECK(back->weights() == g->weights());

    const SpectralDecomposition sd = decompose(back);
    const Json spec = io::parse_strict(io::dump(io::spectrum_to_json(sd)));
    CHECK(spec["vertices"].size() == g->size());
    CHECK(spec["lambdas"].size() == g->size());
    CHECK(spec["phis"].size() == g->size());
    CHECK(spec["lambdas"][1].get<double>() == sd.lambdas[1]);
    CHECK(spec["phis"][1][3].get<double>() == sd.phis(3, 1));
}

TEST_CASE("report serialisers") {
    const auto g = fraclap::testing::path2();
    SolveReport r;
    r.solution = VertexFunction::Zero(2);
    r.method = Method::monotone_iteration;
    r.energy = std::nan("");
    r.verdict.status = Status::solvable;
    r.verdict.reasons = {"because"};
    const Json j = io::parse_strict(io::dump(io::report_to_json(*g, r)));
    CHECK(j["method"] == "monotone-iteration");
    CHECK(j["energy"].is_null());
    CHECK(j["multiplier"].is_null());
    CHECK(j["verdict"]["status"] == "solvable");
    CHECK(j["solution"]["values"]["x2"].get<double>() == 0.0);

    CheckReport rep;
    rep.add({"ok", true, 0.0, 1.0, "c", ""});
    rep.add({"bad", false, 2.0, 1.0, "c", "u=(1,2)"});
    const Json c = io::parse_strict(io::dump(io::check_report_to_json(rep)));
    CHECK(c["all_pass"] == false);
    CHECK(c["checks"][0]["witness"].is_null());
    CHECK(c["checks"][1]["witness"] == "u=(1,2)");
}
