// SPDX-License-Identifier: Apache-2.0

#include "fraclap/io.hpp"

#include "fraclap/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace fraclap::io {

Json parse_strict(const std::string& text) {
    std::vector<std::set<std::string>> seen;
    const Json::parser_callback_t cb = [&seen](int, Json::parse_event_t event, Json& parsed) {
        switch (event) {
            case Json::parse_event_t::object_start:
                seen.emplace_back();
                break;
            case Json::parse_event_t::object_end:
                if (!seen.empty()) {
                    seen.pop_back();
                }
                break;
            case Json::parse_event_t::key: {
                const auto key = parsed.get<std::string>();
                if (!seen.back().insert(key).second) {
                    throw ParseError("duplicate key '" + key + "'");
                }
                break;
            }
            default:
                break;
        }
        return true;
    };
    try {
        return Json::parse(text, cb);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write '" + path + "'");
    }
    out << text;
}

namespace {

double number(const Json& j, const char* what) {
    if (!j.is_number()) {
        throw ParseError(std::string(what) + " must be a number");
    }
    return j.get<double>();
}

const Json& member(const Json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return *it;
}

}  // namespace

std::shared_ptr<const Graph> graph_from_json(const Json& doc) {
    if (!doc.is_object()) {
        throw ParseError("graph document must be an object");
    }
    const Json& vs = member(doc, "vertices");
    const Json& es = doc.contains("edges") ? doc.at("edges") : Json::array();
    if (!vs.is_array() || !es.is_array()) {
        throw ParseError("'vertices' and 'edges' must be arrays");
    }
    std::vector<Vertex> vertices;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& v : vs) {
        if (!v.is_object() || !member(v, "id").is_string()) {
            throw ParseError("each vertex needs a string 'id'");
        }
        Vertex vx;
        vx.id = v.at("id").get<std::string>();
        vx.mu = v.contains("mu") ? number(v.at("mu"), "mu") : 1.0;
        if (!index.emplace(vx.id, vertices.size()).second) {
            throw ValidationError("duplicate vertex id '" + vx.id + "'");
        }
        vertices.push_back(std::move(vx));
    }
    std::vector<Edge> edges;
    for (const auto& e : es) {
        if (!e.is_object() || !member(e, "src").is_string() || !member(e, "dst").is_string()) {
            throw ParseError("each edge needs string 'src' and 'dst'");
        }
        const auto src = e.at("src").get<std::string>();
        const auto dst = e.at("dst").get<std::string>();
        const auto a = index.find(src);
        const auto b = index.find(dst);
        if (a == index.end() || b == index.end()) {
            throw ValidationError("edge " + src + "-" + dst + " references an unknown vertex");
        }
        edges.push_back({a->second, b->second, e.contains("w") ? number(e.at("w"), "w") : 1.0});
    }
    return std::make_shared<const Graph>(std::move(vertices), std::move(edges));
}

std::shared_ptr<const Graph> load_graph(const std::string& path) { return graph_from_json(parse_strict(read_file(path))); }

VertexFunction function_from_json(const Graph& g, const Json& doc) {
    if (!doc.is_object() || !member(doc, "values").is_object()) {
        throw ParseError("function document must be {\"values\": {id: value}}");
    }
    const Json& values = doc.at("values");
    VertexFunction u(static_cast<Eigen::Index>(g.size()));
    std::vector<bool> set(g.size(), false);
    for (auto it = values.begin(); it != values.end(); ++it) {
        const auto idx = g.index_of(it.key());
        if (!idx) {
            throw ValidationError("unknown vertex id '" + it.key() + "'");
        }
        u[static_cast<Eigen::Index>(*idx)] = number(it.value(), "function value");
        set[*idx] = true;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!set[i]) {
            throw ValidationError("missing value for vertex '" + g.ids()[i] + "'");
        }
    }
    check_aligned(g, u, "function file");
    return u;
}

VertexFunction load_function(const Graph& g, const std::string& path) {
    return function_from_json(g, parse_strict(read_file(path)));
}

Json function_to_json(const Graph& g, const VertexFunction& u) {
    Json values = Json::object();
    for (std::size_t i = 0; i < g.size(); ++i) {
        values[g.ids()[i]] = u[static_cast<Eigen::Index>(i)];
    }
    return Json{{"values", values}};
}

Json matrix_to_json(const Eigen::MatrixXd& a) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            row.push_back(a(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json spectrum_to_json(const SpectralDecomposition& sd) {
    Json lambdas = Json::array();
    for (Eigen::Index i = 0; i < sd.lambdas.size(); ++i) {
        lambdas.push_back(sd.lambdas[i]);
    }
    return Json{{"vertices", sd.g().ids()}, {"lambdas", lambdas}, {"phis", matrix_to_json(sd.phis.transpose())}};
}

Json verdict_to_json(const FeasibilityVerdict& v) {
    return Json{{"status", to_string(v.status)}, {"reasons", v.reasons}};
}

Json report_to_json(const Graph& g, const SolveReport& r) {
    Json j;
    j["status"] = "solved";
    j["method"] = to_string(r.method);
    j["solution"] = r.solution ? function_to_json(g, *r.solution) : Json(nullptr);
    j["residual_inf"] = r.residual_inf;
    j["iterations"] = r.iterations;
    j["energy"] = r.energy;
    j["multiplier"] = r.multiplier ? Json(*r.multiplier) : Json(nullptr);
    j["verdict"] = verdict_to_json(r.verdict);
    j["trace"] = r.trace;
    return j;
}

Json threshold_to_json(const Graph& g, const ThresholdEstimate& t) {
    Json audit = Json::array();
    for (const auto& a : t.audit) {
        audit.push_back(Json{{"c", a.c},
                             {"expected_solvable", a.expected_solvable},
                             {"solved", a.solved},
                             {"residual_inf", a.solved ? Json(a.residual_inf) : Json(nullptr)}});
    }
    Json j;
    j["minus_infinity"] = false;
    j["c_low"] = t.c_low;
    j["c_high"] = t.c_high;
    j["width"] = t.width;
    j["converged"] = t.converged;
    j["probes"] = t.probes;
    j["residual_at_high"] = t.residual_at_high;
    j["attained_solution_at_threshold"] =
        t.attained_solution_at_threshold ? function_to_json(g, *t.attained_solution_at_threshold) : Json(nullptr);
    j["audit"] = audit;
    return j;
}

Json check_report_to_json(const CheckReport& r) {
    Json checks = Json::array();
    for (const auto& e : r.entries) {
        Json c;
        c["name"] = e.name;
        c["pass"] = e.pass;
        c["measured"] = e.measured;
        c["tolerance"] = e.tolerance;
        c["citation"] = e.citation;
        c["witness"] = e.witness.empty() ? Json(nullptr) : Json(e.witness);
        checks.push_back(std::move(c));
    }
    return Json{{"all_pass", r.all_pass()}, {"checks", checks}};
}

namespace {

void emit(const Json& j, int indent, int depth, std::string& out) {
    const auto newline = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
            } else {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out += buf;
            }
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) {
                    out += ',';
                }
                first = false;
                newline(depth + 1);
                emit(e, indent, depth + 1, out);
            }
            newline(depth);
            out += ']';
            return;
        }
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ',';
                }
                first = false;
                newline(depth + 1);
                out += Json(it.key()).dump();
                out += indent >= 0 ? ": " : ":";
                emit(it.value(), indent, depth + 1, out);
            }
            newline(depth);
            out += '}';
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump(const Json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    out += '\n';
    return out;
}

}  // namespace fraclap::io
