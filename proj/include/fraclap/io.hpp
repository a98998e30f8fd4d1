// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fraclap/graph.hpp"
#include "fraclap/kw_solver.hpp"
#include "fraclap/properties.hpp"
#include "fraclap/spectral.hpp"

#include <json.hpp>

#include <memory>
#include <string>

namespace fraclap::io {

using Json = nlohmann::ordered_json;

/// Parses JSON text, rejecting duplicate object keys. Throws ParseError.
Json parse_strict(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

std::shared_ptr<const Graph> graph_from_json(const Json& doc);
std::shared_ptr<const Graph> load_graph(const std::string& path);

/// {"values": {id: value}} with every vertex exactly once.
VertexFunction function_from_json(const Graph& g, const Json& doc);
VertexFunction load_function(const Graph& g, const std::string& path);

Json function_to_json(const Graph& g, const VertexFunction& u);
Json matrix_to_json(const Eigen::MatrixXd& a);
Json spectrum_to_json(const SpectralDecomposition& sd);
Json verdict_to_json(const FeasibilityVerdict& v);
Json report_to_json(const Graph& g, const SolveReport& r);
Json threshold_to_json(const Graph& g, const ThresholdEstimate& t);
Json check_report_to_json(const CheckReport& r);

/// Serialises with 17 significant digits per double; NaN and infinities become null.
std::string dump(const Json& j, int indent = 2);

}  // namespace fraclap::io
