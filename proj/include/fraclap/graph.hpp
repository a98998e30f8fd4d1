// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fraclap {

/// Real-valued function on the vertex set, indexed in graph vertex order.
using VertexFunction = Eigen::VectorXd;

struct Vertex {
    std::string id;
    double mu = 1.0;
};

/// Undirected edge, stored once.
struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    double w = 1.0;
};

/// Connected finite weighted graph G = (V, E, mu, w).
///
/// The constructor validates every invariant (positive finite measure and
/// weights, no self-loops, no duplicate edges, connectivity) and the object is
/// immutable afterwards. Vertex order is the construction order and is the
/// index convention for every vector and matrix in the library.
class Graph {
public:
    Graph(std::vector<Vertex> vertices, std::vector<Edge> edges);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const Eigen::VectorXd& measure() const noexcept { return mu_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    /// Dense symmetric weight matrix, zero where there is no edge.
    const Eigen::MatrixXd& weights() const noexcept { return w_; }
    const std::vector<std::vector<std::size_t>>& neighbors() const noexcept { return nbrs_; }

    double volume() const noexcept { return volume_; }
    double min_measure() const noexcept { return mu_.minCoeff(); }
    std::optional<std::size_t> index_of(std::string_view id) const;

    /// Matrix of -Delta, i.e. U^{-1}(D - A).
    Eigen::MatrixXd laplacian_matrix() const;

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::size_t> index_;
    Eigen::VectorXd mu_;
    std::vector<Edge> edges_;
    Eigen::MatrixXd w_;
    std::vector<std::vector<std::size_t>> nbrs_;
    double volume_ = 0.0;
};

/// n x n field F(x, y) with zero diagonal. Component y of the field is the
/// function x -> F(x, y).
struct PairwiseField {
    enum class Support { adjacency, all_pairs };

    Eigen::MatrixXd entries;
    Support support = Support::adjacency;
};

/// Throws DimensionMismatch unless u has one entry per vertex (and all are finite).
void check_aligned(const Graph& g, const VertexFunction& u, const char* what);

double integral(const Graph& g, const VertexFunction& u);

/// Returns -Delta u.
VertexFunction laplacian_apply(const Graph& g, const VertexFunction& u);

/// F(x, y) = sqrt(w_xy / (2 mu(x))) (u(x) - u(y)) on edges, zero elsewhere.
PairwiseField gradient_field(const Graph& g, const VertexFunction& u);

/// sum_y F(x, y) G(x, y).
VertexFunction pointwise_inner(const Graph& g, const PairwiseField& f, const PairwiseField& h);

/// Graph divergence, the negative mu-adjoint of gradient_field:
/// int (div F) phi dmu = -int F . grad(phi) dmu for every phi.
VertexFunction divergence(const Graph& g, const PairwiseField& f);

/// Delta^m u (note the sign: Delta, not -Delta).
VertexFunction iterated_laplacian(const Graph& g, const VertexFunction& u, int m);

}  // namespace fraclap
