// SPDX-License-Identifier: Apache-2.0

#include "fraclap/graph.hpp"

#include "fraclap/errors.hpp"

#include <cmath>
#include <queue>

namespace fraclap {

Graph::Graph(std::vector<Vertex> vertices, std::vector<Edge> edges) : edges_(std::move(edges)) {
    const std::size_t n = vertices.size();
    if (n == 0) {
        throw ValidationError("graph has no vertices");
    }

    ids_.reserve(n);
    mu_.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        auto& v = vertices[i];
        if (!std::isfinite(v.mu) || v.mu <= 0.0) {
            throw ValidationError("vertex '" + v.id + "' has non-positive measure");
        }
        if (!index_.emplace(v.id, i).second) {
            throw ValidationError("duplicate vertex id '" + v.id + "'");
        }
        mu_[static_cast<Eigen::Index>(i)] = v.mu;
        ids_.push_back(std::move(v.id));
    }
    volume_ = mu_.sum();

    w_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    nbrs_.assign(n, {});
    for (const auto& e : edges_) {
        if (e.src >= n || e.dst >= n) {
            throw ValidationError("edge endpoint out of range");
        }
        const auto& a = ids_[e.src];
        const auto& b = ids_[e.dst];
        if (e.src == e.dst) {
            throw ValidationError("self-loop at '" + a + "'");
        }
        if (!std::isfinite(e.w) || e.w <= 0.0) {
            throw ValidationError("edge " + a + "-" + b + " has non-positive weight");
        }
        const auto i = static_cast<Eigen::Index>(e.src);
        const auto j = static_cast<Eigen::Index>(e.dst);
        if (w_(i, j) != 0.0) {
            throw ValidationError("duplicate edge " + a + "-" + b);
        }
        w_(i, j) = e.w;
        w_(j, i) = e.w;
        nbrs_[e.src].push_back(e.dst);
        nbrs_[e.dst].push_back(e.src);
    }

    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const auto x = frontier.front();
        frontier.pop();
        for (auto y : nbrs_[x]) {
            if (!seen[y]) {
                seen[y] = true;
                ++reached;
                frontier.push(y);
            }
        }
    }
    if (reached != n) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!seen[i]) {
                throw DisconnectedError("graph is disconnected: no path from '" + ids_[0] + "' to '" + ids_[i] + "'");
            }
        }
    }
}

std::optional<std::size_t> Graph::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Eigen::MatrixXd Graph::laplacian_matrix() const {
    const Eigen::VectorXd degree = w_.rowwise().sum();
    Eigen::MatrixXd lap = -w_;
    lap.diagonal() = degree;
    return mu_.cwiseInverse().asDiagonal() * lap;
}

void check_aligned(const Graph& g, const VertexFunction& u, const char* what) {
    const auto n = static_cast<long>(g.size());
    if (u.size() != n) {
        throw DimensionMismatch(what, n, static_cast<long>(u.size()));
    }
    if (!u.allFinite()) {
        throw ValidationError(std::string(what) + ": function has non-finite entries");
    }
}

namespace {

void check_field(const Graph& g, const PairwiseField& f, const char* what) {
    const auto n = static_cast<Eigen::Index>(g.size());
    if (f.entries.rows() != n || f.entries.cols() != n) {
        throw DimensionMismatch(what, static_cast<long>(n * n), static_cast<long>(f.entries.size()));
    }
}

// sqrt(w_ab / (2 mu(a))); the coefficient of the (a, b) gradient component.
double edge_coefficient(const Graph& g, std::size_t a, std::size_t b) {
    const auto i = static_cast<Eigen::Index>(a);
    return std::sqrt(g.weights()(i, static_cast<Eigen::Index>(b)) / (2.0 * g.measure()[i]));
}

}  // namespace

double integral(const Graph& g, const VertexFunction& u) {
    check_aligned(g, u, "integral");
    return u.dot(g.measure());
}

VertexFunction laplacian_apply(const Graph& g, const VertexFunction& u) {
    check_aligned(g, u, "laplacian_apply");
    VertexFunction out = VertexFunction::Zero(u.size());
    const auto& nbrs = g.neighbors();
    const auto& w = g.weights();
    for (std::size_t x = 0; x < g.size(); ++x) {
        const auto i = static_cast<Eigen::Index>(x);
        double acc = 0.0;
        for (auto y : nbrs[x]) {
            const auto j = static_cast<Eigen::Index>(y);
            acc += w(i, j) * (u[i] - u[j]);
        }
        out[i] = acc / g.measure()[i];
    }
    return out;
}

PairwiseField gradient_field(const Graph& g, const VertexFunction& u) {
    check_aligned(g, u, "gradient_field");
    const auto n = static_cast<Eigen::Index>(g.size());
    PairwiseField f{Eigen::MatrixXd::Zero(n, n), PairwiseField::Support::adjacency};
    for (std::size_t x = 0; x < g.size(); ++x) {
        const auto i = static_cast<Eigen::Index>(x);
        for (auto y : g.neighbors()[x]) {
            const auto j = static_cast<Eigen::Index>(y);
            f.entries(i, j) = edge_coefficient(g, x, y) * (u[i] - u[j]);
        }
    }
    return f;
}

VertexFunction pointwise_inner(const Graph& g, const PairwiseField& f, const PairwiseField& h) {
    check_field(g, f, "pointwise_inner");
    check_field(g, h, "pointwise_inner");
    return f.entries.cwiseProduct(h.entries).rowwise().sum();
}

VertexFunction divergence(const Graph& g, const PairwiseField& f) {
    check_field(g, f, "divergence");
    // div F(x) = -(1/mu(x)) sum_y mu(y) grad(1_x)(y) . F(y); grad(1_x) lives on
    // the edges at x, so only the (x, z) and (y, x) entries of F are read.
    const auto& mu = g.measure();
    VertexFunction out = VertexFunction::Zero(static_cast<Eigen::Index>(g.size()));
    for (std::size_t x = 0; x < g.size(); ++x) {
        const auto i = static_cast<Eigen::Index>(x);
        double outgoing = 0.0;
        double incoming = 0.0;
        for (auto y : g.neighbors()[x]) {
            const auto j = static_cast<Eigen::Index>(y);
            outgoing += edge_coefficient(g, x, y) * f.entries(i, j);
            incoming += mu[j] * edge_coefficient(g, y, x) * f.entries(j, i);
        }
        out[i] = -outgoing + incoming / mu[i];
    }
    return out;
}

VertexFunction iterated_laplacian(const Graph& g, const VertexFunction& u, int m) {
    if (m < 1) {
        throw InvalidExponent("iterated_laplacian: m must be >= 1");
    }
    VertexFunction out = u;
    for (int k = 0; k < m; ++k) {
        out = -laplacian_apply(g, out);
    }
    return out;
}

}  // namespace fraclap
