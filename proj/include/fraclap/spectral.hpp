// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fraclap/graph.hpp"

#include <Eigen/Dense>

#include <memory>

namespace fraclap {

/// mu-orthonormal eigenpairs of -Delta, eigenvalues ascending.
struct SpectralDecomposition {
    std::shared_ptr<const Graph> graph;
    Eigen::VectorXd lambdas;
    /// Column i is phi_i.
    Eigen::MatrixXd phis;

    const Graph& g() const { return *graph; }
    std::size_t size() const { return static_cast<std::size_t>(lambdas.size()); }

    /// lambda_i^s, with lambda = 0 mapped to 0 for every s > 0.
    Eigen::VectorXd lambda_powers(double s) const;
    /// Phi diag(f(lambda)) Phi^T U, i.e. f(-Delta) as a matrix acting on vertex vectors.
    Eigen::MatrixXd spectral_matrix(const Eigen::VectorXd& values) const;
    /// Coefficients <u, phi_i> in the mu-inner product.
    Eigen::VectorXd coefficients(const VertexFunction& u) const;
};

/// Eigenvalues below this are treated as exact zeros.
double zero_eigenvalue_threshold(const Eigen::VectorXd& lambdas);

SpectralDecomposition decompose(std::shared_ptr<const Graph> g);

/// p(t, x, y) = sum_i e^{-lambda_i t} phi_i(x) phi_i(y).
Eigen::MatrixXd heat_kernel(const SpectralDecomposition& sd, double t);

/// e^{t Delta} u0.
VertexFunction heat_apply(const SpectralDecomposition& sd, double t, const VertexFunction& u0);

}  // namespace fraclap
