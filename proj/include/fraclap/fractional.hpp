// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fraclap/graph.hpp"
#include "fraclap/spectral.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace fraclap {

/// (-Delta)^s on a fixed graph, s = sigma + m.
///
/// sigma is in (0, 1) unless s is an integer, in which case sigma = 0 and the
/// operator is the plain power L^s. For m >= 1 and sigma > 0 the matrix is the
/// composition Delta^{m/2} (-Delta)^sigma Delta^{m/2} (m even) or
/// -Delta^k div (-Delta)^sigma grad Delta^k with k = (m - 1) / 2 (m odd), the
/// inner fractional power acting on each component of the gradient field.
struct FractionalOperator {
    std::shared_ptr<const SpectralDecomposition> spectral;
    double s = 0.0;
    double sigma = 0.0;
    int m = 0;
    bool integer_order = false;

    /// W_sigma with zero diagonal; empty when sigma = 0.
    Eigen::MatrixXd kernel_w;
    /// L_s acting on vertex vectors: (L_s u)(x) = ((-Delta)^s u)(x).
    Eigen::MatrixXd op_matrix;
    /// Phi Lambda^s Phi^{-1}.
    Eigen::MatrixXd spectral_power;
    /// ||op_matrix - spectral_power||_inf. Zero up to rounding except for odd m.
    double spectral_gap = 0.0;
    std::vector<std::string> warnings;

    const Graph& g() const { return spectral->g(); }
    std::size_t size() const { return spectral->size(); }
};

/// Max absolute row sum.
double matrix_inf_norm(const Eigen::MatrixXd& a);

/// W_s(x, y) = -mu(x) mu(y) sum_i lambda_i^s phi_i(x) phi_i(y), zero diagonal.
Eigen::MatrixXd kernel_w_spectral(const SpectralDecomposition& sd, double s);

/// Operator matrix of (1/mu(x)) sum_y W(x, y) (u(x) - u(y)).
Eigen::MatrixXd kernel_operator_matrix(const Graph& g, const Eigen::MatrixXd& w);

FractionalOperator build_operator(std::shared_ptr<const SpectralDecomposition> sd, double s);

VertexFunction frac_apply(const FractionalOperator& op, const VertexFunction& u);

/// Applies the composition factor by factor (gradient, componentwise
/// fractional power, divergence, iterated Laplacians) without forming the
/// matrix. Used to cross-check op_matrix.
VertexFunction composed_apply(const FractionalOperator& op, const VertexFunction& u);

/// grad^s u. For sigma > 0 every entry of `fields` is an all-pairs field; odd m
/// yields one field per component of grad Delta^k u. Even integer s has no
/// pairwise part and stores Delta^{s/2} u in `scalar`.
struct FractionalGradient {
    std::vector<PairwiseField> fields;
    VertexFunction scalar;
};

FractionalGradient frac_gradient(const FractionalOperator& op, const VertexFunction& u);

/// Pointwise grad^s u . grad^s v: sum over fields plus the scalar product.
VertexFunction pointwise_inner(const Graph& g, const FractionalGradient& a, const FractionalGradient& b);

/// int u (-Delta)^s u dmu.
double dirichlet_energy(const FractionalOperator& op, const VertexFunction& u);

/// W_s from the heat-kernel time integral, entry by entry. 0 < s < 1.
Eigen::MatrixXd kernel_w_quadrature(const SpectralDecomposition& sd, double s, double tol);

/// lambda^s = -(s / Gamma(1 - s)) int_0^inf (e^{-lambda t} - 1) t^{-1-s} dt.
double lambda_power_quadrature(double lambda, double s, double tol);

struct LimitRow {
    double s = 0.0;
    /// ||L_s - L||_inf
    double to_laplacian = 0.0;
    /// ||L_s - (I - phi_1 phi_1^T U)||_inf
    double to_projection = 0.0;
    /// ||L_s u - u||_inf for u = phi_2 / ||phi_2||_inf.
    double mean_zero_residual = 0.0;
};

struct LimitReport {
    std::vector<LimitRow> rows;
    /// to_laplacian decreases along rows sorted by s ascending toward 1.
    bool monotone_toward_one = true;
    /// to_projection and mean_zero_residual decrease as s descends toward 0.
    bool monotone_toward_zero = true;
};

LimitReport limit_residuals(const SpectralDecomposition& sd, const std::vector<double>& s_list);

}  // namespace fraclap
