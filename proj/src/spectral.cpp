// SPDX-License-Identifier: Apache-2.0

#include "fraclap/spectral.hpp"

#include "fraclap/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace fraclap {

double zero_eigenvalue_threshold(const Eigen::VectorXd& lambdas) {
    const double top = lambdas.size() > 0 ? lambdas.cwiseAbs().maxCoeff() : 0.0;
    return 1e-10 * std::max(1.0, top);
}

Eigen::VectorXd SpectralDecomposition::lambda_powers(double s) const {
    const double cut = zero_eigenvalue_threshold(lambdas);
    Eigen::VectorXd out(lambdas.size());
    for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
        out[i] = lambdas[i] < cut ? 0.0 : std::pow(lambdas[i], s);
    }
    return out;
}

Eigen::MatrixXd SpectralDecomposition::spectral_matrix(const Eigen::VectorXd& values) const {
    const Eigen::MatrixXd scaled = phis * values.asDiagonal();
    return scaled * (phis.transpose() * graph->measure().asDiagonal());
}

Eigen::VectorXd SpectralDecomposition::coefficients(const VertexFunction& u) const {
    check_aligned(*graph, u, "coefficients");
    return phis.transpose() * graph->measure().cwiseProduct(u);
}

SpectralDecomposition decompose(std::shared_ptr<const Graph> g) {
    if (!g) {
        throw ValidationError("decompose: null graph");
    }
    const Eigen::VectorXd& mu = g->measure();
    const Eigen::VectorXd inv_sqrt = mu.cwiseSqrt().cwiseInverse();

    Eigen::MatrixXd lap = -g->weights();
    lap.diagonal() = g->weights().rowwise().sum();
    const Eigen::MatrixXd sym = inv_sqrt.asDiagonal() * lap * inv_sqrt.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("decompose: eigensolver did not converge");
    }

    SpectralDecomposition sd;
    sd.graph = std::move(g);
    sd.lambdas = solver.eigenvalues();
    sd.phis = inv_sqrt.asDiagonal() * solver.eigenvectors();

    const double cut = zero_eigenvalue_threshold(sd.lambdas);
    const auto n = sd.lambdas.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(sd.lambdas[i]) < cut) {
            sd.lambdas[i] = 0.0;
        }
    }
    // Connected graph: the kernel is exactly the constants.
    sd.phis.col(0).setConstant(1.0 / std::sqrt(sd.graph->volume()));

    for (Eigen::Index i = 1; i < n; ++i) {
        auto col = sd.phis.col(i);
        const double scale = col.cwiseAbs().maxCoeff();
        for (Eigen::Index r = 0; r < n; ++r) {
            if (std::abs(col[r]) > 1e-12 * scale) {
                if (col[r] < 0.0) {
                    col = -col;
                }
                break;
            }
        }
    }
    return sd;
}

Eigen::MatrixXd heat_kernel(const SpectralDecomposition& sd, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("heat_kernel: t must be a finite nonnegative number");
    }
    const Eigen::VectorXd decay = (-t * sd.lambdas.array()).exp().matrix();
    Eigen::MatrixXd p = sd.phis * decay.asDiagonal() * sd.phis.transpose();
    const auto n = p.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            p(j, i) = p(i, j);
        }
    }
    return p;
}

VertexFunction heat_apply(const SpectralDecomposition& sd, double t, const VertexFunction& u0) {
    check_aligned(sd.g(), u0, "heat_apply");
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("heat_apply: t must be a finite nonnegative number");
    }
    if (t == 0.0) {
        return u0;
    }
    const Eigen::VectorXd decay = (-t * sd.lambdas.array()).exp().matrix();
    return sd.phis * decay.cwiseProduct(sd.coefficients(u0));
}

}  // namespace fraclap
