// SPDX-License-Identifier: Apache-2.0

#include "fraclap/fractional.hpp"

#include "fraclap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fraclap {

double matrix_inf_norm(const Eigen::MatrixXd& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

Eigen::MatrixXd kernel_w_spectral(const SpectralDecomposition& sd, double s) {
    const Eigen::VectorXd& mu = sd.g().measure();
    const Eigen::VectorXd pw = sd.lambda_powers(s);
    Eigen::MatrixXd w = -(mu.asDiagonal() * (sd.phis * pw.asDiagonal() * sd.phis.transpose()) * mu.asDiagonal());
    const auto n = w.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        w(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            w(j, i) = w(i, j);
        }
    }
    return w;
}

Eigen::MatrixXd kernel_operator_matrix(const Graph& g, const Eigen::MatrixXd& w) {
    const Eigen::VectorXd inv_mu = g.measure().cwiseInverse();
    Eigen::MatrixXd op = -(inv_mu.asDiagonal() * w);
    op.diagonal() = inv_mu.cwiseProduct(w.rowwise().sum());
    return op;
}

namespace {

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& a, int k) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    for (int i = 0; i < k; ++i) {
        out = out * a;
    }
    return out;
}

// sum_b B_b^T S B_b, where B_b u is column b of the gradient of u.
Eigen::MatrixXd odd_core(const Graph& g, const Eigen::MatrixXd& sym) {
    const auto n = static_cast<Eigen::Index>(g.size());
    const auto& w = g.weights();
    const auto& mu = g.measure();
    const auto& nbrs = g.neighbors();
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t bb = 0; bb < g.size(); ++bb) {
        const auto b = static_cast<Eigen::Index>(bb);
        for (auto yy : nbrs[bb]) {
            const auto y = static_cast<Eigen::Index>(yy);
            const double gy = std::sqrt(w(y, b) / (2.0 * mu[y]));
            for (auto zz : nbrs[bb]) {
                const auto z = static_cast<Eigen::Index>(zz);
                const double gz = std::sqrt(w(z, b) / (2.0 * mu[z]));
                const double v = gy * gz * sym(y, z);
                q(y, z) += v;
                q(y, b) -= v;
                q(b, z) -= v;
                q(b, b) += v;
            }
        }
    }
    return q;
}

bool near_integer(double s) { return std::abs(s - std::round(s)) < 1e-12; }

}  // namespace

FractionalOperator build_operator(std::shared_ptr<const SpectralDecomposition> sd, double s) {
    if (!sd) {
        throw ValidationError("build_operator: null spectral decomposition");
    }
    if (!std::isfinite(s) || s <= 0.0) {
        throw InvalidExponent("fractional order must be a positive finite number");
    }

    FractionalOperator op;
    op.spectral = sd;
    op.s = s;
    const Graph& g = sd->g();
    const Eigen::MatrixXd lap = g.laplacian_matrix();

    if (near_integer(s) && s >= 1.0) {
        op.integer_order = true;
        op.m = static_cast<int>(std::lround(s));
        op.sigma = 0.0;
        op.op_matrix = matrix_power(lap, op.m);
        if (op.m > 1) {
            op.warnings.push_back("integer-order s=" + std::to_string(op.m) +
                                  " (outside the sigma in (0,1) regime); using L^s");
        }
    } else {
        op.m = static_cast<int>(std::floor(s));
        op.sigma = s - op.m;
        op.kernel_w = kernel_w_spectral(*sd, op.sigma);
        const Eigen::MatrixXd l_sigma = kernel_operator_matrix(g, op.kernel_w);
        if (op.m == 0) {
            op.op_matrix = l_sigma;
        } else if (op.m % 2 == 0) {
            const Eigen::MatrixXd lk = matrix_power(lap, op.m / 2);
            op.op_matrix = lk * l_sigma * lk;
        } else {
            const Eigen::MatrixXd lk = matrix_power(lap, (op.m - 1) / 2);
            const Eigen::MatrixXd sym = g.measure().asDiagonal() * l_sigma;
            const Eigen::MatrixXd core = g.measure().cwiseInverse().asDiagonal() * odd_core(g, sym);
            op.op_matrix = lk * core * lk;
        }
    }

    op.spectral_power = sd->spectral_matrix(sd->lambda_powers(s));
    op.spectral_gap = matrix_inf_norm(op.op_matrix - op.spectral_power);
    if (op.m % 2 == 1 && !op.integer_order) {
        op.warnings.push_back("odd m: composed operator differs from Phi Lambda^s Phi^{-1} by " +
                              std::to_string(op.spectral_gap) + " in the inf-norm");
    }
#ifndef NDEBUG
    if (op.m % 2 == 0 || op.integer_order) {
        const double scale = 1.0 + matrix_inf_norm(op.spectral_power);
        if (op.spectral_gap > 1e-9 * scale) {
            throw NumericalError("build_operator: kernel and spectral assembly disagree");
        }
    }
#endif
    return op;
}

VertexFunction frac_apply(const FractionalOperator& op, const VertexFunction& u) {
    check_aligned(op.g(), u, "frac_apply");
    VertexFunction out = op.op_matrix * u;
#ifndef NDEBUG
    if (op.m == 0) {
        const auto& sd = *op.spectral;
        const VertexFunction spectral = sd.phis * sd.lambda_powers(op.s).cwiseProduct(sd.coefficients(u));
        if ((spectral - out).lpNorm<Eigen::Infinity>() > 1e-9 * (1.0 + out.lpNorm<Eigen::Infinity>())) {
            throw NumericalError("frac_apply: kernel sum and spectral sum disagree");
        }
    }
#endif
    return out;
}

VertexFunction composed_apply(const FractionalOperator& op, const VertexFunction& u) {
    const Graph& g = op.g();
    check_aligned(g, u, "composed_apply");
    if (op.integer_order) {
        return op.m % 2 == 0 ? VertexFunction(iterated_laplacian(g, u, op.m))
                             : VertexFunction(-iterated_laplacian(g, u, op.m));
    }
    const Eigen::MatrixXd l_sigma = kernel_operator_matrix(g, op.kernel_w);
    if (op.m == 0) {
        return l_sigma * u;
    }
    const int k = op.m / 2;
    // Delta^k and (-Delta)^k share a sign on both sides of the product, so the
    // outer factors are applied as plain Delta^k.
    const VertexFunction inner = k > 0 ? iterated_laplacian(g, u, k) : u;
    VertexFunction mid;
    if (op.m % 2 == 0) {
        mid = l_sigma * inner;
    } else {
        PairwiseField grad = gradient_field(g, inner);
        grad.entries = l_sigma * grad.entries;
        grad.support = PairwiseField::Support::all_pairs;
        mid = -divergence(g, grad);
    }
    return k > 0 ? iterated_laplacian(g, mid, k) : mid;
}

namespace {

PairwiseField sigma_gradient(const Graph& g, const Eigen::MatrixXd& w, const VertexFunction& f) {
    const auto n = static_cast<Eigen::Index>(g.size());
    const auto& mu = g.measure();
    PairwiseField out{Eigen::MatrixXd::Zero(n, n), PairwiseField::Support::all_pairs};
    for (Eigen::Index x = 0; x < n; ++x) {
        for (Eigen::Index y = 0; y < n; ++y) {
            if (x != y) {
                out.entries(x, y) = std::sqrt(std::max(w(x, y), 0.0) / (2.0 * mu[x])) * (f[x] - f[y]);
            }
        }
    }
    return out;
}

}  // namespace

FractionalGradient frac_gradient(const FractionalOperator& op, const VertexFunction& u) {
    const Graph& g = op.g();
    check_aligned(g, u, "frac_gradient");
    FractionalGradient out;
    const int k = op.m / 2;
    const VertexFunction inner = k > 0 ? iterated_laplacian(g, u, k) : u;

    if (op.integer_order) {
        if (op.m % 2 == 0) {
            out.scalar = inner;
        } else {
            out.fields.push_back(gradient_field(g, inner));
        }
        return out;
    }
    if (op.m % 2 == 0) {
        out.fields.push_back(sigma_gradient(g, op.kernel_w, inner));
        return out;
    }
    const PairwiseField grad = gradient_field(g, inner);
    out.fields.reserve(g.size());
    for (Eigen::Index b = 0; b < grad.entries.cols(); ++b) {
        out.fields.push_back(sigma_gradient(g, op.kernel_w, grad.entries.col(b)));
    }
    return out;
}

VertexFunction pointwise_inner(const Graph& g, const FractionalGradient& a, const FractionalGradient& b) {
    if (a.fields.size() != b.fields.size() || a.scalar.size() != b.scalar.size()) {
        throw DimensionMismatch("pointwise_inner", static_cast<long>(a.fields.size()),
                                static_cast<long>(b.fields.size()));
    }
    VertexFunction out = VertexFunction::Zero(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < a.fields.size(); ++i) {
        out += pointwise_inner(g, a.fields[i], b.fields[i]);
    }
    if (a.scalar.size() > 0) {
        out += a.scalar.cwiseProduct(b.scalar);
    }
    return out;
}

double dirichlet_energy(const FractionalOperator& op, const VertexFunction& u) {
    check_aligned(op.g(), u, "dirichlet_energy");
    return integral(op.g(), u.cwiseProduct(op.op_matrix * u));
}

LimitReport limit_residuals(const SpectralDecomposition& sd, const std::vector<double>& s_list) {
    const Graph& g = sd.g();
    const auto n = static_cast<Eigen::Index>(g.size());
    const Eigen::MatrixXd lap = g.laplacian_matrix();
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) -
                                 sd.phis.col(0) * (sd.phis.col(0).transpose() * g.measure().asDiagonal());
    VertexFunction probe = VertexFunction::Zero(n);
    if (n > 1) {
        probe = sd.phis.col(1) / sd.phis.col(1).lpNorm<Eigen::Infinity>();
    }

    LimitReport report;
    for (double s : s_list) {
        if (!(s > 0.0 && s < 1.0)) {
            throw InvalidExponent("limit_residuals: every s must lie in (0, 1)");
        }
        const Eigen::MatrixXd ls = kernel_operator_matrix(g, kernel_w_spectral(sd, s));
        LimitRow row;
        row.s = s;
        row.to_laplacian = matrix_inf_norm(ls - lap);
        row.to_projection = matrix_inf_norm(ls - proj);
        row.mean_zero_residual = (ls * probe - probe).lpNorm<Eigen::Infinity>();
        report.rows.push_back(row);
    }

    std::vector<std::size_t> order(report.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return report.rows[a].s < report.rows[b].s; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        const auto& lo = report.rows[order[i - 1]];
        const auto& hi = report.rows[order[i]];
        if (!(hi.to_laplacian < lo.to_laplacian)) {
            report.monotone_toward_one = false;
        }
        if (!(lo.to_projection < hi.to_projection) || !(lo.mean_zero_residual < hi.mean_zero_residual)) {
            report.monotone_toward_zero = false;
        }
    }
    return report;
}

}  // namespace fraclap
