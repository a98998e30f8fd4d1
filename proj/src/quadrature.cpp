// SPDX-License-Identifier: Apache-2.0

#include "fraclap/errors.hpp"
#include "fraclap/fractional.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <string>

namespace fraclap {

namespace {

// Boost refines while the local error exceeds tol times the local estimate,
// which never settles where the heat kernel is tiny; the depth cap ends that
// and the absolute check below still rejects unconverged results.
constexpr unsigned kMaxDepth = 10;

double integrate_unit(const std::function<double(double)>& f, double tol, const char* what) {
    double err = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, kMaxDepth, tol, &err);
    if (!std::isfinite(value) || err > tol * std::max(1.0, std::abs(value))) {
        throw QuadratureError(std::string(what) + ": tolerance not reached (error estimate " + std::to_string(err) +
                              ")");
    }
    return value;
}

// int_0^inf g(t) t^{-1-s} dt where g(t) = h(t) * t near 0 and g is bounded at
// infinity. `h(t)` must return g(t) / t and stay finite at t = 0.
//   [0, 1]:   t = v^{1/(1-s)},  t^{-1-s} dt = dv / ((1-s) t)
//   [1, inf): t = v^{-1/s},     t^{-1-s} dt = dv / s
double split_integral(const std::function<double(double)>& h, const std::function<double(double)>& g, double s,
                      double tol, const char* what) {
    const auto near = [&](double v) { return h(std::pow(v, 1.0 / (1.0 - s))) / (1.0 - s); };
    const auto far = [&](double v) {
        const double t = v > 0.0 ? std::pow(v, -1.0 / s) : std::numeric_limits<double>::infinity();
        return g(t) / s;
    };
    return integrate_unit(near, tol, what) + integrate_unit(far, tol, what);
}

void check_order(double s) {
    if (!(s > 0.0 && s < 1.0)) {
        throw InvalidExponent("quadrature oracle needs 0 < s < 1");
    }
}

}  // namespace

double lambda_power_quadrature(double lambda, double s, double tol) {
    check_order(s);
    if (lambda < 0.0) {
        throw ValidationError("lambda_power_quadrature: lambda must be nonnegative");
    }
    const auto h = [&](double t) { return t > 0.0 ? std::expm1(-lambda * t) / t : -lambda; };
    const auto g = [&](double t) { return std::isinf(t) ? -1.0 : std::expm1(-lambda * t); };
    const double integral = split_integral(h, g, s, tol, "lambda_power_quadrature");
    return -(s / std::tgamma(1.0 - s)) * integral;
}

Eigen::MatrixXd kernel_w_quadrature(const SpectralDecomposition& sd, double s, double tol) {
    check_order(s);
    if (!(tol > 0.0)) {
        throw ValidationError("kernel_w_quadrature: tol must be positive");
    }
    const auto n = static_cast<Eigen::Index>(sd.size());
    const Eigen::VectorXd& mu = sd.g().measure();
    const double factor = s / std::tgamma(1.0 - s);
    const double inv_volume = 1.0 / sd.g().volume();

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd coeff(n);
    for (Eigen::Index x = 0; x < n; ++x) {
        for (Eigen::Index y = x + 1; y < n; ++y) {
            coeff = sd.phis.row(x).transpose().cwiseProduct(sd.phis.row(y).transpose());
            // p(0, x, y) = 0 off the diagonal, so p(t)/t = sum expm1(-lambda t)/t phi phi.
            const auto h = [&](double t) {
                double acc = 0.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double li = sd.lambdas[i];
                    acc += (t > 0.0 ? std::expm1(-li * t) / t : -li) * coeff[i];
                }
                return acc;
            };
            const auto g = [&](double t) {
                if (std::isinf(t)) {
                    return inv_volume;
                }
                double acc = 0.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    acc += std::exp(-sd.lambdas[i] * t) * coeff[i];
                }
                return acc;
            };
            const double value = factor * mu[x] * mu[y] * split_integral(h, g, s, tol, "kernel_w_quadrature");
            w(x, y) = value;
            w(y, x) = value;
        }
    }
    return w;
}

}  // namespace fraclap
