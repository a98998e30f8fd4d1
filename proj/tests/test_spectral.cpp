// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraclap/errors.hpp"
#include "fraclap/spectral.hpp"
#include "support/test_graphs.hpp"

#include <cmath>
#include <random>

using namespace fraclap;
using fraclap::testing::path2;
using fraclap::testing::triangle;

TEST_CASE("closed-form spectra") {
    const auto p2 = decompose(path2());
    CHECK(p2.lambdas[0] == 0.0);
    CHECK(p2.lambdas[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p2.phis(0, 0) == doctest::Approx(0.7071067811865476).epsilon(1e-14));
    CHECK(p2.phis(1, 0) == doctest::Approx(0.7071067811865476).epsilon(1e-14));
    CHECK(p2.phis(0, 1) == doctest::Approx(0.7071067811865476).epsilon(1e-14));
    CHECK(p2.phis(1, 1) == doctest::Approx(-0.7071067811865476).epsilon(1e-14));

    const auto k3 = decompose(triangle());
    CHECK(k3.lambdas[0] == 0.0);
    CHECK(k3.lambdas[1] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(k3.lambdas[2] == doctest::Approx(3.0).epsilon(1e-14));

    CHECK(decompose(path2(1, 1, 3)).lambdas[1] == doctest::Approx(6.0).epsilon(1e-14));
    // Unequal measures: lambda_2 = w (1/mu1 + 1/mu2).
    CHECK(decompose(path2(2, 3, 1)).lambdas[1] == doctest::Approx(1.0 / 2 + 1.0 / 3).epsilon(1e-14));
}

TEST_CASE("spectral invariants on all test graphs") {
    for (const auto& [name, g] : fraclap::testing::all_graphs()) {
        CAPTURE(name);
        const auto sd = decompose(g);
        const auto n = static_cast<Eigen::Index>(g->size());
        const Eigen::MatrixXd lap = g->laplacian_matrix();
        CHECK(sd.lambdas[0] == 0.0);
        CHECK(sd.lambdas[1] > 0.0);
        for (Eigen::Index i = 1; i < n; ++i) {
            CHECK(sd.lambdas[i] >= sd.lambdas[i - 1]);
        }
        const Eigen::MatrixXd gram = sd.phis.transpose() * g->measure().asDiagonal() * sd.phis;
        CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((sd.phis.col(0).array() - 1.0 / std::sqrt(g->volume())).abs().maxCoeff() <= 1e-10);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = (lap * sd.phis.col(i) - sd.lambdas[i] * sd.phis.col(i)).lpNorm<Eigen::Infinity>();
            CHECK(r <= 1e-8 * (1.0 + sd.lambdas[i]));
            // First nonzero entry is positive.
            for (Eigen::Index x = 0; x < n; ++x) {
                if (std::abs(sd.phis(x, i)) > 1e-12) {
                    CHECK(sd.phis(x, i) > 0.0);
                    break;
                }
            }
        }
    }
}

TEST_CASE("heat kernel") {
    const auto p2 = decompose(path2());
    const Eigen::MatrixXd p = heat_kernel(p2, 0.5);
    CHECK(p(0, 1) == doctest::Approx((1.0 - std::exp(-1.0)) / 2.0).epsilon(1e-14));
    CHECK(p(0, 1) == doctest::Approx(0.31606).epsilon(1e-5));

    for (const auto& [name, g] : fraclap::testing::all_graphs()) {
        CAPTURE(name);
        const auto sd = decompose(g);
        const auto n = static_cast<Eigen::Index>(g->size());
        const Eigen::MatrixXd p0 = heat_kernel(sd, 0.0);
        const Eigen::MatrixXd delta = g->measure().cwiseInverse().asDiagonal();
        CHECK((p0 - delta).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((heat_kernel(sd, 40.0 / sd.lambdas[1]).array() - 1.0 / g->volume()).abs().maxCoeff() <= 1e-10);
        for (double t : {0.01, 0.1, 1.0, 10.0}) {
            const Eigen::MatrixXd pt = heat_kernel(sd, t);
            CHECK(((pt * g->measure()).array() - 1.0).abs().maxCoeff() <= 1e-9);
            CHECK((pt - pt.transpose()).cwiseAbs().maxCoeff() == 0.0);
        }
        std::mt19937_64 rng(11);
        std::normal_distribution<double> normal;
        VertexFunction u(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            u[i] = normal(rng);
        }
        const VertexFunction a = heat_apply(sd, 0.4, heat_apply(sd, 0.9, u));
        CHECK((a - heat_apply(sd, 1.3, u)).lpNorm<Eigen::Infinity>() <= 1e-9);
        CHECK(heat_apply(sd, 0.0, u) == u);
        const VertexFunction ones = VertexFunction::Constant(n, 2.5);
        CHECK((heat_apply(sd, 3.0, ones).array() - 2.5).abs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("heat_apply eigenmode decay") {
    const auto p2 = decompose(path2());
    VertexFunction u(2);
    u << 1, -1;
    const VertexFunction v = heat_apply(p2, 1.0, u);
    CHECK(v[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
    CHECK(v[1] == doctest::Approx(-std::exp(-2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(heat_kernel(p2, -1.0), ValidationError);
    CHECK_THROWS_AS(heat_apply(p2, 1.0, VertexFunction::Ones(3)), DimensionMismatch);
}
