// SPDX-License-Identifier: Apache-2.0

#include "kw_internal.hpp"

#include "fraclap/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>
#include <random>

namespace fraclap {

using detail::energy_matrix;
using detail::mu_mean;

namespace {

constexpr int kMinimiserIterations = 500;

// Cholesky of h + tau diag(d), raising tau until it succeeds.
Eigen::LLT<Eigen::MatrixXd> shifted_llt(const Eigen::MatrixXd& h, const Eigen::VectorXd& d) {
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    if (llt.info() == Eigen::Success) {
        return llt;
    }
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    for (double tau = 1e-8 * scale; tau < 1e12 * scale; tau *= 10.0) {
        Eigen::MatrixXd shifted = h;
        shifted.diagonal() += tau * d;
        llt.compute(shifted);
        if (llt.info() == Eigen::Success) {
            return llt;
        }
    }
    throw SingularSystem("could not regularise Newton matrix");
}

struct PositiveCState {
    VertexFunction v;
    double z = 0.0;
};

// Reduced functional F(v) = J1(v + ln(c vol / Z(v))), Z(v) = int kappa e^v.
double reduced_j1(const Eigen::MatrixXd& s, const Eigen::VectorXd& mu, const VertexFunction& kappa, double c,
                  double vol, const VertexFunction& v) {
    const double z = mu.dot(kappa.cwiseProduct(v.array().exp().matrix()));
    if (!(z > 0.0) || !std::isfinite(z)) {
        return std::numeric_limits<double>::infinity();
    }
    return 0.5 * v.dot(s * v) + c * mu.dot(v) + c * vol * std::log(c * vol / z);
}

std::optional<PositiveCState> minimise_j1(const KWProblem& p, const VertexFunction& start, const SolveOptions& opts,
                                          int& iterations) {
    const Graph& g = p.g();
    const Eigen::VectorXd& mu = g.measure();
    const double vol = g.volume();
    const double c = p.c;
    const Eigen::MatrixXd s = energy_matrix(*p.op);
    const double target = detail::polish_target(opts);

    VertexFunction v = start.array() - mu_mean(g, start);
    double fv = reduced_j1(s, mu, p.kappa, c, vol, v);
    if (!std::isfinite(fv)) {
        return std::nullopt;
    }
    for (int it = 0; it < kMinimiserIterations; ++it) {
        iterations = it;
        const VertexFunction w = mu.cwiseProduct(p.kappa).cwiseProduct(v.array().exp().matrix());
        const double z = w.sum();
        const VertexFunction grad = s * v + c * mu - (c * vol / z) * w;
        if (grad.cwiseQuotient(mu).lpNorm<Eigen::Infinity>() <= target) {
            return PositiveCState{v, z};
        }
        Eigen::MatrixXd h = s + (c * vol / (z * z)) * (w * w.transpose()) + mu * mu.transpose() / vol;
        h.diagonal() -= (c * vol / z) * w;
        const VertexFunction d = -shifted_llt(h, mu).solve(grad);
        const double slope = grad.dot(d);
        if (!(slope < 0.0)) {
            break;
        }
        double t = 1.0;
        bool moved = false;
        while (t > 1e-12) {
            const VertexFunction trial = v + t * d;
            const double ft = reduced_j1(s, mu, p.kappa, c, vol, trial);
            if (ft <= fv + 1e-4 * t * slope) {
                v = trial.array() - mu_mean(g, trial);
                fv = ft;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) {
            break;
        }
    }
    const VertexFunction w = mu.cwiseProduct(p.kappa).cwiseProduct(v.array().exp().matrix());
    const double z = w.sum();
    const VertexFunction grad = s * v + c * mu - (c * vol / z) * w;
    if (z > 0.0 && grad.cwiseQuotient(mu).lpNorm<Eigen::Infinity>() <= opts.tol) {
        return PositiveCState{v, z};
    }
    return std::nullopt;
}

void polish(const KWProblem& p, SolveReport& r, const SolveOptions& opts) {
    const auto polished = newton_solve(p, *r.solution, detail::polish_target(opts), opts.max_newton_iter);
    if (polished) {
        r.solution = *polished;
    }
}

}  // namespace

SolveReport solve_positive_c(const KWProblem& p, const SolveOptions& opts) {
    detail::validate(p);
    if (!(p.c > 0.0)) {
        throw InvalidProblem("solve_positive_c needs c > 0");
    }
    if (!(p.kappa.maxCoeff() > 0.0)) {
        throw InvalidProblem("solve_positive_c needs kappa positive somewhere");
    }
    const Graph& g = p.g();
    const Eigen::VectorXd& mu = g.measure();
    const auto n = p.kappa.size();

    SolveReport r;
    r.method = Method::variational_positive_c;
    r.verdict = screen(p);

    std::vector<VertexFunction> starts;
    VertexFunction bump = VertexFunction::Zero(n);
    if (integral(g, p.kappa) > 0.0) {
        starts.push_back(bump);
    } else {
        Eigen::Index top = 0;
        p.kappa.maxCoeff(&top);
        const double rest = integral(g, p.kappa) - mu[top] * p.kappa[top];
        bump[top] = std::log(2.0 * std::max(1.0, -rest / (mu[top] * p.kappa[top])));
        starts.push_back(bump);
    }
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < opts.restarts; ++k) {
        VertexFunction v = bump;
        for (Eigen::Index i = 0; i < n; ++i) {
            v[i] += normal(rng);
        }
        starts.push_back(v);
    }

    bool feasible = false;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const double z = integral(g, p.kappa.cwiseProduct(starts[k].array().exp().matrix()));
        if (!(z > 0.0)) {
            r.trace.push_back("start " + std::to_string(k) + ": int kappa e^v <= 0, skipped");
            continue;
        }
        feasible = true;
        int its = 0;
        const auto state = minimise_j1(p, starts[k], opts, its);
        r.iterations += its;
        if (!state) {
            r.trace.push_back("start " + std::to_string(k) + ": minimiser stalled");
            continue;
        }
        VertexFunction u = state->v.array() + std::log(p.c * g.volume() / state->z);
        r.solution = u;
        r.trace.push_back("start " + std::to_string(k) + ": converged");
        break;
    }
    if (!feasible) {
        throw InfeasibleStart("no start with int kappa e^v > 0", r.trace);
    }
    if (!r.solution) {
        throw NotSolved("variational minimisation for c > 0 failed", r.trace);
    }
    polish(p, r, opts);
    const VertexFunction& u = *r.solution;
    r.energy = 0.5 * integral(g, u.cwiseProduct(p.op->op_matrix * u)) + p.c * integral(g, u);
    detail::finalize(p, r, opts);
    return r;
}

namespace {

double constraint(const Eigen::VectorXd& mu, const VertexFunction& kappa, const VertexFunction& u) {
    return mu.dot(kappa.cwiseProduct(u.array().exp().matrix()));
}

// Scalar Newton for int kappa e^{u + eta rho} = 0 along the mean-zero part of kappa e^u.
std::optional<VertexFunction> retract(const Graph& g, const VertexFunction& kappa, const VertexFunction& u) {
    const Eigen::VectorXd& mu = g.measure();
    const VertexFunction ke = kappa.cwiseProduct(u.array().exp().matrix());
    if (!ke.allFinite()) {
        return std::nullopt;
    }
    const VertexFunction rho = ke.array() - mu_mean(g, ke);
    const double scale = mu.dot(kappa.cwiseAbs().cwiseProduct(u.array().exp().matrix()));
    double eta = 0.0;
    for (int it = 0; it < 60; ++it) {
        const VertexFunction x = u + eta * rho;
        const VertexFunction kx = kappa.cwiseProduct(x.array().exp().matrix());
        const double q = mu.dot(kx);
        if (std::abs(q) <= 1e-14 * scale) {
            return x;
        }
        const double dq = mu.dot(kx.cwiseProduct(rho));
        if (!(dq > 0.0) || !std::isfinite(dq)) {
            return std::nullopt;
        }
        eta -= q / dq;
    }
    return std::nullopt;
}

VertexFunction feasible_start(const Graph& g, const VertexFunction& kappa) {
    const Eigen::VectorXd& mu = g.measure();
    const VertexFunction kp = kappa.cwiseMax(0.0);
    const VertexFunction r = kp.array() - mu_mean(g, kp);
    const auto q = [&](double t) { return constraint(mu, kappa, VertexFunction(t * r)); };
    double hi = 1.0;
    for (int k = 0; k < 200 && !(q(hi) > 0.0); ++k) {
        hi *= 2.0;
    }
    if (!(q(hi) > 0.0)) {
        throw NotSolved("could not bracket a point of the constraint set");
    }
    boost::math::tools::eps_tolerance<double> stop(52);
    std::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(q, 0.0, hi, stop, max_iter);
    const double t = 0.5 * (bracket.first + bracket.second);
    VertexFunction u = t * r;
    if (auto fixed = retract(g, kappa, u)) {
        u = *fixed;
    }
    return u;
}

}  // namespace

SolveReport solve_zero_c(const KWProblem& p, const SolveOptions& opts) {
    detail::validate(p);
    if (p.c != 0.0) {
        throw InvalidProblem("solve_zero_c needs c = 0");
    }
    const Graph& g = p.g();
    const Eigen::VectorXd& mu = g.measure();
    const auto n = p.kappa.size();

    SolveReport r;
    r.method = Method::variational_zero_c;
    r.verdict = screen(p);

    if (p.kappa.cwiseAbs().maxCoeff() == 0.0) {
        r.solution = VertexFunction::Zero(n);
        r.energy = 0.0;
        r.trace.push_back("kappa = 0: returning the constant 0");
        detail::finalize(p, r, opts);
        return r;
    }
    if (!(p.kappa.maxCoeff() > 0.0 && p.kappa.minCoeff() < 0.0) || !(integral(g, p.kappa) < 0.0)) {
        throw InvalidProblem("solve_zero_c needs kappa to change sign with negative integral");
    }

    const Eigen::MatrixXd s = energy_matrix(*p.op);
    VertexFunction u = feasible_start(g, p.kappa);
    double energy = 0.5 * u.dot(s * u);
    const double target = detail::polish_target(opts);

    Eigen::MatrixXd a(n, 2);
    for (int it = 0; it < kMinimiserIterations; ++it) {
        r.iterations = it;
        const VertexFunction q = mu.cwiseProduct(p.kappa).cwiseProduct(u.array().exp().matrix());
        const VertexFunction grad = s * u;
        a.col(0) = mu;
        a.col(1) = q;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
        const Eigen::Vector2d mult = a.colPivHouseholderQr().solve(grad);
        const VertexFunction kkt = grad - a * mult;
        if (kkt.cwiseQuotient(mu).lpNorm<Eigen::Infinity>() <= target || n <= 2) {
            break;
        }
        const Eigen::MatrixXd full_q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd z = full_q.rightCols(n - 2);
        Eigen::MatrixXd hl = s;
        hl.diagonal() -= mult[1] * q;
        const Eigen::MatrixXd hr = z.transpose() * hl * z;
        const Eigen::VectorXd gr = z.transpose() * grad;
        const VertexFunction d = z * (-shifted_llt(hr, Eigen::VectorXd::Ones(n - 2)).solve(gr));
        const double slope = grad.dot(d);
        if (!(slope < 0.0)) {
            break;
        }
        double t = 1.0;
        bool moved = false;
        while (t > 1e-12) {
            VertexFunction trial = u + t * d;
            trial.array() -= mu_mean(g, trial);
            if (auto fixed = retract(g, p.kappa, trial)) {
                const double et = 0.5 * fixed->dot(s * *fixed);
                if (et <= energy + 1e-4 * t * slope) {
                    u = *fixed;
                    energy = et;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!moved) {
            r.trace.push_back("line search stalled at iteration " + std::to_string(it));
            break;
        }
    }

    const double denom = integral(g, p.kappa.cwiseProduct(u).cwiseProduct(u.array().exp().matrix()));
    const double lambda0 = u.dot(s * u) / denom;
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) {
        throw MultiplierSignError("Lagrange multiplier is not positive: " + std::to_string(lambda0));
    }
    r.multiplier = lambda0;
    r.energy = energy;
    r.solution = VertexFunction(u.array() + std::log(lambda0));
    polish(p, r, opts);
    detail::finalize(p, r, opts);
    return r;
}

}  // namespace fraclap
