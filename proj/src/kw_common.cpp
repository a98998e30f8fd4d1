// SPDX-License-Identifier: Apache-2.0

#include "kw_internal.hpp"

#include "fraclap/errors.hpp"

#include <Eigen/LU>
#include <unsupported/Eigen/NonLinearOptimization>

#include <spdlog/spdlog.h>

#include <cmath>
#include <limits>
#include <random>

namespace fraclap {

std::string to_string(Status s) {
    switch (s) {
        case Status::solvable:
            return "solvable";
        case Status::unsolvable:
            return "unsolvable";
        case Status::regime_dependent:
            return "regime-dependent";
        case Status::unknown:
            return "unknown";
    }
    return "unknown";
}

std::string to_string(Method m) {
    switch (m) {
        case Method::variational_positive_c:
            return "variational-positive-c";
        case Method::variational_zero_c:
            return "variational-zero-c";
        case Method::monotone_iteration:
            return "monotone-iteration";
        case Method::newton_continuation:
            return "newton-continuation";
    }
    return "newton-continuation";
}

std::optional<Method> parse_method(const std::string& name, double c) {
    if (name == "auto") {
        return std::nullopt;
    }
    if (name == "variational") {
        return c > 0.0 ? Method::variational_positive_c : Method::variational_zero_c;
    }
    if (name == "monotone" || name == "monotone-iteration") {
        return Method::monotone_iteration;
    }
    if (name == "newton" || name == "newton-continuation") {
        return Method::newton_continuation;
    }
    if (name == "variational-positive-c") {
        return Method::variational_positive_c;
    }
    if (name == "variational-zero-c") {
        return Method::variational_zero_c;
    }
    throw ValidationError("unknown method '" + name + "'");
}

namespace detail {

Eigen::MatrixXd energy_matrix(const FractionalOperator& op) {
    const Eigen::MatrixXd a = op.g().measure().asDiagonal() * op.op_matrix;
    return 0.5 * (a + a.transpose());
}

VertexFunction equation_residual(const KWProblem& p, const VertexFunction& u) {
    return p.op->op_matrix * u - p.kappa.cwiseProduct(u.array().exp().matrix()) +
           VertexFunction::Constant(u.size(), p.c);
}

double mu_mean(const Graph& g, const VertexFunction& u) { return integral(g, u) / g.volume(); }

void validate(const KWProblem& p) {
    if (!p.op) {
        throw ValidationError("problem has no operator");
    }
    check_aligned(p.g(), p.kappa, "kappa");
    if (!std::isfinite(p.c)) {
        throw ValidationError("c must be finite");
    }
}

double polish_target(const SolveOptions& opts) { return std::min(1e-3 * opts.tol, 1e-11); }

KWProblem with_c(const KWProblem& p, double c) {
    KWProblem q = p;
    q.c = c;
    return q;
}

std::optional<VertexFunction> continue_linear(const KWProblem& p0, const VertexFunction& dkappa, double dc,
                                              const VertexFunction& u_from, const SolveOptions& opts,
                                              std::vector<std::string>& trace) {
    const auto at = [&](double tau) {
        KWProblem q = p0;
        q.kappa = p0.kappa + tau * dkappa;
        q.c = p0.c + tau * dc;
        return q;
    };
    const double min_step = 1e-10;
    const double target = polish_target(opts);
    double tau = 0.0;
    VertexFunction u = u_from;
    double h = 1.0;
    int steps = 0;
    while (tau < 1.0) {
        if (++steps > 100000) {
            trace.push_back("continuation step budget exhausted");
            return std::nullopt;
        }
        const double next = std::min(1.0, tau + h);
        const double taken = next - tau;
        // Tangent predictor: F_u du/dtau = -F_tau.
        const KWProblem here = at(tau);
        const VertexFunction eu = u.array().exp().matrix();
        const Eigen::MatrixXd jac = here.op->op_matrix - Eigen::MatrixXd(here.kappa.cwiseProduct(eu).asDiagonal());
        const VertexFunction f_tau = -dkappa.cwiseProduct(eu) + VertexFunction::Constant(u.size(), dc);
        VertexFunction guess = u;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (lu.isInvertible()) {
            const VertexFunction du = lu.solve(-f_tau);
            if (du.allFinite()) {
                guess = u + taken * du;
            }
        }
        const KWProblem there = at(next);
        auto sol = newton_solve(there, guess, target, opts.max_newton_iter);
        if (!sol && guess != u) {
            sol = newton_solve(there, u, target, opts.max_newton_iter);
        }
        if (sol) {
            u = *sol;
            tau = next;
            h = std::min(1.0, 2.0 * taken);
        } else {
            h = 0.5 * taken;
            if (h < min_step) {
                trace.push_back("continuation stalled at parameter " + std::to_string(tau));
                return std::nullopt;
            }
        }
    }
    return u;
}

std::optional<VertexFunction> continue_in_c(const KWProblem& p, const VertexFunction& u_from, double c_from,
                                            double c_to, const SolveOptions& opts, std::vector<std::string>& trace) {
    return continue_linear(with_c(p, c_from), VertexFunction::Zero(p.kappa.size()), c_to - c_from, u_from, opts,
                           trace);
}

namespace {

struct HybridFunctor {
    using Scalar = double;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;

    const KWProblem* p;

    int operator()(const Eigen::VectorXd& u, Eigen::VectorXd& f) const {
        if (u.maxCoeff() > 700.0) {
            return -1;
        }
        f = equation_residual(*p, u);
        return 0;
    }
    int df(const Eigen::VectorXd& u, Eigen::MatrixXd& j) const {
        j = p->op->op_matrix - Eigen::MatrixXd(p->kappa.cwiseProduct(u.array().exp().matrix()).asDiagonal());
        return 0;
    }
};

}  // namespace

std::optional<VertexFunction> hybrid_solve(const KWProblem& p, const VertexFunction& start, const SolveOptions& opts) {
    HybridFunctor f{&p};
    Eigen::HybridNonLinearSolver<HybridFunctor> solver(f);
    solver.parameters.xtol = 1e-14;
    solver.parameters.maxfev = 20 * opts.max_newton_iter;
    Eigen::VectorXd u = start;
    solver.solve(u);
    if (!u.allFinite() || u.maxCoeff() > 700.0) {
        return std::nullopt;
    }
    return newton_solve(p, u, polish_target(opts), opts.max_newton_iter);
}

std::optional<VertexFunction> restart_search(const KWProblem& p, const VertexFunction& center,
                                             const SolveOptions& opts, std::uint64_t seed,
                                             std::vector<std::string>& trace) {
    static constexpr double kRadii[] = {0.1, 0.3, 1.0, 3.0};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double target = polish_target(opts);
    for (int k = 0; k < opts.restarts; ++k) {
        const double radius = kRadii[k % 4];
        VertexFunction start = center;
        for (Eigen::Index i = 0; i < start.size(); ++i) {
            start[i] += radius * normal(rng);
        }
        if (auto u = newton_solve(p, start, target, opts.max_newton_iter)) {
            trace.push_back("Newton restart " + std::to_string(k) + " converged");
            return u;
        }
        if (auto u = hybrid_solve(p, start, opts)) {
            trace.push_back("hybrid restart " + std::to_string(k) + " converged");
            return u;
        }
    }
    trace.push_back("all " + std::to_string(opts.restarts) + " restarts failed");
    return std::nullopt;
}

double relative_residual(const KWProblem& p, const VertexFunction& u, double residual_inf) {
    const double scale = (p.op->op_matrix * u).lpNorm<Eigen::Infinity>() +
                         p.kappa.cwiseProduct(u.array().exp().matrix()).lpNorm<Eigen::Infinity>() + std::abs(p.c);
    return scale > 0.0 ? residual_inf / scale : residual_inf;
}

void finalize(const KWProblem& p, SolveReport& r, const SolveOptions& opts) {
    if (!r.solution) {
        throw NotSolved("no solution produced", r.trace);
    }
    r.residual_inf = equation_residual(p, *r.solution).lpNorm<Eigen::Infinity>();
    if (!(r.residual_inf <= opts.tol)) {
        r.trace.push_back("residual " + std::to_string(r.residual_inf) + " above tolerance");
        throw NotSolved("residual above tolerance after " + to_string(r.method), r.trace);
    }
    // Every term can be small at once when u runs off to -infinity with c = 0.
    const double rel = relative_residual(p, *r.solution, r.residual_inf);
    if (!(rel <= opts.tol)) {
        r.trace.push_back("relative residual " + std::to_string(rel) + " above tolerance");
        throw NotSolved("relative residual above tolerance after " + to_string(r.method), r.trace);
    }
}

}  // namespace detail

std::optional<VertexFunction> newton_solve(const KWProblem& p, const VertexFunction& start, double target,
                                           int max_iter, int* iterations) {
    detail::validate(p);
    check_aligned(p.g(), start, "newton_solve start");
    VertexFunction u = start;
    VertexFunction f = detail::equation_residual(p, u);
    double norm = f.norm();
    for (int it = 0; it < max_iter; ++it) {
        const double scale = (p.op->op_matrix * u).lpNorm<Eigen::Infinity>() +
                             p.kappa.cwiseProduct(u.array().exp().matrix()).lpNorm<Eigen::Infinity>() +
                             std::abs(p.c);
        const double sup = f.lpNorm<Eigen::Infinity>();
        if (sup <= target || sup <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
            if (iterations) {
                *iterations = it;
            }
            return u;
        }
        const Eigen::MatrixXd jac =
            p.op->op_matrix - Eigen::MatrixXd(p.kappa.cwiseProduct(u.array().exp().matrix()).asDiagonal());
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        const VertexFunction d = lu.solve(-f);
        if (!d.allFinite()) {
            return std::nullopt;
        }
        double t = 1.0;
        bool accepted = false;
        while (t > 1e-10) {
            const VertexFunction trial = u + t * d;
            if (trial.maxCoeff() < 700.0) {
                const VertexFunction ft = detail::equation_residual(p, trial);
                const double nt = ft.norm();
                if (std::isfinite(nt) && nt <= (1.0 - 1e-4 * t) * norm) {
                    u = trial;
                    f = ft;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) {
            return std::nullopt;
        }
    }
    if (f.lpNorm<Eigen::Infinity>() <= target) {
        if (iterations) {
            *iterations = max_iter;
        }
        return u;
    }
    return std::nullopt;
}

ResidualReport check_solution(const KWProblem& p, const VertexFunction& u) {
    detail::validate(p);
    check_aligned(p.g(), u, "check_solution");
    const VertexFunction r = detail::equation_residual(p, u);
    ResidualReport out;
    out.residual_inf = r.lpNorm<Eigen::Infinity>();
    out.slack_min = r.minCoeff();
    out.slack_max = r.maxCoeff();
    out.integral_defect =
        std::abs(integral(p.g(), p.kappa.cwiseProduct(u.array().exp().matrix())) - p.c * p.g().volume());
    out.relative_residual = detail::relative_residual(p, u, out.residual_inf);
    return out;
}

VertexFunction resolvent_solve(const FractionalOperator& op, const VertexFunction& phi, const VertexFunction& f) {
    const Graph& g = op.g();
    check_aligned(g, phi, "resolvent_solve phi");
    check_aligned(g, f, "resolvent_solve f");
    if (!(phi.minCoeff() > 0.0)) {
        throw ValidationError("resolvent_solve: phi must be strictly positive");
    }
    const Eigen::VectorXd& mu = g.measure();
    Eigen::MatrixXd a = detail::energy_matrix(op);
    a.diagonal() += mu.cwiseProduct(phi);
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw SingularSystem("resolvent_solve: system is not positive definite");
    }
    VertexFunction u = llt.solve(mu.cwiseProduct(f));
    if (!u.allFinite()) {
        throw SingularSystem("resolvent_solve: non-finite solution");
    }
    return u;
}

VertexFunction poisson_meanzero_solve(const FractionalOperator& op, const VertexFunction& f) {
    const Graph& g = op.g();
    check_aligned(g, f, "poisson_meanzero_solve");
    const VertexFunction centered = f.array() - detail::mu_mean(g, f);
    if (op.m % 2 == 0 || op.integer_order) {
        const auto& sd = *op.spectral;
        const Eigen::VectorXd pw = sd.lambda_powers(op.s);
        Eigen::VectorXd coeff = sd.coefficients(centered);
        for (Eigen::Index i = 0; i < coeff.size(); ++i) {
            coeff[i] = pw[i] > 0.0 ? coeff[i] / pw[i] : 0.0;
        }
        return sd.phis * coeff;
    }
    // The odd-m operator is not diagonal in the eigenbasis; its kernel is still
    // the constants, so a rank-one lift makes the system definite.
    const Eigen::VectorXd& mu = g.measure();
    Eigen::MatrixXd a = detail::energy_matrix(op) + mu * mu.transpose() / g.volume();
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        throw SingularSystem("poisson_meanzero_solve: lifted system is not positive definite");
    }
    return llt.solve(mu.cwiseProduct(centered));
}

VertexFunction auxiliary_phi0(const KWProblem& p) {
    detail::validate(p);
    if (!(p.c < 0.0)) {
        throw InvalidProblem("auxiliary_phi0 needs c < 0");
    }
    const VertexFunction phi = VertexFunction::Constant(p.kappa.size(), -p.c);
    return resolvent_solve(*p.op, phi, -p.kappa);
}

}  // namespace fraclap
