// SPDX-License-Identifier: Apache-2.0

#include "kw_internal.hpp"

#include "fraclap/errors.hpp"

#include <spdlog/spdlog.h>

#include <cmath>

namespace fraclap {

SolveReport solve_negative_c_monotone(const KWProblem& p, const VertexFunction& u_plus, const SolveOptions& opts) {
    detail::validate(p);
    check_aligned(p.g(), u_plus, "upper solution");
    if (!(p.c < 0.0)) {
        throw InvalidProblem("monotone iteration needs c < 0");
    }
    if (p.s() > 1.0) {
        throw InvalidProblem("monotone iteration is not available for s > 1");
    }

    const VertexFunction slack = detail::equation_residual(p, u_plus);
    const double scale = 1.0 + p.kappa.cwiseProduct(u_plus.array().exp().matrix()).lpNorm<Eigen::Infinity>() +
                         std::abs(p.c);
    if (slack.minCoeff() < -1e-9 * scale) {
        throw NotAnUpperSolution("candidate violates the upper-solution inequality by " +
                                 std::to_string(-slack.minCoeff()));
    }

    // Constant lower solution -l: needs -kappa e^{-l} + c <= 0 and -l <= u_plus.
    double ell = -u_plus.minCoeff();
    const double worst = (-p.kappa).maxCoeff();
    if (worst > 0.0) {
        ell = std::max(ell, std::log(worst / -p.c));
    }
    ell += 1.0;
    const VertexFunction lower = VertexFunction::Constant(u_plus.size(), -ell);

    // phi must dominate |kappa| e^u; where kappa = 0 any positive weight works and a
    // large one (e^u with u near u_plus) makes the steps tiny.
    const auto weight = [&](const VertexFunction& v) {
        return VertexFunction(
            (p.kappa.array() < 0.0).select(-p.kappa.array() * v.array().exp(), 1.0));
    };
    SolveReport r;
    r.method = Method::monotone_iteration;
    r.verdict = screen(p);
    r.lower_solution = lower;

    VertexFunction u = u_plus;
    VertexFunction phi = weight(u_plus);
    if (opts.record_iterates) {
        r.iterates.push_back(u);
    }
    bool converged = false;
    for (int it = 1; it <= opts.max_monotone_iter; ++it) {
        if (opts.refresh_weight) {
            phi = weight(u);
        }
        const VertexFunction rhs = phi.cwiseProduct(u) + p.kappa.cwiseProduct(u.array().exp().matrix()) -
                                   VertexFunction::Constant(u.size(), p.c);
        const VertexFunction next = resolvent_solve(*p.op, phi, rhs);
        const double slack_tol = 1e-10 * (1.0 + u.lpNorm<Eigen::Infinity>());
        if ((next - u).maxCoeff() > slack_tol) {
            throw MonotonicityViolation("iterate " + std::to_string(it) + " increased by " +
                                        std::to_string((next - u).maxCoeff()));
        }
        if ((lower - next).maxCoeff() > slack_tol) {
            throw MonotonicityViolation("iterate " + std::to_string(it) + " fell below the lower solution");
        }
        const double step = (next - u).lpNorm<Eigen::Infinity>();
        u = next;
        r.iterations = it;
        if (opts.record_iterates) {
            r.iterates.push_back(u);
        }
        if (step <= opts.step_tol &&
            detail::equation_residual(p, u).lpNorm<Eigen::Infinity>() <= detail::polish_target(opts)) {
            converged = true;
            break;
        }
    }
    r.solution = u;
    if (!converged) {
        r.trace.push_back("monotone iteration hit the cap of " + std::to_string(opts.max_monotone_iter));
    }
    spdlog::debug("monotone iteration: {} iterations", r.iterations);
    r.energy = std::nan("");
    detail::finalize(p, r, opts);
    return r;
}

std::optional<VertexFunction> construct_upper_solution(const KWProblem& p, const SolveOptions& opts) {
    detail::validate(p);
    if (!(p.c < 0.0)) {
        throw InvalidProblem("upper solutions are constructed for c < 0 only");
    }
    const Graph& g = p.g();
    const double kbar = detail::mu_mean(g, p.kappa);
    if (!(kbar < 0.0)) {
        return std::nullopt;
    }
    if (p.kappa.maxCoeff() <= 0.0) {
        // u+ = a v + b with (-Delta)^s v = kappa - kbar. Then the slack is
        // a kappa - c - kappa e^{u+} = -c + |kappa| (e^{u+} - a) > 0 once u+ >= ln a.
        const VertexFunction v = poisson_meanzero_solve(*p.op, p.kappa);
        const double a = 2.0 * p.c / kbar;
        const double b = std::log(a) - a * v.minCoeff() + 1.0;
        VertexFunction u = a * v;
        u.array() += b;
        if (detail::equation_residual(p, u).minCoeff() >= 0.0) {
            return u;
        }
        return std::nullopt;
    }

    // A solution at some c' <= c is an upper solution at c; continue from c = 0.
    SolveOptions inner = opts;
    inner.method.reset();
    try {
        const SolveReport zero = solve_zero_c(detail::with_c(p, 0.0), inner);
        std::vector<std::string> trace;
        return detail::continue_in_c(p, *zero.solution, 0.0, p.c, inner, trace);
    } catch (const Error& e) {
        spdlog::debug("upper solution by continuation failed: {}", e.what());
        return std::nullopt;
    }
}

}  // namespace fraclap
