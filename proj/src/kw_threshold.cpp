// SPDX-License-Identifier: Apache-2.0

#include "kw_internal.hpp"

#include "fraclap/errors.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <random>

namespace fraclap {

namespace {

// Operational solvability probe at c below a known solution (c_from, u_from).
std::optional<VertexFunction> probe(const KWProblem& base, double c, double c_from, const VertexFunction& u_from,
                                    const SolveOptions& opts, std::vector<std::string>& trace) {
    const KWProblem p = detail::with_c(base, c);
    if (auto u = detail::continue_in_c(base, u_from, c_from, c, opts, trace)) {
        return u;
    }
    return detail::restart_search(p, u_from, opts, opts.seed ^ std::hash<double>{}(c), trace);
}

}  // namespace

ThresholdEstimate estimate_threshold(std::shared_ptr<const FractionalOperator> op, const VertexFunction& kappa,
                                     double tol, int cap, const SolveOptions& opts) {
    if (!op) {
        throw ValidationError("estimate_threshold: null operator");
    }
    if (!(tol > 0.0) || cap < 1) {
        throw ValidationError("estimate_threshold: tol must be positive and cap at least 1");
    }
    KWProblem base{std::move(op), 0.0, kappa};
    detail::validate(base);
    const Graph& g = base.g();
    if (!(integral(g, kappa) < 0.0)) {
        throw InvalidProblem("no c < 0 is solvable when int kappa >= 0");
    }
    if (kappa.maxCoeff() <= 0.0) {
        throw ThresholdIsMinusInfinity("kappa <= 0: solvable for every c < 0");
    }

    ThresholdEstimate est;
    SolveOptions inner = opts;
    inner.method.reset();
    const SolveReport anchor = solve_zero_c(base, inner);
    double c_high = 0.0;
    VertexFunction u_high = *anchor.solution;
    est.trace.push_back("anchored at c = 0");

    // Downward sweep with a doubling step until a probe fails.
    const double unit = std::abs(detail::mu_mean(g, kappa));
    double step = std::max(tol, 1e-3 * unit);
    double c_low = 0.0;
    bool bracketed = false;
    while (est.probes < cap) {
        const double c = c_high - step;
        ++est.probes;
        if (auto u = probe(base, c, c_high, u_high, opts, est.trace)) {
            c_high = c;
            u_high = *u;
            step *= 2.0;
        } else {
            c_low = c;
            bracketed = true;
            break;
        }
    }
    if (!bracketed) {
        throw NotSolved("threshold sweep never failed within the probe cap", est.trace);
    }
    est.trace.push_back("bracketed in [" + std::to_string(c_low) + ", " + std::to_string(c_high) + "]");

    while (c_high - c_low > tol && est.probes < cap) {
        const double mid = 0.5 * (c_low + c_high);
        ++est.probes;
        if (auto u = probe(base, mid, c_high, u_high, opts, est.trace)) {
            c_high = mid;
            u_high = *u;
        } else {
            c_low = mid;
        }
    }

    est.c_low = c_low;
    est.c_high = c_high;
    est.width = c_high - c_low;
    est.converged = est.width <= tol;
    if (auto polished = newton_solve(detail::with_c(base, c_high), u_high, detail::polish_target(opts),
                                     opts.max_newton_iter)) {
        u_high = *polished;
    }
    est.attained_solution_at_threshold = u_high;
    est.residual_at_high = check_solution(detail::with_c(base, c_high), u_high).residual_inf;

    // Consistency audit: monotone iteration from the c_high solution above,
    // probes that must fail below.
    for (int k = 1; k <= 5; ++k) {
        AuditPoint pt;
        pt.c = c_high * (6.0 - k) / 6.0;
        pt.expected_solvable = true;
        try {
            const KWProblem p = detail::with_c(base, pt.c);
            SolveReport r = base.s() > 1.0 ? solve_newton_continuation(p, inner)
                                           : solve_negative_c_monotone(p, u_high, inner);
            pt.solved = true;
            pt.residual_inf = r.residual_inf;
        } catch (const Error& e) {
            est.trace.push_back("audit above at c=" + std::to_string(pt.c) + " failed: " + e.what());
        }
        est.audit.push_back(pt);
    }
    for (int k = 1; k <= 5; ++k) {
        AuditPoint pt;
        pt.c = c_low * (1.0 + 0.1 * k);
        pt.expected_solvable = false;
        std::vector<std::string> scratch;
        if (auto u = probe(base, pt.c, c_high, u_high, opts, scratch)) {
            pt.solved = true;
            pt.residual_inf = check_solution(detail::with_c(base, pt.c), *u).residual_inf;
        }
        est.audit.push_back(pt);
    }
    spdlog::debug("threshold bracket [{}, {}] after {} probes", est.c_low, est.c_high, est.probes);
    return est;
}

}  // namespace fraclap
