// SPDX-License-Identifier: Apache-2.0

#include "kw_internal.hpp"

#include "fraclap/errors.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <random>

namespace fraclap {

FeasibilityVerdict screen(const KWProblem& p) {
    detail::validate(p);
    const Graph& g = p.g();
    const double kmax = p.kappa.maxCoeff();
    const double kmin = p.kappa.minCoeff();
    const double total = integral(g, p.kappa);
    const bool sign_change = kmax > 0.0 && kmin < 0.0;
    const bool high_order = p.s() > 1.0;
    const std::string tag = high_order ? "[s>1] " : "[s<=1] ";

    FeasibilityVerdict v;
    if (p.c > 0.0) {
        if (kmax > 0.0) {
            v.status = Status::solvable;
            v.reasons.push_back(tag + "c > 0: solvable since kappa is positive somewhere");
        } else {
            v.status = Status::unsolvable;
            v.reasons.push_back(tag + "c > 0: unsolvable since kappa is nowhere positive");
        }
        return v;
    }

    if (p.c == 0.0) {
        if (kmax == 0.0 && kmin == 0.0) {
            v.status = Status::solvable;
            v.reasons.push_back("c = 0, kappa = 0: every constant is a solution");
            return v;
        }
        if (sign_change && total < 0.0) {
            v.status = Status::solvable;
            v.reasons.push_back(tag + "c = 0: solvable since kappa changes sign and int kappa < 0");
            return v;
        }
        if (!sign_change) {
            v.status = Status::unsolvable;
            v.reasons.push_back(tag + "c = 0: unsolvable since kappa does not change sign (int kappa e^u = 0 fails)");
            return v;
        }
        if (high_order) {
            v.status = Status::unknown;
            v.reasons.push_back(tag + "c = 0: kappa changes sign but int kappa >= 0; no criterion for s > 1");
        } else {
            v.status = Status::unsolvable;
            v.reasons.push_back(tag + "c = 0: unsolvable since int kappa >= 0");
        }
        return v;
    }

    // c < 0
    if (kmax <= 0.0 && kmin == 0.0 && kmax == 0.0) {
        v.status = Status::unsolvable;
        v.reasons.push_back("c < 0, kappa = 0: the equation reads 0 = -c");
        return v;
    }
    if (kmin >= 0.0) {
        v.status = Status::unsolvable;
        v.reasons.push_back("c < 0: unsolvable since kappa >= 0 makes int kappa e^u = c volume impossible");
        return v;
    }
    if (high_order) {
        if (kmax < 0.0) {
            v.status = Status::solvable;
            v.reasons.push_back(tag + "c < 0: solvable since kappa < 0 everywhere");
        } else {
            v.status = Status::unknown;
            v.reasons.push_back(tag + "c < 0: kappa is not negative everywhere; no criterion for s > 1");
        }
        return v;
    }
    if (!(total < 0.0)) {
        v.status = Status::unsolvable;
        v.reasons.push_back(tag + "c < 0: unsolvable since int kappa >= 0");
        return v;
    }
    if (kmax <= 0.0) {
        v.status = Status::solvable;
        v.reasons.push_back(tag + "c < 0: solvable for every c < 0 since kappa <= 0 and int kappa < 0");
        return v;
    }
    v.status = Status::regime_dependent;
    v.reasons.push_back(tag + "c < 0: kappa changes sign with int kappa < 0; solvable iff c is above the threshold");
    return v;
}

SolveReport solve_newton_continuation(const KWProblem& p, const SolveOptions& opts) {
    detail::validate(p);
    const Graph& g = p.g();
    const auto n = p.kappa.size();
    const double target = detail::polish_target(opts);
    SolveReport r;
    r.method = Method::newton_continuation;
    r.verdict = screen(p);
    r.energy = std::nan("");

    const auto accept = [&](const VertexFunction& u, const std::string& how) {
        r.solution = u;
        r.trace.push_back(how);
        detail::finalize(p, r, opts);
        return r;
    };

    int its = 0;
    if (auto u = newton_solve(p, VertexFunction::Zero(n), target, opts.max_newton_iter, &its)) {
        r.iterations = its;
        return accept(*u, "direct Newton from u = 0");
    }
    r.trace.push_back("direct Newton from u = 0 failed");

    // Homotopy from the constant problem kappa = mean(kappa), solved by ln(c / mean).
    const double kbar = detail::mu_mean(g, p.kappa);
    if (p.c != 0.0 && kbar != 0.0 && p.c / kbar > 0.0) {
        KWProblem flat = p;
        flat.kappa = VertexFunction::Constant(n, kbar);
        const VertexFunction u0 = VertexFunction::Constant(n, std::log(p.c / kbar));
        if (auto u = detail::continue_linear(flat, p.kappa - flat.kappa, 0.0, u0, opts, r.trace)) {
            return accept(*u, "continuation in kappa from the constant problem");
        }
        r.trace.push_back("continuation in kappa failed");
    }

    // Continuation in c from the c = 0 solution.
    if (p.c < 0.0 && p.kappa.maxCoeff() > 0.0 && p.kappa.minCoeff() < 0.0 && integral(g, p.kappa) < 0.0) {
        try {
            SolveOptions inner = opts;
            inner.method.reset();
            const SolveReport zero = solve_zero_c(detail::with_c(p, 0.0), inner);
            if (auto u = detail::continue_in_c(p, *zero.solution, 0.0, p.c, opts, r.trace)) {
                return accept(*u, "continuation in c from the c = 0 solution");
            }
        } catch (const Error& e) {
            r.trace.push_back(std::string("c = 0 anchor failed: ") + e.what());
        }
    }

    if (auto u = detail::hybrid_solve(p, VertexFunction::Zero(n), opts)) {
        return accept(*u, "hybrid method from u = 0");
    }
    r.trace.push_back("hybrid method from u = 0 failed");
    if (auto u = detail::restart_search(p, VertexFunction::Zero(n), opts, opts.seed, r.trace)) {
        return accept(*u, "seeded restart");
    }
    throw NotSolved("Newton continuation failed", r.trace);
}

SolveReport solve(const KWProblem& p, const SolveOptions& opts) {
    detail::validate(p);
    const FeasibilityVerdict verdict = screen(p);
    if (verdict.status == Status::unsolvable && !opts.override_screen) {
        throw CertifiedUnsolvable("problem is certified unsolvable", verdict.reasons);
    }

    Method method = Method::newton_continuation;
    if (opts.method) {
        method = *opts.method;
    } else if (p.c > 0.0) {
        method = Method::variational_positive_c;
    } else if (p.c == 0.0) {
        method = Method::variational_zero_c;
    } else {
        method = p.s() > 1.0 ? Method::newton_continuation : Method::monotone_iteration;
    }
    const bool automatic = !opts.method.has_value();

    std::vector<std::string> trace;
    const auto finish = [&](SolveReport r) {
        r.verdict = verdict;
        r.trace.insert(r.trace.begin(), trace.begin(), trace.end());
        return r;
    };

    try {
        switch (method) {
            case Method::variational_positive_c:
                return finish(solve_positive_c(p, opts));
            case Method::variational_zero_c:
                return finish(solve_zero_c(p, opts));
            case Method::monotone_iteration: {
                const auto upper = construct_upper_solution(p, opts);
                if (!upper) {
                    throw NotSolved("no upper solution found");
                }
                return finish(solve_negative_c_monotone(p, *upper, opts));
            }
            case Method::newton_continuation:
                return finish(solve_newton_continuation(p, opts));
        }
    } catch (const NotSolved& e) {
        trace.push_back(to_string(method) + ": " + e.what());
        trace.insert(trace.end(), e.trace().begin(), e.trace().end());
        if (!automatic || method == Method::newton_continuation) {
            throw NotSolved("all routes failed", trace);
        }
    } catch (const InvalidProblem& e) {
        trace.push_back(to_string(method) + ": " + e.what());
        if (!automatic) {
            throw NotSolved("all routes failed", trace);
        }
    } catch (const NumericalError& e) {
        trace.push_back(to_string(method) + ": " + e.what());
        if (!automatic) {
            throw;
        }
    }
    spdlog::debug("falling back to Newton continuation");
    try {
        return finish(solve_newton_continuation(p, opts));
    } catch (const NotSolved& e) {
        trace.push_back(std::string("newton-continuation: ") + e.what());
        trace.insert(trace.end(), e.trace().begin(), e.trace().end());
        throw NotSolved("all routes failed", trace);
    }
}

}  // namespace fraclap
