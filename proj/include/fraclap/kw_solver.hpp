// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fraclap/fractional.hpp"
#include "fraclap/graph.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fraclap {

/// (-Delta)^s u = kappa e^u - c.
struct KWProblem {
    std::shared_ptr<const FractionalOperator> op;
    double c = 0.0;
    VertexFunction kappa;

    const Graph& g() const { return op->g(); }
    double s() const { return op->s; }
};

enum class Status { solvable, unsolvable, regime_dependent, unknown };

struct FeasibilityVerdict {
    Status status = Status::unknown;
    std::vector<std::string> reasons;
};

enum class Method { variational_positive_c, variational_zero_c, monotone_iteration, newton_continuation };

std::string to_string(Status s);
std::string to_string(Method m);
/// Accepts the names produced by to_string plus the short CLI aliases
/// "variational", "monotone" and "newton".
std::optional<Method> parse_method(const std::string& name, double c);

struct SolveOptions {
    double tol = 1e-8;
    double step_tol = 1e-10;
    int max_monotone_iter = 10000;
    int max_newton_iter = 200;
    std::uint64_t seed = 0;
    int restarts = 32;
    /// Forces a route instead of dispatching on the sign of c.
    std::optional<Method> method;
    /// Solve even when the sign analysis certifies unsolvability.
    bool override_screen = false;
    /// Rebuild the monotone weight phi = kappa_1 e^{u_i} from the latest
    /// iterate instead of freezing it at the upper solution.
    bool refresh_weight = true;
    /// Keep every monotone iterate in SolveReport::iterates.
    bool record_iterates = false;
};

struct SolveReport {
    std::optional<VertexFunction> solution;
    double residual_inf = 0.0;
    Method method = Method::newton_continuation;
    int iterations = 0;
    /// J1 at the solution (c > 0) or inf J2 (c = 0); NaN otherwise.
    double energy = 0.0;
    FeasibilityVerdict verdict;
    /// Euler-Lagrange multiplier of the c = 0 minimisation.
    std::optional<double> multiplier;
    std::vector<std::string> trace;
    /// Lower solution used by the monotone iteration, when it ran.
    std::optional<VertexFunction> lower_solution;
    std::vector<VertexFunction> iterates;
};

struct ResidualReport {
    double residual_inf = 0.0;
    /// min and max of (-Delta)^s u - kappa e^u + c.
    double slack_min = 0.0;
    double slack_max = 0.0;
    /// |int kappa e^u dmu - c volume|.
    double integral_defect = 0.0;
    /// residual_inf over sup|(-Delta)^s u| + sup|kappa e^u| + |c|; 0 when all three vanish.
    double relative_residual = 0.0;
};

struct AuditPoint {
    double c = 0.0;
    bool expected_solvable = false;
    bool solved = false;
    double residual_inf = 0.0;
};

struct ThresholdEstimate {
    double c_low = 0.0;
    double c_high = 0.0;
    double width = 0.0;
    bool converged = false;
    int probes = 0;
    std::optional<VertexFunction> attained_solution_at_threshold;
    double residual_at_high = 0.0;
    std::vector<AuditPoint> audit;
    std::vector<std::string> trace;
};

FeasibilityVerdict screen(const KWProblem& p);

SolveReport solve(const KWProblem& p, const SolveOptions& opts = {});
SolveReport solve_positive_c(const KWProblem& p, const SolveOptions& opts = {});
SolveReport solve_zero_c(const KWProblem& p, const SolveOptions& opts = {});
SolveReport solve_negative_c_monotone(const KWProblem& p, const VertexFunction& u_plus,
                                      const SolveOptions& opts = {});
/// Damped Newton on the full equation, then natural-parameter continuation
/// when the direct attempt fails.
SolveReport solve_newton_continuation(const KWProblem& p, const SolveOptions& opts = {});

/// ((-Delta)^s + diag(phi)) u = f with phi > 0.
VertexFunction resolvent_solve(const FractionalOperator& op, const VertexFunction& phi, const VertexFunction& f);

/// Mean-zero u with (-Delta)^s u = f - mean(f).
VertexFunction poisson_meanzero_solve(const FractionalOperator& op, const VertexFunction& f);

/// phi0 with ((-Delta)^s - c) phi0 = -kappa, c < 0.
VertexFunction auxiliary_phi0(const KWProblem& p);

/// A function with (-Delta)^s u - kappa e^u + c >= 0, or nothing.
std::optional<VertexFunction> construct_upper_solution(const KWProblem& p, const SolveOptions& opts = {});

/// Damped Newton from `start`; nothing when it fails to reach `target`.
std::optional<VertexFunction> newton_solve(const KWProblem& p, const VertexFunction& start, double target,
                                           int max_iter, int* iterations = nullptr);

ResidualReport check_solution(const KWProblem& p, const VertexFunction& u);

ThresholdEstimate estimate_threshold(std::shared_ptr<const FractionalOperator> op, const VertexFunction& kappa,
                                     double tol, int cap, const SolveOptions& opts = {});

}  // namespace fraclap
