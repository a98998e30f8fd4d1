// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fraclap/kw_solver.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace fraclap::detail {

/// Symmetrised U L_s: the matrix of the energy form u -> int u (-Delta)^s u dmu.
Eigen::MatrixXd energy_matrix(const FractionalOperator& op);

/// (-Delta)^s u - kappa e^u + c.
VertexFunction equation_residual(const KWProblem& p, const VertexFunction& u);

/// sup of the residual over the sum of the sups of the three terms of the equation.
double relative_residual(const KWProblem& p, const VertexFunction& u, double residual_inf);

double mu_mean(const Graph& g, const VertexFunction& u);

void validate(const KWProblem& p);

/// Residual level a Newton polish aims for.
double polish_target(const SolveOptions& opts);

/// Continuation along kappa(tau) = p0.kappa + tau dkappa, c(tau) = p0.c + tau dc
/// from a solution at tau = 0 to tau = 1, with tangent predictor and adaptive step.
std::optional<VertexFunction> continue_linear(const KWProblem& p0, const VertexFunction& dkappa, double dc,
                                              const VertexFunction& u_from, const SolveOptions& opts,
                                              std::vector<std::string>& trace);

/// Natural-parameter continuation in c from a solution at c_from to c_to,
/// with tangent predictor and adaptive step.
std::optional<VertexFunction> continue_in_c(const KWProblem& p, const VertexFunction& u_from, double c_from,
                                            double c_to, const SolveOptions& opts, std::vector<std::string>& trace);

/// Powell hybrid (dogleg) solve of the full equation from `start`, polished by Newton.
std::optional<VertexFunction> hybrid_solve(const KWProblem& p, const VertexFunction& start, const SolveOptions& opts);

/// Seeded restarts around `center`: start k perturbs by N(0, r_k^2) noise with
/// r_k cycling through 0.1, 0.3, 1, 3, and tries Newton, then the hybrid method.
std::optional<VertexFunction> restart_search(const KWProblem& p, const VertexFunction& center,
                                             const SolveOptions& opts, std::uint64_t seed,
                                             std::vector<std::string>& trace);

KWProblem with_c(const KWProblem& p, double c);

/// Final acceptance check shared by every route; throws NotSolved if the
/// residual or the relative residual exceeds opts.tol.
void finalize(const KWProblem& p, SolveReport& r, const SolveOptions& opts);

}  // namespace fraclap::detail
