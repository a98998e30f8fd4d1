// SPDX-License-Identifier: Apache-2.0

#include "fraclap/properties.hpp"

#include "fraclap/errors.hpp"
#include "fraclap/kw_solver.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace fraclap {

double poincare_constant(const SpectralDecomposition& sd, double s) {
    if (!(s > 0.0)) {
        throw InvalidExponent("poincare_constant needs s > 0");
    }
    if (sd.size() < 2) {
        throw ValidationError("poincare_constant needs at least two vertices");
    }
    return 1.0 / sd.lambda_powers(s)[1];
}

namespace {

// Eigenpairs of U^{-1/2} (U L_s) U^{-1/2}; columns mapped back to vertex functions.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> energy_modes(const FractionalOperator& op) {
    const Eigen::VectorXd inv_sqrt = op.g().measure().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd a = op.g().measure().asDiagonal() * op.op_matrix;
    const Eigen::MatrixXd sym = inv_sqrt.asDiagonal() * (0.5 * (a + a.transpose())) * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("energy eigenproblem did not converge");
    }
    return solver;
}

}  // namespace

double poincare_constant(const FractionalOperator& op) {
    if (op.size() < 2) {
        throw ValidationError("poincare_constant needs at least two vertices");
    }
    return 1.0 / energy_modes(op).eigenvalues()[1];
}

double trudinger_moser_bound(const SpectralDecomposition& sd, double s, double alpha) {
    const Graph& g = sd.g();
    if (alpha <= 0.0) {
        return g.volume();
    }
    return std::exp(alpha * poincare_constant(sd, s) / g.min_measure()) * g.volume();
}

double trudinger_moser_bound(const FractionalOperator& op, double alpha) {
    const Graph& g = op.g();
    if (alpha <= 0.0) {
        return g.volume();
    }
    return std::exp(alpha * poincare_constant(op) / g.min_measure()) * g.volume();
}

namespace {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    VertexFunction normal(Eigen::Index n) {
        VertexFunction u(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            u[i] = dist_(rng_);
        }
        return u;
    }

    VertexFunction mean_zero(const Graph& g) {
        VertexFunction u = normal(static_cast<Eigen::Index>(g.size()));
        u.array() -= integral(g, u) / g.volume();
        return u;
    }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace

RayleighSample sample_rayleigh(const FractionalOperator& op, int draws, std::uint64_t seed) {
    const Graph& g = op.g();
    Sampler sampler(seed);
    RayleighSample out;
    out.draws = draws;
    for (int k = 0; k < draws; ++k) {
        const VertexFunction u = sampler.mean_zero(g);
        out.max_ratio = std::max(out.max_ratio, integral(g, u.cwiseProduct(u)) / dirichlet_energy(op, u));
    }
    const auto modes = energy_modes(op);
    const VertexFunction extremal =
        op.g().measure().cwiseSqrt().cwiseInverse().cwiseProduct(modes.eigenvectors().col(1));
    out.at_extremal = integral(g, extremal.cwiseProduct(extremal)) / dirichlet_energy(op, extremal);
    return out;
}

TrudingerMoserSample sample_trudinger_moser(const FractionalOperator& op, double alpha, int draws,
                                            std::uint64_t seed) {
    const Graph& g = op.g();
    Sampler sampler(seed);
    TrudingerMoserSample out;
    out.bound = trudinger_moser_bound(op, alpha);
    out.draws = draws;
    for (int k = 0; k < draws; ++k) {
        VertexFunction u = sampler.mean_zero(g);
        u /= std::sqrt(dirichlet_energy(op, u));
        const double value = integral(g, (alpha * u.array().square()).exp().matrix());
        out.max_integral = std::max(out.max_integral, value);
        if (value > out.bound) {
            ++out.violations;
        }
    }
    return out;
}

bool CheckReport::all_pass() const {
    for (const auto& e : entries) {
        if (!e.pass) {
            return false;
        }
    }
    return true;
}

namespace {

std::string fmt_s(double s) {
    std::ostringstream os;
    os << s;
    return os.str();
}

CheckEntry make_entry(std::string name, double measured, double tolerance, std::string citation,
                      std::string witness = {}) {
    CheckEntry e;
    e.name = std::move(name);
    e.measured = measured;
    e.tolerance = tolerance;
    e.pass = measured <= tolerance;
    e.citation = std::move(citation);
    if (!e.pass) {
        e.witness = std::move(witness);
    }
    return e;
}

std::string vec_witness(const VertexFunction& u) {
    std::ostringstream os;
    os.precision(17);
    os << "u=(";
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        os << (i ? "," : "") << u[i];
    }
    os << ")";
    return os.str();
}

}  // namespace

CheckEntry check_kernel_positivity_symmetry(const Eigen::MatrixXd& w, double s) {
    double worst = 0.0;
    std::string witness;
    for (Eigen::Index x = 0; x < w.rows(); ++x) {
        for (Eigen::Index y = 0; y < w.cols(); ++y) {
            if (x == y) {
                continue;
            }
            const double asym = std::abs(w(x, y) - w(y, x));
            const double neg = w(x, y) > 0.0 ? 0.0 : (std::abs(w(x, y)) + 1.0);
            const double bad = std::max(asym, neg);
            if (bad > worst) {
                worst = bad;
                witness = "pair (" + std::to_string(x) + "," + std::to_string(y) + "): W=" + std::to_string(w(x, y)) +
                          ", W^T=" + std::to_string(w(y, x));
            }
        }
    }
    CheckEntry e = make_entry("fractional.kernel_positive_symmetric[s=" + fmt_s(s) + "]", worst, 1e-12,
                              "kernel W_s is positive and symmetric off the diagonal", witness);
    return e;
}

namespace {

void spectral_checks(const std::shared_ptr<const SpectralDecomposition>& sd, Sampler& sampler, CheckReport& rep) {
    const Graph& g = sd->g();
    const auto n = static_cast<Eigen::Index>(g.size());
    const Eigen::MatrixXd lap = g.laplacian_matrix();
    const Eigen::VectorXd& mu = g.measure();

    double resid = 0.0;
    std::string w;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = (lap * sd->phis.col(i) - sd->lambdas[i] * sd->phis.col(i)).lpNorm<Eigen::Infinity>() /
                         (1.0 + sd->lambdas[i]);
        if (r > resid) {
            resid = r;
            w = "mode " + std::to_string(i);
        }
    }
    rep.add(make_entry("spectral.eigen_residual", resid, 1e-8, "L phi_i = lambda_i phi_i", w));

    const double ortho =
        (sd->phis.transpose() * mu.asDiagonal() * sd->phis - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    rep.add(make_entry("spectral.mu_orthonormality", ortho, 1e-10, "eigenfunctions are mu-orthonormal"));

    const double first =
        (sd->phis.col(0).array() - 1.0 / std::sqrt(g.volume())).abs().maxCoeff() + std::abs(sd->lambdas[0]);
    rep.add(make_entry("spectral.ground_state", first, 1e-10, "lambda_1 = 0 with constant eigenfunction"));
    rep.add(make_entry("spectral.spectral_gap_positive", n > 1 && sd->lambdas[1] > 0.0 ? 0.0 : 1.0, 0.0,
                       "connected graph has lambda_2 > 0"));

    double mass = 0.0;
    double sym = 0.0;
    for (double t : {0.01, 0.1, 1.0, 10.0}) {
        const Eigen::MatrixXd p = heat_kernel(*sd, t);
        mass = std::max(mass, ((p * mu).array() - 1.0).abs().maxCoeff());
        sym = std::max(sym, (p - p.transpose()).cwiseAbs().maxCoeff());
    }
    rep.add(make_entry("heat.stochastic_completeness", mass, 1e-9, "sum_y p(t,x,y) mu(y) = 1"));
    rep.add(make_entry("heat.symmetry", sym, 0.0, "p(t,x,y) = p(t,y,x)"));

    double semi = 0.0;
    for (int k = 0; k < 10; ++k) {
        const VertexFunction u = sampler.normal(n);
        const double d = (heat_apply(*sd, 0.3, heat_apply(*sd, 0.7, u)) - heat_apply(*sd, 1.0, u))
                             .lpNorm<Eigen::Infinity>() /
                         (1.0 + u.lpNorm<Eigen::Infinity>());
        semi = std::max(semi, d);
    }
    rep.add(make_entry("heat.semigroup", semi, 1e-9, "e^{t1 Delta} e^{t2 Delta} = e^{(t1+t2) Delta}"));

    double div_thm = 0.0;
    double green = 0.0;
    double divgrad = 0.0;
    double anti = 0.0;
    for (int k = 0; k < 100; ++k) {
        const VertexFunction u = sampler.normal(n);
        const VertexFunction v = sampler.normal(n);
        const VertexFunction lu = laplacian_apply(g, u);
        div_thm = std::max(div_thm, std::abs(integral(g, lu)) / (u.lpNorm<Eigen::Infinity>() * g.volume()));
        const double lhs = integral(g, v.cwiseProduct(lu));
        const double rhs = integral(g, pointwise_inner(g, gradient_field(g, u), gradient_field(g, v)));
        green = std::max(green, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
        divgrad = std::max(divgrad, (divergence(g, gradient_field(g, u)) + lu).lpNorm<Eigen::Infinity>());
        const PairwiseField f = gradient_field(g, u);
        for (Eigen::Index x = 0; x < n; ++x) {
            for (auto yy : g.neighbors()[static_cast<std::size_t>(x)]) {
                const auto y = static_cast<Eigen::Index>(yy);
                anti = std::max(anti, std::abs(std::sqrt(mu[x]) * f.entries(x, y) + std::sqrt(mu[y]) * f.entries(y, x)));
            }
        }
    }
    rep.add(make_entry("graph.laplacian_integrates_to_zero", div_thm, 1e-10, "int Delta u dmu = 0"));
    rep.add(make_entry("graph.green_identity", green, 1e-10, "int v (-Delta u) dmu = int grad u . grad v dmu"));
    rep.add(make_entry("graph.div_grad", divgrad, 1e-10, "div grad u = Delta u"));
    rep.add(make_entry("graph.gradient_antisymmetry", anti, 1e-12,
                       "sqrt(mu(x)) grad u(x,y) = -sqrt(mu(y)) grad u(y,x)"));
}

void operator_checks(const FractionalOperator& op, Sampler& sampler, CheckReport& rep) {
    const Graph& g = op.g();
    const auto& sd = *op.spectral;
    const auto n = static_cast<Eigen::Index>(g.size());
    const Eigen::VectorXd& mu = g.measure();
    const std::string tag = "[s=" + fmt_s(op.s) + "]";
    const double op_norm = std::max(1.0, matrix_inf_norm(op.op_matrix));
    const bool odd = op.m % 2 == 1 && !op.integer_order;

    if (op.kernel_w.size() > 0) {
        CheckEntry e = check_kernel_positivity_symmetry(op.kernel_w, op.sigma);
        e.name = "fractional.kernel_positive_symmetric" + tag;
        rep.add(e);
    }
    rep.add(make_entry("fractional.constants_in_kernel" + tag,
                       (op.op_matrix * VertexFunction::Ones(n)).lpNorm<Eigen::Infinity>(), 1e-9 * op_norm,
                       "(-Delta)^s annihilates constants"));
    const Eigen::MatrixXd a = mu.asDiagonal() * op.op_matrix;
    rep.add(make_entry("fractional.mu_self_adjoint" + tag, (a - a.transpose()).cwiseAbs().maxCoeff(),
                       1e-9 * std::max(1.0, a.cwiseAbs().maxCoeff()), "mu(x) L_s(x,y) = mu(y) L_s(y,x)"));

    if (odd) {
        CheckEntry e;
        e.name = "fractional.odd_order_spectral_gap" + tag;
        e.pass = true;
        e.measured = op.spectral_gap;
        e.tolerance = std::numeric_limits<double>::infinity();
        e.citation = "odd-m composition vs Phi Lambda^s Phi^{-1} (reported, not asserted)";
        rep.add(e);
    } else {
        rep.add(make_entry("fractional.spectral_form" + tag, op.spectral_gap,
                           1e-8 * std::max(1.0, matrix_inf_norm(op.spectral_power)),
                           "L_s = Phi Lambda^s Phi^{-1}"));
        const Eigen::VectorXd pw = sd.lambda_powers(op.s);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            worst = std::max(worst, (frac_apply(op, sd.phis.col(i)) - pw[i] * sd.phis.col(i)).lpNorm<Eigen::Infinity>() /
                                        (1.0 + pw[i]));
        }
        rep.add(make_entry("fractional.eigen_relation" + tag, worst, 1e-8, "(-Delta)^s phi_i = lambda_i^s phi_i"));
    }

    double ibp = 0.0;
    double symmetric = 0.0;
    std::string ibp_witness;
    for (int k = 0; k < 100; ++k) {
        const VertexFunction u = sampler.normal(n);
        const VertexFunction v = sampler.normal(n);
        const double vlu = integral(g, v.cwiseProduct(frac_apply(op, u)));
        const double ulv = integral(g, u.cwiseProduct(frac_apply(op, v)));
        const double grad = integral(g, pointwise_inner(g, frac_gradient(op, u), frac_gradient(op, v)));
        const double scale = std::sqrt(dirichlet_energy(op, u) * dirichlet_energy(op, v));
        const double d = std::abs(vlu - grad) / scale;
        if (d > ibp) {
            ibp = d;
            ibp_witness = vec_witness(u);
        }
        symmetric = std::max(symmetric, std::abs(vlu - ulv) / scale);
    }
    rep.add(make_entry("fractional.integration_by_parts" + tag, std::max(ibp, symmetric), op.s > 1.0 ? 1e-8 : 1e-9,
                       op.s > 1.0 ? "int phi (-Delta)^s u = int grad^s phi . grad^s u (high order)"
                                  : "int v (-Delta)^s u = int grad^s u . grad^s v = int u (-Delta)^s v",
                       ibp_witness));

    double min_ratio = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100; ++k) {
        const VertexFunction u = sampler.mean_zero(g);
        min_ratio = std::min(min_ratio, dirichlet_energy(op, u) / integral(g, u.cwiseProduct(u)));
    }
    const double const_energy = std::abs(dirichlet_energy(op, VertexFunction::Constant(n, 3.7)));
    rep.add(make_entry("fractional.energy_positive_nonconstant" + tag, min_ratio > 0.0 ? 0.0 : 1.0, 0.0,
                       "energy > 0 for nonconstant u", "min ratio " + std::to_string(min_ratio)));
    rep.add(make_entry("fractional.energy_zero_on_constants" + tag, const_energy, 1e-9 * op_norm * 3.7 * 3.7 * g.volume(),
                       "energy = 0 iff u is constant"));

    if (op.s <= 1.0) {
        int failures = 0;
        std::string witness;
        for (int k = 0; k < 1000; ++k) {
            const VertexFunction u = sampler.normal(n);
            Eigen::Index x0 = 0;
            u.maxCoeff(&x0);
            if (!(frac_apply(op, u)[x0] > 0.0)) {
                ++failures;
                witness = vec_witness(u);
            }
        }
        rep.add(make_entry("fractional.maximum_principle" + tag, failures, 0.0,
                           "(-Delta)^s u > 0 at the maximum of a nonconstant u", witness));
    }

    if (op.s < 1.0) {
        double defect = 0.0;
        for (int k = 0; k < 100; ++k) {
            const VertexFunction u = sampler.normal(n);
            const VertexFunction v = sampler.normal(n);
            const VertexFunction lhs = frac_apply(op, u.cwiseProduct(v));
            const VertexFunction rhs = u.cwiseProduct(frac_apply(op, v)) + v.cwiseProduct(frac_apply(op, u)) -
                                       2.0 * pointwise_inner(g, frac_gradient(op, u), frac_gradient(op, v));
            defect = std::max(defect, (lhs - rhs).lpNorm<Eigen::Infinity>() / (1.0 + lhs.lpNorm<Eigen::Infinity>()));
        }
        rep.add(make_entry("fractional.product_rule" + tag, defect, 1e-9,
                           "(-Delta)^s(uv) = u(-Delta)^s v + v(-Delta)^s u - 2 grad^s u . grad^s v"));
    }

    if (op.m >= 2 && op.m % 2 == 0 && !op.integer_order) {
        rep.add(make_entry("fractional.even_order_collapse" + tag, op.spectral_gap,
                           1e-8 * std::max(1.0, matrix_inf_norm(op.spectral_power)),
                           "even m composition equals Phi Lambda^s Phi^{-1}"));
    }
    if (odd) {
        double gap = 0.0;
        for (int k = 0; k < 20; ++k) {
            const VertexFunction u = sampler.normal(n);
            const VertexFunction a1 = frac_apply(op, u);
            gap = std::max(gap, (a1 - composed_apply(op, u)).lpNorm<Eigen::Infinity>() /
                                    (1.0 + a1.lpNorm<Eigen::Infinity>()));
        }
        rep.add(make_entry("fractional.composition_matches_matrix" + tag, gap, 1e-9,
                           "-Delta^k div (-Delta)^sigma grad Delta^k assembled vs applied factor by factor"));
    }

    const double cp = poincare_constant(op);
    const RayleighSample ray = sample_rayleigh(op, 10000, 17);
    rep.add(make_entry("embedding.poincare_sampled_max" + tag, ray.max_ratio - cp * (1.0 + 1e-9), 0.0,
                       "int u^2 <= C int |grad^s u|^2 for mean-zero u"));
    rep.add(make_entry("embedding.poincare_sharp" + tag, std::abs(ray.at_extremal - cp) / cp, 1e-9,
                       "equality at the first nonconstant mode"));
    if (!odd && !op.integer_order) {
        rep.add(make_entry("embedding.poincare_spectral" + tag, std::abs(cp - poincare_constant(sd, op.s)) / cp, 1e-9,
                           "sharp constant is 1 / lambda_2^s"));
    }
    const TrudingerMoserSample tm = sample_trudinger_moser(op, 1.0, 10000, 29);
    rep.add(make_entry("embedding.trudinger_moser" + tag, tm.violations, 0.0,
                       "int e^{alpha u^2} dmu <= e^{alpha C / mu_min} volume on the unit energy ball"));
    const double c1 = std::sqrt(1.0 + 1.0 / cp);
    rep.add(make_entry("embedding.norm_equivalence" + tag, c1 > 0.0 ? 0.0 : 1.0, 0.0,
                       "c1 ||u||_2 <= ||u||_{W^{s,2}} with c1 > 0 (finite dimension)",
                       "c1=" + std::to_string(c1)));
}

void kw_checks(const std::shared_ptr<const FractionalOperator>& op, Sampler& sampler, CheckReport& rep) {
    const Graph& g = op->g();
    const auto n = static_cast<Eigen::Index>(g.size());
    const std::string tag = "[s=" + fmt_s(op->s) + "]";

    if (op->s <= 1.0) {
        double order = 0.0;
        for (int k = 0; k < 100; ++k) {
            const VertexFunction phi = sampler.normal(n).cwiseAbs().array() + 0.1;
            const VertexFunction f = sampler.normal(n);
            const VertexFunction h = f + sampler.normal(n).cwiseAbs();
            const VertexFunction uf = resolvent_solve(*op, phi, f);
            const VertexFunction uh = resolvent_solve(*op, phi, h);
            order = std::max(order, (uf - uh).maxCoeff());
        }
        rep.add(make_entry("kw.resolvent_order" + tag, order, 1e-10, "f <= g implies L_{s,phi}^{-1} f <= L_{s,phi}^{-1} g"));

        double comparison = -std::numeric_limits<double>::infinity();
        double defect = 0.0;
        double sandwich = 0.0;
        int unsolved = 0;
        for (int k = 0; k < 5; ++k) {
            const VertexFunction kappa = -(sampler.normal(n).cwiseAbs().array() + 0.1);
            KWProblem p{op, -1.0, kappa};
            SolveOptions opts;
            opts.record_iterates = true;
            try {
                const SolveReport r = solve(p, opts);
                const VertexFunction& u = *r.solution;
                const VertexFunction phi0 = auxiliary_phi0(p);
                comparison = std::max(comparison, ((-u).array().exp().matrix() - phi0).maxCoeff());
                defect = std::max(defect, check_solution(p, u).integral_defect / (1.0 + g.volume()));
                for (std::size_t i = 1; i < r.iterates.size(); ++i) {
                    sandwich = std::max(sandwich, (r.iterates[i] - r.iterates[i - 1]).maxCoeff());
                    sandwich = std::max(sandwich, (*r.lower_solution - r.iterates[i]).maxCoeff());
                }
            } catch (const Error&) {
                ++unsolved;
            }
        }
        rep.add(make_entry("kw.comparison_phi0" + tag, std::max(comparison, 0.0), 1e-8,
                           "phi0 >= e^{-u_c} for solutions at c < 0"));
        rep.add(make_entry("kw.monotone_sandwich" + tag, std::max(sandwich, 0.0), 1e-10,
                           "lower <= u_{i+1} <= u_i <= upper"));
        rep.add(make_entry("kw.integrated_identity" + tag, defect, 1e-7,
                           "int kappa e^u dmu = c volume for every solution"));
        rep.add(make_entry("kw.negative_kappa_solved" + tag, unsolved, 0.0,
                           "kappa <= 0, int kappa < 0: solvable for every c < 0"));
    }

    double manufactured = 0.0;
    int failures = 0;
    for (int k = 0; k < 5; ++k) {
        const VertexFunction ustar = 0.5 * sampler.normal(n);
        const double c = op->s > 1.0 ? -1.0 : (k % 3 == 0 ? 1.0 : (k % 3 == 1 ? -1.0 : 0.0));
        VertexFunction kappa = (-ustar).array().exp().matrix().cwiseProduct(
            frac_apply(*op, ustar) + VertexFunction::Constant(n, c));
        KWProblem p{op, c, kappa};
        try {
            const SolveReport r = solve(p);
            manufactured = std::max(manufactured, r.residual_inf);
        } catch (const Error&) {
            ++failures;
        }
    }
    rep.add(make_entry("kw.manufactured_recovery" + tag, failures == 0 ? manufactured : 1.0, 1e-8,
                       "kappa := e^{-u*}((-Delta)^s u* + c) is solved to residual 1e-8"));
}

}  // namespace

CheckReport run_suite(std::shared_ptr<const Graph> g, const std::vector<double>& s_list, std::uint64_t seed) {
    CheckReport rep;
    Sampler sampler(seed);
    auto sd = std::make_shared<const SpectralDecomposition>(decompose(g));
    spectral_checks(sd, sampler, rep);

    std::vector<std::shared_ptr<const FractionalOperator>> ops;
    for (double s : s_list) {
        ops.push_back(std::make_shared<const FractionalOperator>(build_operator(sd, s)));
        operator_checks(*ops.back(), sampler, rep);
        kw_checks(ops.back(), sampler, rep);
    }

    double semigroup = 0.0;
    bool any_pair = false;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        for (std::size_t j = i; j < ops.size(); ++j) {
            const double s = ops[i]->s + ops[j]->s;
            if (ops[i]->s < 1.0 && ops[j]->s < 1.0 && s <= 1.0) {
                any_pair = true;
                const FractionalOperator sum = build_operator(sd, s);
                semigroup = std::max(semigroup, matrix_inf_norm(ops[i]->op_matrix * ops[j]->op_matrix - sum.op_matrix) /
                                                    std::max(1.0, matrix_inf_norm(sum.op_matrix)));
            }
        }
    }
    if (any_pair) {
        rep.add(make_entry("fractional.semigroup_in_s", semigroup, 1e-8, "L_{s1} L_{s2} = L_{s1+s2}"));
    }

    const LimitReport up = limit_residuals(*sd, {0.9, 0.99, 0.999, 0.9999});
    const LimitReport down = limit_residuals(*sd, {0.1, 0.01, 0.001, 0.0001});
    rep.add(make_entry("fractional.limit_s_to_one", up.monotone_toward_one ? 0.0 : 1.0, 0.0,
                       "(-Delta)^s -> -Delta as s -> 1", "||L_s - L|| = " + std::to_string(up.rows.back().to_laplacian)));
    rep.add(make_entry("fractional.limit_s_to_zero", down.monotone_toward_zero ? 0.0 : 1.0, 0.0,
                       "(-Delta)^s u -> u for mean-zero u as s -> 0",
                       "||L_s u - u|| = " + std::to_string(down.rows.back().mean_zero_residual)));
    return rep;
}

}  // namespace fraclap
