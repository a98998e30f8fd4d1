// SPDX-License-Identifier: Apache-2.0

#include "fraclap/errors.hpp"
#include "fraclap/fractional.hpp"
#include "fraclap/io.hpp"
#include "fraclap/kw_solver.hpp"
#include "fraclap/properties.hpp"
#include "fraclap/spectral.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

using fraclap::io::Json;

enum Exit { kOk = 0, kUsage = 1, kUnsolvable = 2, kSearchFailure = 3, kNumerical = 4 };

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("fraclap");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("%l: %v");
    const char* env = std::getenv("FRACLAP_LOG");
    const std::string level = env ? env : "warn";
    if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else if (level == "error") {
        spdlog::set_level(spdlog::level::err);
    } else {
        spdlog::set_level(spdlog::level::warn);
    }
}

struct Common {
    std::string graph;
    std::string out;
};

void emit(const Common& c, const Json& j) {
    const std::string text = fraclap::io::dump(j);
    if (c.out.empty()) {
        std::cout << text;
    } else {
        fraclap::io::write_file(c.out, text);
    }
}

std::shared_ptr<const fraclap::SpectralDecomposition> spectrum_of(const std::string& path) {
    return std::make_shared<const fraclap::SpectralDecomposition>(fraclap::decompose(fraclap::io::load_graph(path)));
}

std::shared_ptr<const fraclap::FractionalOperator> operator_of(
    const std::shared_ptr<const fraclap::SpectralDecomposition>& sd, double s) {
    auto op = std::make_shared<const fraclap::FractionalOperator>(fraclap::build_operator(sd, s));
    for (const auto& w : op->warnings) {
        spdlog::warn("{}", w);
    }
    return op;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Fractional Laplacian and Kazdan-Warner solver on finite weighted graphs"};
    app.require_subcommand(1);

    Common common;
    double s = 0.5;
    double t = 0.0;
    double c = 0.0;
    double tol = 0.0;
    std::string input;
    std::string kappa_path;
    std::string method = "auto";
    int max_iter = 10000;
    int newton_iter = 200;
    int cap = 200;
    int jobs = 1;
    std::uint64_t seed = 0;
    bool oracle = false;
    std::vector<double> s_list;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--graph", common.graph, "graph JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", common.out, "write JSON here instead of stdout");
    };
    const auto positive = CLI::PositiveNumber;

    auto* spectrum = app.add_subcommand("spectrum", "eigenpairs of -Delta");
    add_common(spectrum);

    auto* kernel = app.add_subcommand("kernel", "kernel W_s for 0 < s < 1");
    add_common(kernel);
    kernel->add_option("--s", s, "order")->required()->check(positive);
    kernel->add_flag("--oracle", oracle, "evaluate the heat-kernel time integral instead");
    kernel->add_option("--tol", tol, "quadrature tolerance")->default_val(1e-10);

    auto* apply = app.add_subcommand("apply", "(-Delta)^s u");
    add_common(apply);
    apply->add_option("--s", s, "order")->required()->check(positive);
    apply->add_option("--input", input, "function JSON file")->required()->check(CLI::ExistingFile);

    auto* heat = app.add_subcommand("heat", "e^{t Delta} u");
    add_common(heat);
    heat->add_option("--t", t, "time")->required()->check(CLI::NonNegativeNumber);
    heat->add_option("--input", input, "function JSON file")->required()->check(CLI::ExistingFile);

    auto* poisson = app.add_subcommand("poisson", "mean-zero solution of (-Delta)^s u = f - mean(f)");
    add_common(poisson);
    poisson->add_option("--s", s, "order")->required()->check(positive);
    poisson->add_option("--input", input, "function JSON file")->required()->check(CLI::ExistingFile);

    auto* kw = app.add_subcommand("kw", "solve (-Delta)^s u = kappa e^u - c");
    add_common(kw);
    kw->add_option("--s", s, "order")->required()->check(positive);
    kw->add_option("--c", c, "constant c")->required();
    kw->add_option("--kappa", kappa_path, "kappa JSON file")->required()->check(CLI::ExistingFile);
    kw->add_option("--method", method, "auto|variational|monotone|newton")->default_val("auto");
    kw->add_option("--tol", tol, "residual tolerance")->default_val(1e-8);
    kw->add_option("--max-iter", max_iter, "monotone iteration cap")->default_val(10000);
    kw->add_option("--newton-iter", newton_iter, "Newton iteration cap")->default_val(200);
    kw->add_option("--seed", seed, "restart seed")->default_val(0);

    auto* threshold = app.add_subcommand("threshold", "bracket the critical c for c < 0");
    add_common(threshold);
    threshold->add_option("--s", s, "order")->required()->check(positive);
    threshold->add_option("--kappa", kappa_path, "kappa JSON file")->required()->check(CLI::ExistingFile);
    threshold->add_option("--tol", tol, "bracket width")->default_val(1e-4);
    threshold->add_option("--cap", cap, "probe cap")->default_val(200);
    threshold->add_option("--jobs", jobs, "accepted for compatibility; probes run sequentially")->default_val(1);
    threshold->add_option("--seed", seed, "restart seed")->default_val(0);

    auto* check = app.add_subcommand("check", "run the invariant suite");
    std::string positional_graph;
    check->add_option("graph_file", positional_graph, "graph JSON file")->check(CLI::ExistingFile);
    check->add_option("--graph", common.graph, "graph JSON file")->check(CLI::ExistingFile);
    check->add_option("--out", common.out, "write JSON here instead of stdout");
    check->add_option("--s", s_list, "orders")->delimiter(',')->default_str("0.5");
    check->add_option("--seed", seed, "seed")->default_val(7);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (spectrum->parsed()) {
            emit(common, fraclap::io::spectrum_to_json(*spectrum_of(common.graph)));
            return kOk;
        }
        if (kernel->parsed()) {
            if (!(s > 0.0 && s < 1.0)) {
                std::cerr << "kernel: --s must lie in (0, 1)\n";
                return kUsage;
            }
            const auto sd = spectrum_of(common.graph);
            const Eigen::MatrixXd w = oracle ? fraclap::kernel_w_quadrature(*sd, s, tol) : fraclap::kernel_w_spectral(*sd, s);
            emit(common, fraclap::io::matrix_to_json(w));
            return kOk;
        }
        if (apply->parsed() || poisson->parsed()) {
            const auto sd = spectrum_of(common.graph);
            const auto op = operator_of(sd, s);
            const auto u = fraclap::io::load_function(sd->g(), input);
            const auto out = apply->parsed() ? fraclap::frac_apply(*op, u) : fraclap::poisson_meanzero_solve(*op, u);
            emit(common, fraclap::io::function_to_json(sd->g(), out));
            return kOk;
        }
        if (heat->parsed()) {
            const auto sd = spectrum_of(common.graph);
            const auto u = fraclap::io::load_function(sd->g(), input);
            emit(common, fraclap::io::function_to_json(sd->g(), fraclap::heat_apply(*sd, t, u)));
            return kOk;
        }
        if (kw->parsed()) {
            const auto sd = spectrum_of(common.graph);
            const auto op = operator_of(sd, s);
            fraclap::KWProblem p{op, c, fraclap::io::load_function(sd->g(), kappa_path)};
            fraclap::SolveOptions opts;
            opts.tol = tol;
            opts.max_monotone_iter = max_iter;
            opts.max_newton_iter = newton_iter;
            opts.seed = seed;
            opts.method = fraclap::parse_method(method, c);
            try {
                emit(common, fraclap::io::report_to_json(sd->g(), fraclap::solve(p, opts)));
                return kOk;
            } catch (const fraclap::CertifiedUnsolvable& e) {
                emit(common, Json{{"status", "certificate-unsolvable"},
                                  {"solution", nullptr},
                                  {"verdict", fraclap::io::verdict_to_json(fraclap::screen(p))}});
                std::cerr << e.what() << "\n";
                return kUnsolvable;
            } catch (const fraclap::NotSolved& e) {
                emit(common, Json{{"status", "search-failure"},
                                  {"solution", nullptr},
                                  {"verdict", fraclap::io::verdict_to_json(fraclap::screen(p))},
                                  {"trace", e.trace()}});
                std::cerr << e.what() << "\n";
                return kSearchFailure;
            }
        }
        if (threshold->parsed()) {
            const auto sd = spectrum_of(common.graph);
            const auto op = operator_of(sd, s);
            const auto kappa = fraclap::io::load_function(sd->g(), kappa_path);
            fraclap::SolveOptions opts;
            opts.seed = seed;
            try {
                emit(common, fraclap::io::threshold_to_json(sd->g(), fraclap::estimate_threshold(op, kappa, tol, cap, opts)));
                return kOk;
            } catch (const fraclap::ThresholdIsMinusInfinity& e) {
                emit(common, Json{{"minus_infinity", true}, {"c_low", nullptr}, {"c_high", nullptr}, {"reason", e.what()}});
                return kOk;
            } catch (const fraclap::InvalidProblem& e) {
                emit(common, Json{{"status", "certificate-unsolvable"}, {"reason", e.what()}});
                std::cerr << e.what() << "\n";
                return kUnsolvable;
            } catch (const fraclap::NotSolved& e) {
                std::cerr << e.what() << "\n";
                return kSearchFailure;
            }
        }
        if (check->parsed()) {
            if (common.graph.empty()) {
                common.graph = positional_graph;
            }
            if (common.graph.empty()) {
                std::cerr << "check: a graph file is required\n";
                return kUsage;
            }
            if (s_list.empty()) {
                s_list = {0.5};
            }
            for (double v : s_list) {
                if (!(v > 0.0) || !std::isfinite(v)) {
                    std::cerr << "check: every --s must be positive\n";
                    return kUsage;
                }
            }
            const auto report = fraclap::run_suite(fraclap::io::load_graph(common.graph), s_list, seed);
            emit(common, fraclap::io::check_report_to_json(report));
            return report.all_pass() ? kOk : kNumerical;
        }
    } catch (const fraclap::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const fraclap::NotSolved& e) {
        std::cerr << e.what() << "\n";
        return kSearchFailure;
    } catch (const fraclap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
