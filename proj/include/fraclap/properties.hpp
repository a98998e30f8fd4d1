// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fraclap/fractional.hpp"
#include "fraclap/spectral.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace fraclap {

/// Sharp Poincare constant 1 / lambda_2^s.
double poincare_constant(const SpectralDecomposition& sd, double s);

/// Sharp constant for the energy form of `op`: 1 / (smallest nonzero
/// generalised eigenvalue of U L_s against U). Equals the spectral value
/// whenever op is the spectral power.
double poincare_constant(const FractionalOperator& op);

/// e^{alpha C / mu_min} volume, or volume when alpha <= 0.
double trudinger_moser_bound(const SpectralDecomposition& sd, double s, double alpha);
double trudinger_moser_bound(const FractionalOperator& op, double alpha);

struct RayleighSample {
    /// max over draws of int u^2 / int |grad^s u|^2, u mean-zero.
    double max_ratio = 0.0;
    /// The same ratio at u = phi_2 (or the extremal mode of the energy form).
    double at_extremal = 0.0;
    int draws = 0;
};

RayleighSample sample_rayleigh(const FractionalOperator& op, int draws, std::uint64_t seed);

struct TrudingerMoserSample {
    double bound = 0.0;
    double max_integral = 0.0;
    int violations = 0;
    int draws = 0;
};

/// Draws mean-zero u normalised to unit energy and evaluates int e^{alpha u^2} dmu.
TrudingerMoserSample sample_trudinger_moser(const FractionalOperator& op, double alpha, int draws,
                                            std::uint64_t seed);

struct CheckEntry {
    std::string name;
    bool pass = true;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string citation;
    std::string witness;
};

struct CheckReport {
    std::vector<CheckEntry> entries;

    bool all_pass() const;
    void add(CheckEntry e) { entries.push_back(std::move(e)); }
};

/// Off-diagonal positivity and symmetry of a kernel matrix.
CheckEntry check_kernel_positivity_symmetry(const Eigen::MatrixXd& w, double s);

/// Runs the invariant suite on g for each order in s_list.
CheckReport run_suite(std::shared_ptr<const Graph> g, const std::vector<double>& s_list, std::uint64_t seed);

}  // namespace fraclap
