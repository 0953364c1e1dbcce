#pragma once

// Worked example: a fourth-order plant with uncertain damping ratio and
// natural frequency, two interpolation designs (values only vs. values
// plus first derivatives), a random frequency search, and a Monte-Carlo
// study of recovery error under multiplicative response noise.

#include <cstdint>
#include <utility>
#include <vector>

#include "lftid/interpolation.hpp"
#include "lftid/lft_model.hpp"
#include "lftid/recovery.hpp"

namespace lftid {

struct ExamplePlantParams {
    double k = 6.0;
    double r_z = 2.0;
    double zeta_z = 0.2;
    double omega_z = 8.0;
    double r_p1 = 3.0;
    double r_p2 = 5.0;
    double zeta_p = 0.1;
    double omega_p = 5.0;

    void validate() const;
    ThetaVec theta() const;  // (zeta_p, omega_p)
};

// The LFT encoding of
//   H(s) = k (s + r_z)(s^2 + 2 zeta_z omega_z s + omega_z^2)
//        / [(s + r_p1)(s + r_p2)(s^2 + 2 zeta_p omega_p s + omega_p^2)]
// with theta = (zeta_p, omega_p) and box [0.01, 1] x [1, 10].
LftPlant build_example_plant(const ExamplePlantParams& params = {});

// H(s) evaluated from the factored rational form, for cross-checks.
std::complex<double> example_transfer(const ExamplePlantParams& params,
                                      std::complex<double> s);

struct XiDesigns {
    InterpSpec spec0;  // two complex pairs, values only
    InterpSpec spec1;  // one complex pair with first-derivative content
};

// spec1: 4x4 real block with ones coupling the two 2x2 rotation blocks at
// sigma +- j omega_deriv, direction [1 1 0 0].  spec0: block diagonal of
// rotation blocks at sigma +- j omega0_1 and sigma +- j omega0_2,
// direction [1 1 1 1].
XiDesigns build_xi_designs(double sigma, double omega_deriv,
                           double omega0_1, double omega0_2);

struct OmegaSearchResult {
    double omega1_best = 0.0;
    std::pair<double, double> omega_pair_best{0.0, 0.0};
    double metric1_best = 0.0;
    double metric0_best = 0.0;
    int failures = 0;  // candidates dropped by solver errors
};

// Draws n_samples candidate frequencies uniformly from [lo, hi] (single
// values for the derivative design, pairs for the value design), perturbs
// the exact response by one fixed multiplicative noise vector, recovers,
// and keeps the candidate minimizing
//   sqrt((zeta - zeta_hat)^2 / zeta^2 + (omega - omega_hat)^2 / omega^2).
OmegaSearchResult search_omegas(const LftPlant& plant, const ThetaVec& theta_true,
                                double sigma, double lo, double hi, int n_samples,
                                double noise_std, std::uint64_t seed,
                                const RecoveryConfig& cfg);

struct TrialRecord {
    Vec eps;  // one multiplicative perturbation per response column
    double eps_norm = 0.0;
    // Relative errors in percent; index 0 = value-only design, 1 = the
    // derivative-bearing design.
    double rel_err_zeta0 = 0.0;
    double rel_err_zeta1 = 0.0;
    double rel_err_omega0 = 0.0;
    double rel_err_omega1 = 0.0;
    double r_zeta = 0.0;   // rel_err_zeta1 / rel_err_zeta0
    double r_omega = 0.0;  // rel_err_omega1 / rel_err_omega0
    bool r_zeta_defined = false;
    bool r_omega_defined = false;
    bool converged0 = false;
    bool converged1 = false;
};

// n_trials independent noise draws, each applied to both designs' exact
// responses column by column as gamma_k (1 + eps_k); both recoveries use
// cfg.  Non-converged trials are kept and flagged.
std::vector<TrialRecord> run_monte_carlo(const LftPlant& plant,
                                         const InterpSpec& spec0,
                                         const InterpSpec& spec1,
                                         const ThetaVec& theta_true,
                                         const RecoveryConfig& cfg, int n_trials,
                                         double noise_std, std::uint64_t seed);

struct BinTable {
    std::vector<double> edges;  // ascending, bins are [edges[i], edges[i+1])
    std::vector<int> total;
    std::vector<int> zeta_wins;   // r_zeta < 1
    std::vector<int> omega_wins;  // r_omega < 1
    int overflow_total = 0;
    int overflow_zeta_wins = 0;
    int overflow_omega_wins = 0;
    int sum_total = 0;  // across bins, excluding overflow
    int sum_zeta_wins = 0;
    int sum_omega_wins = 0;
    int undefined_ratios = 0;
};

// Counts records per ||eps|| bin; records outside all bins land in the
// overflow column.  Undefined ratios count toward totals only.
BinTable bin_table(const std::vector<TrialRecord>& records,
                   const std::vector<double>& edges);

// The bin edges used in the reference study.
std::vector<double> default_bin_edges();

}  // namespace lftid
