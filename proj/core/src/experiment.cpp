#include "lftid/experiment.hpp"

#include <cmath>
#include <limits>

#include "lftid/rng.hpp"

namespace lftid {

void ExamplePlantParams::validate() const {
    if (!(r_p1 > 0.0) || !(r_p2 > 0.0) || !(zeta_p * omega_p > 0.0))
        throw DimensionMismatch("ExamplePlantParams: denominator must be stable");
}

ThetaVec ExamplePlantParams::theta() const {
    ThetaVec t(2);
    t << zeta_p, omega_p;
    return t;
}

LftPlant build_example_plant(const ExamplePlantParams& params) {
    params.validate();
    LftPlant pl;
    pl.a_xx.resize(4, 4);
    pl.a_xx << -params.r_p1, params.r_p1 - params.r_z, 0, 0,
                0, -params.r_p2, 0, 0,
                0, 0, 0, 1,
               -1, 1, 0, 0;
    pl.b_xu.resize(4, 1);
    pl.b_xu << 0, params.k, 0, 0;
    pl.b_xv.resize(4, 2);
    pl.b_xv << 0, 0, 0, 0, 0, 0, 1, 0;
    pl.c_yx.resize(1, 4);
    pl.c_yx << -1, 1, params.omega_z * params.omega_z,
               2 * params.zeta_z * params.omega_z;
    pl.c_zx.resize(3, 4);
    pl.c_zx << 0, 0, 0, -2,
               0, 0, 0, 0,
               0, 0, -1, 0;
    pl.d_zu = Mat::Zero(3, 1);
    pl.d_zv.resize(3, 2);
    pl.d_zv << 0, 0, 0, 1, 0, 0;
    pl.d_yu = Mat::Zero(1, 1);
    pl.d_yv.resize(1, 2);
    pl.d_yv << 1, 0;
    pl.p0 = Mat::Zero(2, 3);
    Mat p1(2, 3), p2(2, 3);
    p1 << 0, 0, 0, 1, 0, 0;
    p2 << 0, 1, 0, 0, 0, 1;
    pl.p_basis = {p1, p2};
    pl.theta_box.lower = Vec(2);
    pl.theta_box.lower << 0.01, 1.0;
    pl.theta_box.upper = Vec(2);
    pl.theta_box.upper << 1.0, 10.0;
    pl.validate();
    return pl;
}

std::complex<double> example_transfer(const ExamplePlantParams& p,
                                      std::complex<double> s) {
    const std::complex<double> num =
        p.k * (s + p.r_z) * (s * s + 2.0 * p.zeta_z * p.omega_z * s + p.omega_z * p.omega_z);
    const std::complex<double> den =
        (s + p.r_p1) * (s + p.r_p2) *
        (s * s + 2.0 * p.zeta_p * p.omega_p * s + p.omega_p * p.omega_p);
    return num / den;
}

XiDesigns build_xi_designs(double sigma, double omega_deriv,
                           double omega0_1, double omega0_2) {
    XiDesigns ds;
    ds.spec0.xi = Mat::Zero(4, 4);
    ds.spec0.xi.block(0, 0, 2, 2) << sigma, omega0_1, -omega0_1, sigma;
    ds.spec0.xi.block(2, 2, 2, 2) << sigma, omega0_2, -omega0_2, sigma;
    ds.spec0.pi.resize(1, 4);
    ds.spec0.pi << 1, 1, 1, 1;

    ds.spec1.xi.resize(4, 4);
    ds.spec1.xi << sigma, omega_deriv, 1, 0,
                  -omega_deriv, sigma, 0, 1,
                   0, 0, sigma, omega_deriv,
                   0, 0, -omega_deriv, sigma;
    ds.spec1.pi.resize(1, 4);
    ds.spec1.pi << 1, 1, 0, 0;
    return ds;
}

namespace {

Mat perturb_columns(const Mat& gamma, const Vec& eps) {
    Mat out = gamma;
    for (Index k = 0; k < gamma.cols(); ++k) out.col(k) *= 1.0 + eps(k);
    return out;
}

double recovery_metric(const ThetaVec& theta_true, const ThetaVec& theta_hat) {
    double acc = 0.0;
    for (Index i = 0; i < theta_true.size(); ++i) {
        const double d = (theta_true(i) - theta_hat(i)) / theta_true(i);
        acc += d * d;
    }
    return std::sqrt(acc);
}

}  // namespace

OmegaSearchResult search_omegas(const LftPlant& plant, const ThetaVec& theta_true,
                                double sigma, double lo, double hi, int n_samples,
                                double noise_std, std::uint64_t seed,
                                const RecoveryConfig& cfg) {
    if (!(hi > lo))
        throw DimensionMismatch("search_omegas: interval must be nonempty");
    if (n_samples < 1)
        throw DimensionMismatch("search_omegas: n_samples must be at least 1");

    Rng eps_rng = Rng::substream(seed, 0);
    Vec eps(4);
    for (Index i = 0; i < 4; ++i) eps(i) = eps_rng.normal(0.0, noise_std);

    OmegaSearchResult out;
    out.metric1_best = std::numeric_limits<double>::infinity();
    out.metric0_best = std::numeric_limits<double>::infinity();

    Rng cand1 = Rng::substream(seed, 1);
    for (int n = 0; n < n_samples; ++n) {
        const double w = cand1.uniform(lo, hi);
        try {
            const InterpSpec spec = build_xi_designs(sigma, w, w, w).spec1;
            const Rtim exact = compute_rtim(plant, theta_true, spec);
            Rtim noisy = exact;
            noisy.gamma = perturb_columns(exact.gamma, eps);
            noisy.provenance = RtimProvenance::estimate;
            noisy.noise_std = noise_std;
            const RecoveryResult rec = recover(build_problem(plant, spec, noisy), cfg);
            const double metric = recovery_metric(theta_true, rec.theta_hat);
            if (metric < out.metric1_best) {
                out.metric1_best = metric;
                out.omega1_best = w;
            }
        } catch (const Error&) {
            ++out.failures;
        }
    }

    Rng cand0 = Rng::substream(seed, 2);
    for (int n = 0; n < n_samples; ++n) {
        const double w1 = cand0.uniform(lo, hi);
        const double w2 = cand0.uniform(lo, hi);
        try {
            const InterpSpec spec = build_xi_designs(sigma, w1, w1, w2).spec0;
            const Rtim exact = compute_rtim(plant, theta_true, spec);
            Rtim noisy = exact;
            noisy.gamma = perturb_columns(exact.gamma, eps);
            noisy.provenance = RtimProvenance::estimate;
            noisy.noise_std = noise_std;
            const RecoveryResult rec = recover(build_problem(plant, spec, noisy), cfg);
            const double metric = recovery_metric(theta_true, rec.theta_hat);
            if (metric < out.metric0_best) {
                out.metric0_best = metric;
                out.omega_pair_best = {w1, w2};
            }
        } catch (const Error&) {
            ++out.failures;
        }
    }
    return out;
}

std::vector<TrialRecord> run_monte_carlo(const LftPlant& plant,
                                         const InterpSpec& spec0,
                                         const InterpSpec& spec1,
                                         const ThetaVec& theta_true,
                                         const RecoveryConfig& cfg, int n_trials,
                                         double noise_std, std::uint64_t seed) {
    if (n_trials < 1)
        throw DimensionMismatch("run_monte_carlo: n_trials must be at least 1");
    if (theta_true.size() != plant.m_theta() || theta_true.size() != 2)
        throw DimensionMismatch("run_monte_carlo: expects a two-parameter plant");

    const Rtim exact0 = compute_rtim(plant, theta_true, spec0);
    const Rtim exact1 = compute_rtim(plant, theta_true, spec1);
    const Index n_cols = spec0.m_xi();

    constexpr double kDenomFloor = 1e-12;
    std::vector<TrialRecord> records;
    records.reserve(static_cast<std::size_t>(n_trials));
    for (int t = 0; t < n_trials; ++t) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
        TrialRecord rec;
        rec.eps.resize(n_cols);
        for (Index k = 0; k < n_cols; ++k) rec.eps(k) = rng.normal(0.0, noise_std);
        rec.eps_norm = rec.eps.norm();

        Rtim noisy0 = exact0;
        noisy0.gamma = perturb_columns(exact0.gamma, rec.eps);
        noisy0.provenance = RtimProvenance::estimate;
        noisy0.noise_std = noise_std;
        Rtim noisy1 = exact1;
        noisy1.gamma = perturb_columns(exact1.gamma, rec.eps);
        noisy1.provenance = RtimProvenance::estimate;
        noisy1.noise_std = noise_std;

        const RecoveryResult r0 = recover(build_problem(plant, spec0, noisy0), cfg);
        const RecoveryResult r1 = recover(build_problem(plant, spec1, noisy1), cfg);
        rec.converged0 = r0.converged;
        rec.converged1 = r1.converged;

        const double ez0 = std::abs(r0.theta_hat(0) - theta_true(0)) / theta_true(0);
        const double ew0 = std::abs(r0.theta_hat(1) - theta_true(1)) / theta_true(1);
        const double ez1 = std::abs(r1.theta_hat(0) - theta_true(0)) / theta_true(0);
        const double ew1 = std::abs(r1.theta_hat(1) - theta_true(1)) / theta_true(1);
        rec.rel_err_zeta0 = 100.0 * ez0;
        rec.rel_err_zeta1 = 100.0 * ez1;
        rec.rel_err_omega0 = 100.0 * ew0;
        rec.rel_err_omega1 = 100.0 * ew1;
        rec.r_zeta_defined = ez0 > kDenomFloor;
        rec.r_omega_defined = ew0 > kDenomFloor;
        if (rec.r_zeta_defined) rec.r_zeta = ez1 / ez0;
        if (rec.r_omega_defined) rec.r_omega = ew1 / ew0;
        records.push_back(std::move(rec));
    }
    return records;
}

BinTable bin_table(const std::vector<TrialRecord>& records,
                   const std::vector<double>& edges) {
    if (edges.size() < 2)
        throw DimensionMismatch("bin_table: need at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1]))
            throw DimensionMismatch("bin_table: edges must be ascending");

    BinTable table;
    table.edges = edges;
    const auto n_bins = edges.size() - 1;
    table.total.assign(n_bins, 0);
    table.zeta_wins.assign(n_bins, 0);
    table.omega_wins.assign(n_bins, 0);

    for (const TrialRecord& rec : records) {
        int bin = -1;
        for (std::size_t i = 0; i < n_bins; ++i) {
            if (rec.eps_norm >= edges[i] && rec.eps_norm < edges[i + 1]) {
                bin = static_cast<int>(i);
                break;
            }
        }
        const bool zw = rec.r_zeta_defined && rec.r_zeta < 1.0;
        const bool ow = rec.r_omega_defined && rec.r_omega < 1.0;
        if (!rec.r_zeta_defined || !rec.r_omega_defined) ++table.undefined_ratios;
        if (bin < 0) {
            ++table.overflow_total;
            table.overflow_zeta_wins += zw;
            table.overflow_omega_wins += ow;
        } else {
            ++table.total[static_cast<std::size_t>(bin)];
            table.zeta_wins[static_cast<std::size_t>(bin)] += zw;
            table.omega_wins[static_cast<std::size_t>(bin)] += ow;
        }
    }
    for (std::size_t i = 0; i < n_bins; ++i) {
        table.sum_total += table.total[i];
        table.sum_zeta_wins += table.zeta_wins[i];
        table.sum_omega_wins += table.omega_wins[i];
    }
    return table;
}

std::vector<double> default_bin_edges() {
    return {0.05, 0.20, 0.35, 0.50, 0.65, 1.00};
}

}  // namespace lftid
