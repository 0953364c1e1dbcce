#include "lftid/recoverability.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>

#include "lftid/rng.hpp"

namespace lftid {

void SamplingPlan::validate() const {
    if (n_theta < 1 || n_phi < 1)
        throw DimensionMismatch("SamplingPlan: n_theta and n_phi must be at least 1");
    if (!(mu_t > 0.0))
        throw DimensionMismatch("SamplingPlan: mu_t must be positive");
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::recoverable_whp: return "recoverable_whp";
        case Verdict::locally_recoverable: return "locally_recoverable";
        case Verdict::not_recoverable: return "not_recoverable";
        case Verdict::identifiability_failed: return "identifiability_failed";
    }
    return "unknown";
}

bool check_identifiability(const LftPlant& plant, RankTol tol) {
    return rank(psi_matrix(plant), tol) == plant.m_theta();
}

namespace {

Mat stack_bv_dv(const LftPlant& plant) {
    Mat dg(plant.m_x() + plant.m_y(), plant.m_v());
    dg << plant.b_xv, plant.d_yv;
    return dg;
}

// (I - D_zv P)^{-1} (C_zx X + D_zu Pi), an m_z x m_xi matrix.
Mat m_factor(const LftPlant& plant, const Mat& p, const Mat& x, const InterpSpec& spec) {
    const Mat g = plant.c_zx * x + plant.d_zu * spec.pi;
    Mat closure = Mat::Identity(plant.m_z(), plant.m_z()) - plant.d_zv * p;
    Eigen::FullPivLU<Mat> lu(closure);
    if (!lu.isInvertible())
        throw IllPosed("uniqueness test: I - D_zv P(theta) is singular");
    return lu.solve(g);
}

// The bracketed matrix of the uniqueness test, (m_xi m_v) x m_theta.
Mat bracket_matrix(const LftPlant& plant, const Mat& p, const Mat& x,
                   const InterpSpec& spec, const Mat& n_r, const Vec& phi) {
    const Index m_v = plant.m_v();
    const Index m_xi = spec.m_xi();
    const Mat m = m_factor(plant, p, x, spec);
    Mat out = kron(m.transpose(), Mat::Identity(m_v, m_v)) * psi_matrix(plant);
    for (Index i = 0; i < plant.m_theta(); ++i) {
        const Mat& pi = plant.p_basis[static_cast<std::size_t>(i)];
        out.col(i) -= kron(Mat::Identity(m_xi, m_xi), pi * plant.d_zv * n_r) * phi;
    }
    return out;
}

}  // namespace

Index phi_dimension(const LftPlant& plant, const InterpSpec& spec) {
    return right_null_basis(stack_bv_dv(plant)).cols() * spec.m_xi();
}

Vec uniqueness_lhs(const LftPlant& plant, const ThetaVec& theta,
                   const InterpSpec& spec, const Vec& phi, RankTol tol) {
    spec.validate(plant.m_u());
    const Mat n_r = right_null_basis(stack_bv_dv(plant), tol);
    if (phi.size() != n_r.cols() * spec.m_xi())
        throw DimensionMismatch("phi: length must equal width(N_r) * m_xi");
    const Mat p = eval_p(plant, theta);
    const Mat x = solve_x(plant, theta, spec, tol);
    const Mat m1 = bracket_matrix(plant, p, x, spec, n_r, phi);
    const Mat lnb = left_null_basis(m1, tol);
    if (lnb.rows() == 0) return Vec(0);
    const Mat trail = kron(Mat::Identity(spec.m_xi(), spec.m_xi()),
                           (Mat::Identity(plant.m_v(), plant.m_v()) - p * plant.d_zv) * n_r);
    return lnb * (trail * phi);
}

RecoverabilityVerdict check_recoverability_sampled(const LftPlant& plant,
                                                   const InterpSpec& spec,
                                                   const SamplingPlan& plan,
                                                   RankTol tol) {
    plan.validate();
    spec.validate(plant.m_u());
    RecoverabilityVerdict report;

    if (!check_identifiability(plant, tol)) {
        report.verdict = Verdict::identifiability_failed;
        report.min_ratio = std::numeric_limits<double>::quiet_NaN();
        return report;
    }

    const Index m_phi = phi_dimension(plant, spec);
    if (m_phi == 0) {
        report.verdict = Verdict::recoverable_whp;
        report.vacuous = true;
        report.min_ratio = std::numeric_limits<double>::infinity();
        return report;
    }

    const ParamBox& box = plant.theta_box;
    const Vec span = box.upper - box.lower;
    constexpr int kMaxRedraws = 100;

    int failed = 0;
    report.min_ratio = std::numeric_limits<double>::infinity();
    for (int t = 0; t < plan.n_theta; ++t) {
        Rng theta_rng = Rng::substream(plan.seed, static_cast<std::uint64_t>(t), 0);
        ThetaVec theta(box.size());
        bool usable = false;
        for (int attempt = 0; attempt < kMaxRedraws && !usable; ++attempt) {
            for (Index i = 0; i < theta.size(); ++i)
                theta(i) = box.lower(i) + theta_rng.uniform01() * span(i);
            if (!is_well_posed(plant, theta, tol)) {
                ++report.resampled_thetas;
                continue;
            }
            const StateSpace ss = assemble_system(plant, theta);
            if (!spectra_disjoint(ss.a, spec.xi, tol)) {
                ++report.resampled_thetas;
                continue;
            }
            usable = true;
        }
        if (!usable)
            throw NumericalError("sampling: could not draw a usable theta after repeated tries");

        double theta_min = std::numeric_limits<double>::infinity();
        bool theta_failed = false;
        for (int j = 0; j < plan.n_phi; ++j) {
            Rng phi_rng = Rng::substream(plan.seed, static_cast<std::uint64_t>(t),
                                         static_cast<std::uint64_t>(j) + 1);
            Vec phi(m_phi);
            do {
                for (Index i = 0; i < m_phi; ++i) phi(i) = phi_rng.uniform(-1.0, 1.0);
            } while (phi.norm() < 1e-12);

            const Vec lhs = uniqueness_lhs(plant, theta, spec, phi, tol);
            if (lhs.size() == 0) ++report.vacuous_lhs_samples;
            const double ratio = lhs.squaredNorm() / phi.squaredNorm();
            theta_min = std::min(theta_min, ratio);
            if (!(ratio > plan.mu_t)) theta_failed = true;
        }
        report.per_theta_min_ratio.push_back(theta_min);
        report.min_ratio = std::min(report.min_ratio, theta_min);
        if (theta_failed) {
            ++failed;
            report.failed_thetas.push_back(theta);
        }
    }

    if (failed == 0)
        report.verdict = Verdict::recoverable_whp;
    else if (failed == plan.n_theta)
        report.verdict = Verdict::not_recoverable;
    else
        report.verdict = Verdict::locally_recoverable;
    return report;
}

bool rank_test_null_aligned(const LftPlant& plant, const ThetaVec& theta,
                            const InterpSpec& spec, RankTol tol) {
    spec.validate(plant.m_u());
    const Mat dg = stack_bv_dv(plant);
    const Mat n_r = right_null_basis(dg, tol);
    const Mat coupling = plant.d_zv * n_r;
    const double scale = std::max(1.0, plant.d_zv.norm());
    if (coupling.size() > 0 &&
        coupling.cwiseAbs().maxCoeff() > tol.cutoff(coupling.rows(), coupling.cols()) * scale)
        throw InapplicableCase("rank_test_null_aligned: D_zv does not annihilate the null space of [B_xv; D_yv]");

    const Mat p = eval_p(plant, theta);
    const Mat x = solve_x(plant, theta, spec, tol);
    const Mat m = m_factor(plant, p, x, spec);
    const Index m_v = plant.m_v();
    const Index m_xi = spec.m_xi();

    const Mat top = psi_matrix(plant).transpose() * kron(m, Mat::Identity(m_v, m_v));
    const Mat bottom = kron(Mat::Identity(m_xi, m_xi), Mat(n_r.transpose()));
    Mat stacked(top.rows() + bottom.rows(), top.cols());
    stacked << top, bottom;
    return rank(stacked, tol) == stacked.rows();
}

bool rank_test_frr_output(const LftPlant& plant, const ThetaVec& theta,
                          const InterpSpec& spec, RankTol tol) {
    spec.validate(plant.m_u());
    const Mat x = solve_x(plant, theta, spec, tol);
    const Mat g = plant.c_zx * x + plant.d_zu * spec.pi;
    if (rank(g, tol) < g.rows())
        throw InapplicableCase("rank_test_frr_output: C_zx X + D_zu Pi is not of full row rank");

    const Mat p = eval_p(plant, theta);
    const Index m_z = plant.m_z();
    const Index m_v = plant.m_v();
    const Mat psi_lperp = left_null_basis(psi_matrix(plant), tol);

    const Mat top = kron(Mat::Identity(m_z, m_z), stack_bv_dv(plant));
    const Mat bottom = psi_lperp * kron(Mat::Identity(m_z, m_z),
                                        Mat(Mat::Identity(m_v, m_v) - p * plant.d_zv));
    Mat stacked(top.rows() + bottom.rows(), top.cols());
    stacked << top, bottom;
    return rank(stacked, tol) == stacked.cols();
}

NecessaryConditions necessary_conditions(const LftPlant& plant, const ThetaVec& theta,
                                         const InterpSpec& spec, int phi_samples,
                                         std::uint64_t seed, RankTol tol) {
    spec.validate(plant.m_u());
    if (phi_samples < 1)
        throw DimensionMismatch("necessary_conditions: phi_samples must be at least 1");
    const Mat n_r = right_null_basis(stack_bv_dv(plant), tol);
    const Index m_phi = n_r.cols() * spec.m_xi();
    const Mat p = eval_p(plant, theta);
    const Mat x = solve_x(plant, theta, spec, tol);

    NecessaryConditions out;
    out.cond1 = true;
    for (int j = 0; j < phi_samples; ++j) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(j));
        Vec phi(m_phi);
        if (m_phi > 0) {
            do {
                for (Index i = 0; i < m_phi; ++i) phi(i) = rng.uniform(-1.0, 1.0);
            } while (phi.norm() < 1e-12);
        }
        const Mat m1 = bracket_matrix(plant, p, x, spec, n_r, phi);
        if (rank(m1, tol) == m1.rows()) {
            out.cond1 = false;
            break;
        }
    }

    const Mat g = plant.c_zx * x + plant.d_zu * spec.pi;
    const Index m_v = plant.m_v();
    const Mat psi_lperp = left_null_basis(psi_matrix(plant), tol);
    const Mat top = kron(g.transpose(), Mat::Identity(m_v, m_v));
    const Mat closure_t = (Mat::Identity(plant.m_z(), plant.m_z()) - plant.d_zv * p).transpose();
    const Mat bottom = psi_lperp * kron(closure_t, Mat::Identity(m_v, m_v));
    Mat stacked(top.rows() + bottom.rows(), top.cols());
    stacked << top, bottom;
    out.cond2 = rank(stacked, tol) == stacked.cols();
    return out;
}

}  // namespace lftid
