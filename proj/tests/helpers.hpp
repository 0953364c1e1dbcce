// Shared test fixtures: paths to the bundled JSON files, random matrix and
// plant generators, and a couple of small comparison utilities.
#pragma once

#include <string>

#include <Eigen/LU>

#include "lftid/interpolation.hpp"
#include "lftid/lft_model.hpp"
#include "lftid/matops.hpp"
#include "lftid/recovery.hpp"
#include "lftid/rng.hpp"

#ifndef LFTID_FIXTURE_DIR
#define LFTID_FIXTURE_DIR "fixtures"
#endif

namespace testutil {

using namespace lftid;

inline std::string fixture(const std::string& name) {
    return std::string(LFTID_FIXTURE_DIR) + "/" + name;
}

inline Mat rmat(Rng& rng, Index rows, Index cols, double scale = 1.0) {
    Mat m(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) m(r, c) = scale * rng.normal();
    return m;
}

inline Vec rvec(Rng& rng, Index n, double scale = 1.0) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = scale * rng.normal();
    return v;
}

// Random square matrix with known rank, built from full-rank factors.
inline Mat rmat_with_rank(Rng& rng, Index rows, Index cols, Index r) {
    if (r == 0) return Mat::Zero(rows, cols);
    return rmat(rng, rows, r) * rmat(rng, r, cols);
}

struct PlantDraw {
    LftPlant plant;
    ThetaVec theta;
    InterpSpec spec;
};

// Dense random plants with P blocks scaled down so I - P(theta) D_zv stays
// well away from singular on [-1, 1]^m_theta.  Occasional draws still land
// on a shared eigenvalue between A(theta) and Xi; callers catch and redraw.
inline PlantDraw random_plant(Rng& rng) {
    const auto pick = [&](Index lo, Index hi) {
        return lo + static_cast<Index>(rng.uniform01() * static_cast<double>(hi - lo + 1));
    };
    const Index m_x = pick(2, 6);
    const Index m_u = pick(1, 2);
    const Index m_y = pick(1, 2);
    const Index m_v = pick(1, 3);
    const Index m_z = pick(1, 3);
    const Index m_th = pick(1, 3);
    const Index m_xi = pick(1, m_x);

    PlantDraw d;
    d.plant.a_xx = rmat(rng, m_x, m_x);
    d.plant.b_xu = rmat(rng, m_x, m_u);
    d.plant.b_xv = rmat(rng, m_x, m_v);
    d.plant.c_yx = rmat(rng, m_y, m_x);
    d.plant.c_zx = rmat(rng, m_z, m_x);
    d.plant.d_zu = rmat(rng, m_z, m_u);
    d.plant.d_zv = rmat(rng, m_z, m_v);
    d.plant.d_yu = rmat(rng, m_y, m_u);
    d.plant.d_yv = rmat(rng, m_y, m_v);
    d.plant.p0 = rmat(rng, m_v, m_z, 0.1);
    for (Index i = 0; i < m_th; ++i) d.plant.p_basis.push_back(rmat(rng, m_v, m_z, 0.1));
    d.plant.theta_box.lower = Vec::Constant(m_th, -1.0);
    d.plant.theta_box.upper = Vec::Constant(m_th, 1.0);

    d.theta = ThetaVec(m_th);
    for (Index i = 0; i < m_th; ++i) d.theta(i) = rng.uniform(-1.0, 1.0);
    d.spec.xi = rmat(rng, m_xi, m_xi);
    d.spec.pi = rmat(rng, m_u, m_xi);
    return d;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// Exact-data witness for the residual map: reassembles from the true theta
// the interior signals that the alpha blocks parametrize, so e(theta, alpha)
// vanishes whenever gamma came from the plant itself.
inline AlphaVec certificate_alpha(const LftPlant& plant, const ThetaVec& theta,
                                  const InterpSpec& spec, const Mat& gamma,
                                  const RecoveryProblem& prob) {
    const Mat x = solve_x(plant, theta, spec);
    AlphaVec alpha = AlphaVec::zero(prob.dims);
    if (prob.dims.width_t > 0)
        alpha.alpha_t = prob.upsilon_s_null.transpose() * (vec(x) - vec(prob.t10));

    const Index m_x = plant.m_x();
    const Index m_y = plant.m_y();
    const Index m_v = plant.m_v();
    const Index m_xi = spec.m_xi();

    const Mat p = eval_p(plant, theta);
    const Mat closure = Mat::Identity(m_v, m_v) - p * plant.d_zv;
    const Mat v_sig =
        closure.fullPivLu().solve(p * (plant.c_zx * x + plant.d_zu * spec.pi));

    Mat dg(m_x + m_y, m_v);
    dg << plant.b_xv, plant.d_yv;
    Mat ac(m_x + m_y, m_x);
    ac << plant.a_xx, plant.c_yx;
    Mat s_c(m_x + m_y, m_xi);
    s_c << plant.b_xu * spec.pi, plant.d_yu * spec.pi - gamma;
    Mat rhs(m_x + m_y, m_xi);
    rhs << x * spec.xi, Mat::Zero(m_y, m_xi);
    rhs -= ac * x + s_c;

    const Mat n_r = right_null_basis(dg);
    if (n_r.cols() > 0) {
        const Mat omega = n_r.transpose() * (v_sig - pinv(dg) * rhs);
        alpha.alpha_s = vec(omega);
    }
    for (Index i = 0; i < prob.dims.m_theta; ++i) {
        alpha.alpha_t_i[static_cast<std::size_t>(i)] = theta(i) * alpha.alpha_t;
        alpha.alpha_s_i[static_cast<std::size_t>(i)] = theta(i) * alpha.alpha_s;
    }
    return alpha;
}

}  // namespace testutil
