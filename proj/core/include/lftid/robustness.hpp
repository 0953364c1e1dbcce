#pragma once

// First-order sensitivity of the recovered parameters to errors in the
// tangential response matrix.  Perturbations (delta_theta, delta_T1) that
// keep the state equation satisfied live in the null space of [R_xv R_xx];
// recovery is robust exactly when the output equation pins them down.

#include <optional>

#include "lftid/interpolation.hpp"
#include "lftid/lft_model.hpp"

namespace lftid {

struct RMatrices {
    Mat r_xv;  // (m_x m_xi) x m_theta
    Mat r_xx;  // (m_x m_xi) x (m_x m_xi)
    Mat r_yv;  // (m_y m_xi) x m_theta
    Mat r_yx;  // (m_y m_xi) x (m_x m_xi)
};

RMatrices build_r_matrices(const LftPlant& plant, const ThetaVec& theta,
                           const InterpSpec& spec, const Mat& t1);

struct RobustnessDims {
    Index m_theta = 0;
    Index state_block = 0;  // m_x * m_xi
    Index null_width = 0;
    Index cond_rows = 0;
    Index cond_cols = 0;
};

struct RobustnessReport {
    bool robust = false;
    // Spectral-norm gain from response error to parameter error; absent
    // when not robust.
    std::optional<double> amplification;
    Index condition_matrix_rank = 0;
    RobustnessDims dims;
    // [R_xv R_xx] had full column rank, so no perturbation direction
    // exists at all; robust with zero amplification.
    bool degenerate = false;
};

RobustnessReport check_robustness(const LftPlant& plant, const ThetaVec& theta,
                                  const InterpSpec& spec, RankTol tol = {});

}  // namespace lftid
