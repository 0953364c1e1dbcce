// Plant model with linear-fractional parameter dependence.
//
// The system matrices are
//   [A(theta) B(theta); C(theta) D(theta)]
//     = [A_xx B_xu; C_yx D_yu]
//       + [B_xv; D_yv] (I - P(theta) D_zv)^{-1} P(theta) [C_zx D_zu]
// with P(theta) = P_0 + sum_i theta_i P_i. The parameter set is an
// axis-aligned box. Well-posedness means I - P(theta) D_zv is invertible.
#pragma once

#include <complex>
#include <vector>

#include "lftid/matops.hpp"

namespace lftid {

using ThetaVec = Vec;

struct ParamBox {
    Vec lower;
    Vec upper;

    Index size() const { return lower.size(); }
    bool contains(const ThetaVec& theta) const;
    ThetaVec clamp(const ThetaVec& theta) const;
    void validate() const;
};

struct LftPlant {
    Mat a_xx;  // m_x x m_x
    Mat b_xu;  // m_x x m_u
    Mat b_xv;  // m_x x m_v
    Mat c_yx;  // m_y x m_x
    Mat c_zx;  // m_z x m_x
    Mat d_zu;  // m_z x m_u
    Mat d_zv;  // m_z x m_v
    Mat d_yu;  // m_y x m_u
    Mat d_yv;  // m_y x m_v
    Mat p0;                   // m_v x m_z
    std::vector<Mat> p_basis; // each m_v x m_z, one per parameter
    ParamBox theta_box;

    Index m_x() const { return a_xx.rows(); }
    Index m_u() const { return b_xu.cols(); }
    Index m_v() const { return b_xv.cols(); }
    Index m_y() const { return c_yx.rows(); }
    Index m_z() const { return c_zx.rows(); }
    Index m_theta() const { return static_cast<Index>(p_basis.size()); }

    // Checks every dimension relation; throws DimensionMismatch naming the
    // offending block.
    void validate() const;
};

struct StateSpace {
    Mat a, b, c, d;
};

// P_0 + sum_i theta_i P_i.
Mat eval_p(const LftPlant& plant, const ThetaVec& theta);

// True iff I - P(theta) D_zv passes the full-rank test under tol.
bool is_well_posed(const LftPlant& plant, const ThetaVec& theta, RankTol tol = {});

// The block formula above, with (I - P D_zv) applied as a dense solve.
// Throws IllPosed when the inverse fails the rank test.
StateSpace assemble_system(const LftPlant& plant, const ThetaVec& theta);

// Columns vec(P_i); full column rank of this matrix is necessary for the
// parameters to be distinguishable at all.
Mat psi_matrix(const LftPlant& plant);

// H(s) = C(theta) (sI - A(theta))^{-1} B(theta) + D(theta).
CMat transfer_value(const LftPlant& plant, const ThetaVec& theta,
                    std::complex<double> s);

}  // namespace lftid
