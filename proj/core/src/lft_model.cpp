#include "lftid/lft_model.hpp"

#include <Eigen/LU>
#include <string>

namespace lftid {

bool ParamBox::contains(const ThetaVec& theta) const {
    if (theta.size() != lower.size()) return false;
    return (theta.array() >= lower.array()).all() &&
           (theta.array() <= upper.array()).all();
}

ThetaVec ParamBox::clamp(const ThetaVec& theta) const {
    return theta.cwiseMax(lower).cwiseMin(upper);
}

void ParamBox::validate() const {
    if (lower.size() != upper.size())
        throw DimensionMismatch("theta_box: lower and upper lengths differ");
    if (!lower.allFinite() || !upper.allFinite())
        throw DimensionMismatch("theta_box: bounds must be finite");
    if ((lower.array() > upper.array()).any())
        throw DimensionMismatch("theta_box: lower exceeds upper");
}

namespace {

void require(bool ok, const std::string& block, const std::string& what) {
    if (!ok) throw DimensionMismatch(block + ": " + what);
}

}  // namespace

void LftPlant::validate() const {
    require(a_xx.rows() == a_xx.cols() && a_xx.rows() > 0, "A_xx", "must be square and nonempty");
    const Index mx = m_x(), mu = m_u(), mv = m_v(), my = m_y(), mz = m_z();
    require(b_xu.rows() == mx, "B_xu", "row count must equal m_x");
    require(b_xv.rows() == mx, "B_xv", "row count must equal m_x");
    require(c_yx.cols() == mx, "C_yx", "column count must equal m_x");
    require(c_zx.cols() == mx, "C_zx", "column count must equal m_x");
    require(d_zu.rows() == mz && d_zu.cols() == mu, "D_zu", "must be m_z x m_u");
    require(d_zv.rows() == mz && d_zv.cols() == mv, "D_zv", "must be m_z x m_v");
    require(d_yu.rows() == my && d_yu.cols() == mu, "D_yu", "must be m_y x m_u");
    require(d_yv.rows() == my && d_yv.cols() == mv, "D_yv", "must be m_y x m_v");
    require(p0.rows() == mv && p0.cols() == mz, "P[0]", "must be m_v x m_z");
    require(!p_basis.empty(), "P", "needs at least one parameter matrix after P_0");
    for (std::size_t i = 0; i < p_basis.size(); ++i)
        require(p_basis[i].rows() == mv && p_basis[i].cols() == mz,
                "P[" + std::to_string(i + 1) + "]", "must be m_v x m_z");
    theta_box.validate();
    require(theta_box.size() == m_theta(), "theta_box", "length must equal the parameter count");
}

Mat eval_p(const LftPlant& plant, const ThetaVec& theta) {
    if (theta.size() != plant.m_theta())
        throw DimensionMismatch("theta: length must equal the parameter count");
    Mat p = plant.p0;
    for (Index i = 0; i < theta.size(); ++i)
        p += theta(i) * plant.p_basis[static_cast<std::size_t>(i)];
    return p;
}

bool is_well_posed(const LftPlant& plant, const ThetaVec& theta, RankTol tol) {
    const Mat p = eval_p(plant, theta);
    const Mat closure = Mat::Identity(plant.m_v(), plant.m_v()) - p * plant.d_zv;
    return rank(closure, tol) == plant.m_v();
}

StateSpace assemble_system(const LftPlant& plant, const ThetaVec& theta) {
    const Mat p = eval_p(plant, theta);
    const Index mv = plant.m_v();
    const Mat closure = Mat::Identity(mv, mv) - p * plant.d_zv;
    if (rank(closure) < mv)
        throw IllPosed("assemble_system: I - P(theta) D_zv is singular");
    const Mat w = closure.partialPivLu().solve(p);  // (I - P D_zv)^{-1} P

    Mat left(plant.m_x() + plant.m_y(), mv);
    left << plant.b_xv, plant.d_yv;
    Mat right(plant.m_z(), plant.m_x() + plant.m_u());
    right << plant.c_zx, plant.d_zu;

    Mat full(plant.m_x() + plant.m_y(), plant.m_x() + plant.m_u());
    full << plant.a_xx, plant.b_xu, plant.c_yx, plant.d_yu;
    full += left * w * right;

    StateSpace ss;
    ss.a = full.topLeftCorner(plant.m_x(), plant.m_x());
    ss.b = full.topRightCorner(plant.m_x(), plant.m_u());
    ss.c = full.bottomLeftCorner(plant.m_y(), plant.m_x());
    ss.d = full.bottomRightCorner(plant.m_y(), plant.m_u());
    return ss;
}

Mat psi_matrix(const LftPlant& plant) {
    Mat psi(plant.m_v() * plant.m_z(), plant.m_theta());
    for (Index i = 0; i < plant.m_theta(); ++i)
        psi.col(i) = vec(plant.p_basis[static_cast<std::size_t>(i)]);
    return psi;
}

CMat transfer_value(const LftPlant& plant, const ThetaVec& theta,
                    std::complex<double> s) {
    const StateSpace ss = assemble_system(plant, theta);
    CMat resolvent = s * CMat::Identity(plant.m_x(), plant.m_x()) - ss.a.cast<std::complex<double>>();
    Eigen::FullPivLU<CMat> lu(resolvent);
    if (!lu.isInvertible())
        throw SingularResolvent("transfer_value: s is an eigenvalue of A(theta)");
    return ss.c.cast<std::complex<double>>() * lu.solve(ss.b.cast<std::complex<double>>()) +
           ss.d.cast<std::complex<double>>();
}

}  // namespace lftid
