#include "lftid/robustness.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

namespace lftid {

RMatrices build_r_matrices(const LftPlant& plant, const ThetaVec& theta,
                           const InterpSpec& spec, const Mat& t1) {
    spec.validate(plant.m_u());
    const Index m_x = plant.m_x(), m_v = plant.m_v(), m_z = plant.m_z();
    const Index m_xi = spec.m_xi();
    if (t1.rows() != m_x || t1.cols() != m_xi)
        throw DimensionMismatch("T_1: must be m_x x m_xi");

    const Mat p = eval_p(plant, theta);
    Eigen::FullPivLU<Mat> lu_v(Mat(Mat::Identity(m_v, m_v) - p * plant.d_zv));
    if (!lu_v.isInvertible())
        throw IllPosed("build_r_matrices: I - P(theta) D_zv is singular");
    const Mat ipd = lu_v.inverse();
    const Mat idp = Mat(Mat::Identity(m_z, m_z) - plant.d_zv * p)
                        .partialPivLu()
                        .inverse();

    const Mat m_mat = idp * (plant.c_zx * t1 + plant.d_zu * spec.pi);
    const Mat psi = psi_matrix(plant);
    const Mat eye_xi = Mat::Identity(m_xi, m_xi);

    RMatrices r;
    r.r_xv = kron(m_mat.transpose(), Mat(plant.b_xv * ipd)) * psi;
    r.r_xx = kron(eye_xi, Mat(plant.b_xv * ipd * p * plant.c_zx + plant.a_xx)) -
             kron(spec.xi.transpose(), Mat::Identity(m_x, m_x));
    r.r_yv = kron(m_mat.transpose(), Mat(plant.d_yv * ipd)) * psi;
    r.r_yx = kron(eye_xi, Mat(plant.d_yv * ipd * p * plant.c_zx + plant.c_yx));
    return r;
}

RobustnessReport check_robustness(const LftPlant& plant, const ThetaVec& theta,
                                  const InterpSpec& spec, RankTol tol) {
    const StateSpace ss = assemble_system(plant, theta);
    if (!spectra_disjoint(ss.a, spec.xi, tol))
        throw SharedEigenvalue("check_robustness: A(theta) and Xi share an eigenvalue");

    const Mat t1 = solve_x(plant, theta, spec, tol);
    const RMatrices r = build_r_matrices(plant, theta, spec, t1);

    Mat state_block(r.r_xv.rows(), r.r_xv.cols() + r.r_xx.cols());
    state_block << r.r_xv, r.r_xx;
    const Mat n_basis = right_null_basis(state_block, tol);

    Mat output_block(r.r_yv.rows(), r.r_yv.cols() + r.r_yx.cols());
    output_block << r.r_yv, r.r_yx;

    RobustnessReport report;
    report.dims.m_theta = plant.m_theta();
    report.dims.state_block = plant.m_x() * spec.m_xi();
    report.dims.null_width = n_basis.cols();

    if (n_basis.cols() == 0) {
        report.robust = true;
        report.degenerate = true;
        report.amplification = 0.0;
        return report;
    }

    const Mat cond = output_block * n_basis;
    report.dims.cond_rows = cond.rows();
    report.dims.cond_cols = cond.cols();
    report.condition_matrix_rank = rank(cond, tol);
    report.robust = report.condition_matrix_rank == cond.cols();
    if (report.robust) {
        const Mat gain = n_basis.topRows(plant.m_theta()) * pinv(cond, tol);
        Eigen::JacobiSVD<Mat> svd(gain);
        report.amplification = svd.singularValues().size() > 0
                                   ? svd.singularValues()(0)
                                   : 0.0;
    }
    return report;
}

}  // namespace lftid
