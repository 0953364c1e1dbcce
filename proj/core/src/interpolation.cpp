#include "lftid/interpolation.hpp"

#include <Eigen/LU>

namespace lftid {

void InterpSpec::validate(Index m_u) const {
    if (xi.rows() != xi.cols())
        throw DimensionMismatch("Xi: must be square");
    if (xi.rows() == 0)
        throw DimensionMismatch("Xi: must be nonempty");
    if (pi.rows() != m_u || pi.cols() != xi.rows())
        throw DimensionMismatch("Pi: must be m_u x m_xi");
}

Mat solve_x(const LftPlant& plant, const ThetaVec& theta, const InterpSpec& spec,
            RankTol tol) {
    spec.validate(plant.m_u());
    const StateSpace ss = assemble_system(plant, theta);
    // A X - X Xi = -B Pi
    return solve_sylvester(ss.a, spec.xi, ss.b * spec.pi, tol);
}

Rtim compute_rtim(const LftPlant& plant, const ThetaVec& theta, const InterpSpec& spec,
                  RankTol tol) {
    spec.validate(plant.m_u());
    const StateSpace ss = assemble_system(plant, theta);
    const Mat x = solve_sylvester(ss.a, spec.xi, ss.b * spec.pi, tol);
    Rtim out;
    out.gamma = ss.c * x + ss.d * spec.pi;
    out.provenance = RtimProvenance::exact;
    return out;
}

CVec derivative_oracle(const LftPlant& plant, const ThetaVec& theta,
                       std::complex<double> lambda, int order, const CVec& eta) {
    if (order != 0 && order != 1)
        throw DimensionMismatch("derivative_oracle: order must be 0 or 1");
    const StateSpace ss = assemble_system(plant, theta);
    if (eta.size() != ss.b.cols())
        throw DimensionMismatch("eta: length must equal m_u");

    const CMat a = ss.a.cast<std::complex<double>>();
    CMat resolvent = lambda * CMat::Identity(a.rows(), a.cols()) - a;
    Eigen::FullPivLU<CMat> lu(resolvent);
    if (!lu.isInvertible())
        throw SingularResolvent("derivative_oracle: lambda is an eigenvalue of A(theta)");

    const CVec beta = ss.b.cast<std::complex<double>>() * eta;
    if (order == 0)
        return ss.c.cast<std::complex<double>>() * lu.solve(beta) +
               ss.d.cast<std::complex<double>>() * eta;
    // dH/ds = -C (sI - A)^{-2} B
    return -ss.c.cast<std::complex<double>>() * lu.solve(lu.solve(beta));
}

}  // namespace lftid
