#include "lftid/matops.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace lftid {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Eigen::JacobiSVD<Mat> full_svd(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (!svd.singularValues().allFinite())
        throw NumericalError("svd produced non-finite singular values");
    return svd;
}

Index rank_from_svd(const Eigen::JacobiSVD<Mat>& svd, Index rows, Index cols,
                    RankTol tol) {
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double cut = tol.cutoff(rows, cols) * s(0);
    Index r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return r;
}

}  // namespace

double RankTol::cutoff(Index rows, Index cols) const {
    if (rel_tol < 0.0) throw Error("RankTol: rel_tol must be nonnegative");
    if (rel_tol > 0.0) return rel_tol;
    return static_cast<double>(std::max<Index>({rows, cols, 1})) * kEps * 64.0;
}

Index rank(const Mat& m, RankTol tol) {
    if (m.size() == 0) return 0;
    return rank_from_svd(full_svd(m), m.rows(), m.cols(), tol);
}

Mat right_null_basis(const Mat& m, RankTol tol) {
    if (m.cols() == 0) return Mat(0, 0);
    if (m.rows() == 0) return Mat::Identity(m.cols(), m.cols());
    auto svd = full_svd(m);
    const Index r = rank_from_svd(svd, m.rows(), m.cols(), tol);
    return svd.matrixV().rightCols(m.cols() - r);
}

Mat left_null_basis(const Mat& m, RankTol tol) {
    if (m.rows() == 0) return Mat(0, 0);
    if (m.cols() == 0) return Mat::Identity(m.rows(), m.rows());
    auto svd = full_svd(m);
    const Index r = rank_from_svd(svd, m.rows(), m.cols(), tol);
    return svd.matrixU().rightCols(m.rows() - r).transpose();
}

Mat pinv(const Mat& m, RankTol tol) {
    if (m.size() == 0) return Mat(m.cols(), m.rows());
    auto svd = full_svd(m);
    const Index r = rank_from_svd(svd, m.rows(), m.cols(), tol);
    const auto& s = svd.singularValues();
    Vec inv = Vec::Zero(s.size());
    for (Index i = 0; i < r; ++i) inv(i) = 1.0 / s(i);
    return svd.matrixV().leftCols(s.size()) * inv.asDiagonal() *
           svd.matrixU().leftCols(s.size()).transpose();
}

Mat kron(const Mat& a, const Mat& b) {
    constexpr Index kMaxEntries = Index(1) << 26;  // 512 MB of doubles
    if (a.rows() * b.rows() > 0 &&
        (a.rows() * b.rows() > kMaxEntries / std::max<Index>(1, a.cols() * b.cols())))
        throw SizeError("kron: result would exceed the dense size cap");
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vec vec(const Mat& m) {
    return Eigen::Map<const Vec>(m.data(), m.size());
}

Mat unvec(const Vec& v, Index rows, Index cols) {
    if (v.size() != rows * cols)
        throw DimensionMismatch("unvec: vector length does not match the target shape");
    return Eigen::Map<const Mat>(v.data(), rows, cols);
}

LinearSolution solve_general_linear(const Mat& coeff, const Vec& rhs, RankTol tol) {
    if (coeff.rows() != rhs.size())
        throw DimensionMismatch("solve_general_linear: coeff rows != rhs length");
    LinearSolution sol;
    sol.particular = pinv(coeff, tol) * rhs;
    sol.null_basis = right_null_basis(coeff, tol);
    const double bound = tol.cutoff(coeff.rows(), coeff.cols()) *
                         (coeff.norm() * sol.particular.norm() + rhs.norm() + 1.0);
    sol.consistent = (coeff * sol.particular - rhs).norm() <= bound;
    return sol;
}

Mat solve_sylvester(const Mat& a, const Mat& xi, const Mat& rhs, RankTol tol) {
    if (a.rows() != a.cols()) throw DimensionMismatch("solve_sylvester: a must be square");
    if (xi.rows() != xi.cols()) throw DimensionMismatch("solve_sylvester: xi must be square");
    if (rhs.rows() != a.rows() || rhs.cols() != xi.rows())
        throw DimensionMismatch("solve_sylvester: rhs must be rows(a) x rows(xi)");
    const Index n = a.rows(), q = xi.rows();
    Mat coeff = kron(Mat::Identity(q, q), a) - kron(xi.transpose(), Mat::Identity(n, n));
    auto svd = full_svd(coeff);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(s.size() - 1) <= tol.cutoff(coeff.rows(), coeff.cols()) * s(0))
        throw SharedEigenvalue("solve_sylvester: a and xi share an eigenvalue");
    Vec x = svd.solve(-vec(rhs));
    return unvec(x, n, q);
}

bool spectra_disjoint(const Mat& a, const Mat& xi, RankTol tol) {
    if (a.rows() != a.cols() || xi.rows() != xi.cols())
        throw DimensionMismatch("spectra_disjoint: inputs must be square");
    Mat coeff = kron(Mat::Identity(xi.rows(), xi.rows()), a) -
                kron(xi.transpose(), Mat::Identity(a.rows(), a.rows()));
    Eigen::JacobiSVD<Mat> svd(coeff);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return true;
    return s(s.size() - 1) > tol.cutoff(coeff.rows(), coeff.cols()) * s(0);
}

}  // namespace lftid
