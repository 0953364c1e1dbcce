// Dense real-matrix utilities the rest of the library is built on: ranks,
// orthonormal null-space bases, Moore-Penrose pseudoinverse, Kronecker
// products, vectorization, and Sylvester-type solves.
//
// All rank decisions go through RankTol. Empty matrices (zero rows or zero
// columns) are handled as natural limits so block formulas degrade without
// special-casing at call sites: the rank of an empty matrix is 0, its right
// null basis is the identity on its column space, and its pseudoinverse is
// the empty transpose.
#pragma once

#include <Eigen/Dense>

#include "lftid/errors.hpp"

namespace lftid {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;

// Relative singular-value cutoff for rank decisions. rel_tol == 0 selects
// the size-scaled default max(rows, cols) * eps * 64.
struct RankTol {
    double rel_tol = 0.0;

    // Effective relative cutoff for a matrix of the given shape.
    double cutoff(Index rows, Index cols) const;
};

// Number of singular values above cutoff * sigma_max (0 for a zero matrix).
Index rank(const Mat& m, RankTol tol = {});

// Orthonormal columns N with m * N = 0; width == cols(m) - rank(m).
Mat right_null_basis(const Mat& m, RankTol tol = {});

// Orthonormal rows L with L * m = 0; height == rows(m) - rank(m).
Mat left_null_basis(const Mat& m, RankTol tol = {});

// Moore-Penrose pseudoinverse via SVD truncated at the rank cutoff.
Mat pinv(const Mat& m, RankTol tol = {});

// Kronecker product. Throws SizeError when the result would be absurdly big.
Mat kron(const Mat& a, const Mat& b);

// Column-stacking vectorization and its inverse.
Vec vec(const Mat& m);
Mat unvec(const Vec& v, Index rows, Index cols);

struct LinearSolution {
    Vec particular;   // pinv(coeff) * rhs
    Mat null_basis;   // right_null_basis(coeff)
    bool consistent;  // residual below the tolerance-scaled bound
};

// Minimum-norm solution of coeff * x = rhs together with the homogeneous
// solution space and a consistency flag.
LinearSolution solve_general_linear(const Mat& coeff, const Vec& rhs,
                                    RankTol tol = {});

// Unique X with a * X - X * xi = -rhs, via the vectorized dense system
// (I (x) a - xi^T (x) I) vec(X) = -vec(rhs). Requires disjoint spectra;
// throws SharedEigenvalue when the vectorized coefficient is rank deficient.
Mat solve_sylvester(const Mat& a, const Mat& xi, const Mat& rhs, RankTol tol = {});

// True when a and xi share no eigenvalue, decided through the smallest
// singular value of (I (x) a - xi^T (x) I) rather than eigenvalue pairing.
bool spectra_disjoint(const Mat& a, const Mat& xi, RankTol tol = {});

}  // namespace lftid
