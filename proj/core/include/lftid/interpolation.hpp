#pragma once

// Right tangential interpolation data for an LFT plant: given an
// interpolation pair (Xi, Pi), the matrix X solves
//     A(theta) X + B(theta) Pi = X Xi
// and the plant's response along the pair is Gamma = C(theta) X + D(theta) Pi.

#include <complex>

#include "lftid/lft_model.hpp"
#include "lftid/matops.hpp"

namespace lftid {

// Interpolation pair. xi is m_xi x m_xi, pi is m_u x m_xi.
struct InterpSpec {
    Mat xi;
    Mat pi;

    Index m_xi() const { return xi.rows(); }
    void validate(Index m_u) const;
};

enum class RtimProvenance { exact, estimate };

// Tangential response matrix, with a note of whether it came from a model
// or from data (and, in the latter case, the assumed noise scale).
struct Rtim {
    Mat gamma;
    RtimProvenance provenance = RtimProvenance::exact;
    double noise_std = 0.0;
};

// Solves A(theta) X = X Xi - B(theta) Pi for X.  Throws SharedEigenvalue
// when A(theta) and Xi have a common eigenvalue (the Sylvester operator is
// singular there).
Mat solve_x(const LftPlant& plant, const ThetaVec& theta, const InterpSpec& spec,
            RankTol tol = {});

// Gamma = C(theta) X + D(theta) Pi with X from solve_x.
Rtim compute_rtim(const LftPlant& plant, const ThetaVec& theta, const InterpSpec& spec,
                  RankTol tol = {});

// Response of the transfer function along one direction: for an eigenpair
// Xi v = lambda v this equals Gamma v when order == 0, and the derivative
// dH/ds(lambda) Pi v enters for order == 1 (Jordan chains of length two).
// order must be 0 or 1.
CVec derivative_oracle(const LftPlant& plant, const ThetaVec& theta,
                       std::complex<double> lambda, int order, const CVec& eta);

}  // namespace lftid
