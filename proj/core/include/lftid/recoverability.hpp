#pragma once

// Decides whether the parameter vector is uniquely determined by a
// tangential response matrix.  The main test draws random (theta, phi)
// pairs and checks a vector inequality; two special-case rank tests and a
// pair of necessary conditions are available when their structural
// prerequisites hold.

#include <cstdint>
#include <vector>

#include "lftid/interpolation.hpp"
#include "lftid/lft_model.hpp"

namespace lftid {

struct SamplingPlan {
    int n_theta = 50;
    int n_phi = 50;
    double mu_t = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Verdict {
    recoverable_whp,
    locally_recoverable,
    not_recoverable,
    identifiability_failed,
};

const char* to_string(Verdict v);

struct RecoverabilityVerdict {
    Verdict verdict = Verdict::not_recoverable;
    std::vector<ThetaVec> failed_thetas;
    // Smallest observed ||lhs||^2 / ||phi||^2 over all samples.  +inf when
    // the test is vacuous (m_phi == 0), NaN when identifiability failed
    // before any sampling.
    double min_ratio = 0.0;
    // One entry per theta sample, for reporting.
    std::vector<double> per_theta_min_ratio;
    // Samples where the bracketed matrix had full row rank, leaving no
    // left null rows to test against.  Counted as failures when m_phi > 0.
    int vacuous_lhs_samples = 0;
    // Theta draws rejected for ill-posedness or a shared eigenvalue.
    int resampled_thetas = 0;
    // True when m_phi == 0 and the test passed with nothing to check.
    bool vacuous = false;
};

// Necessary condition: the parameter matrices must be linearly
// independent, i.e. the basis matrix Psi has full column rank.
bool check_identifiability(const LftPlant& plant, RankTol tol = {});

// Length of the free vector phi in the uniqueness test:
// width(right_null_basis([B_xv; D_yv])) * m_xi.
Index phi_dimension(const LftPlant& plant, const InterpSpec& spec);

// Left-hand side of the uniqueness inequality for one (theta, phi) pair.
// Returns an empty vector when the bracketed matrix has full row rank
// (no left null rows); callers decide how to score that case.
Vec uniqueness_lhs(const LftPlant& plant, const ThetaVec& theta,
                   const InterpSpec& spec, const Vec& phi, RankTol tol = {});

// Randomized protocol: n_theta uniform draws from the parameter box, each
// probed with n_phi uniform draws from [-1,1]^{m_phi}; a theta sample
// fails if any phi gives ||lhs||^2 <= mu_t ||phi||^2.
RecoverabilityVerdict check_recoverability_sampled(const LftPlant& plant,
                                                   const InterpSpec& spec,
                                                   const SamplingPlan& plan,
                                                   RankTol tol = {});

// Special-case rank test, applicable when D_zv annihilates the right null
// space of [B_xv; D_yv].  Throws InapplicableCase otherwise.
bool rank_test_null_aligned(const LftPlant& plant, const ThetaVec& theta,
                            const InterpSpec& spec, RankTol tol = {});

// Special-case rank test, applicable when C_zx X(theta) + D_zu Pi has full
// row rank.  Throws InapplicableCase otherwise.
bool rank_test_frr_output(const LftPlant& plant, const ThetaVec& theta,
                          const InterpSpec& spec, RankTol tol = {});

struct NecessaryConditions {
    bool cond1 = false;
    bool cond2 = false;
};

// Two conditions each necessary for unique determination: the bracketed
// matrix of the uniqueness test must not have full row rank for any phi
// (sampled), and a fixed stacked matrix must have full column rank.
NecessaryConditions necessary_conditions(const LftPlant& plant, const ThetaVec& theta,
                                         const InterpSpec& spec, int phi_samples,
                                         std::uint64_t seed, RankTol tol = {});

}  // namespace lftid
