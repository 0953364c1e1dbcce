#pragma once

// Parameter recovery from a tangential response matrix.  The consistency
// equation is vectorized into an affine residual e(theta, alpha) built from
// constants that depend on the plant, the interpolation pair and Gamma; the
// coupling between theta and alpha is relaxed through an instrumental
// matrix R_in that is pulled toward rank one by a penalized proximal step.

#include <cstdint>
#include <optional>
#include <vector>

#include "lftid/interpolation.hpp"
#include "lftid/lft_model.hpp"

namespace lftid {

struct RecoveryDims {
    Index m_x = 0;
    Index m_xi = 0;
    Index m_u = 0;
    Index m_y = 0;
    Index m_v = 0;
    Index m_z = 0;
    Index m_theta = 0;
    Index width_t = 0;  // columns of upsilon_s_null
    Index width_s = 0;  // width(N_r) * m_xi
};

// All constants of the residual map.  Only t10, gamma_vec and w depend on
// Gamma; everything else is fixed by the plant and the interpolation pair.
struct RecoveryProblem {
    Mat upsilon_t;
    Mat upsilon_s;
    Mat upsilon_s_pinv;
    Mat upsilon_s_null;
    Mat t10;              // m_x x m_xi
    Vec gamma_vec;        // length m_xi * m_v
    std::vector<Vec> w;   // one per parameter
    Mat wt0;
    Mat ws0;
    std::vector<Mat> wt;
    std::vector<Mat> ws;
    RecoveryDims dims;
    ParamBox theta_box;
};

// Composite free variable.  Flatten order is fixed:
// [alpha_t; alpha_s; alpha_t_i...; alpha_s_i...].
struct AlphaVec {
    Vec alpha_t;
    Vec alpha_s;
    std::vector<Vec> alpha_t_i;
    std::vector<Vec> alpha_s_i;

    static AlphaVec zero(const RecoveryDims& dims);
    Vec flatten() const;
    void validate(const RecoveryDims& dims) const;
};

struct RecoveryConfig {
    double lambda1 = 2.0;
    double lambda2 = 10.0;
    double step = 0.05;      // fixed gradient step
    double eps_it = 1e-10;   // stop when |J_k - J_{k-1}| falls below this
    int max_iter = 2500;
    ThetaVec init_theta;
    std::uint64_t seed = 0;
    bool project_theta = true;  // clamp iterates onto the parameter box
    bool backtracking = false;  // halve the step while the cost increases

    void validate(Index m_theta) const;
};

// Per-iteration diagnostics, one entry per cost_trace entry.
struct IterStat {
    double cost = 0.0;
    double e_norm = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

struct RecoveryResult {
    ThetaVec theta_hat;
    AlphaVec alpha_hat;
    Mat r_in;
    std::vector<double> cost_trace;
    std::vector<IterStat> stats;
    bool converged = false;
    int iterations = 0;
    // The proximal step had no singular value below lambda2 to drop.
    bool prox_saturated = false;
    // rank(T_1(alpha_hat)) == m_xi, checked after the iteration ends.
    bool t1_rank_ok = false;
};

struct ConsistencyResult {
    bool consistent = false;
    Mat t1;
    double residual = 0.0;
};

// Tests whether Gamma is an exact response of the plant at theta: solves
// the state block for T_1, then checks the output block residual and that
// T_1 has full column rank.  Requires m_x >= m_xi.
ConsistencyResult check_consistency(const LftPlant& plant, const ThetaVec& theta,
                                    const InterpSpec& spec, const Rtim& rtim,
                                    double res_tol = 1e-8, RankTol tol = {});

// Assembles every constant of the residual map.  Requires m_x >= m_xi.
RecoveryProblem build_problem(const LftPlant& plant, const InterpSpec& spec,
                              const Rtim& rtim, RankTol tol = {});

// e(theta, alpha) = sum_i theta_i w_i + sum_i W_{t,i} alpha_t_i
//                 + sum_i W_{s,i} alpha_s_i + W_{t,0} alpha_t
//                 + W_{s,0} alpha_s - gamma_vec
Vec eval_e(const RecoveryProblem& prob, const ThetaVec& theta, const AlphaVec& alpha);

// T_1(alpha) = T_10 + unvec(upsilon_s_null * alpha_t).
Mat eval_t1(const RecoveryProblem& prob, const AlphaVec& alpha);

// R(theta, alpha): first row [1, theta'], first column stacks alpha_t and
// alpha_s, remaining columns stack alpha_t_i and alpha_s_i.
Mat eval_r(const ThetaVec& theta, const AlphaVec& alpha);

// J = 0.5 ||e||^2 + lambda1 (0.5 ||R - R_in||_F^2 + lambda2 sum_{i>=2} sigma_i(R_in))
double cost_j(const RecoveryProblem& prob, const RecoveryConfig& cfg,
              const ThetaVec& theta, const AlphaVec& alpha, const Mat& r_in);

struct Gradient {
    Vec d_theta;
    AlphaVec d_alpha;
};

// Gradient of the smooth part of J with respect to theta and alpha.
Gradient grad_j(const RecoveryProblem& prob, const RecoveryConfig& cfg,
                const ThetaVec& theta, const AlphaVec& alpha, const Mat& r_in);

// Minimizer of 0.5 ||r - Z||_F^2 + lambda2 (||Z||_* - u1' Z v1): keeps the
// leading singular triple of r, soft-thresholds the remaining singular
// values by lambda2.  saturated (optional) is set when every retained
// singular value was at or above lambda2, so nothing was dropped.
Mat prox_rin(const Mat& r, double lambda2, bool* saturated = nullptr);

// Least-squares initialization: alpha_s minimizing ||e(init_theta, alpha)||
// with the alpha_s_i blocks tied as init_theta_i * alpha_s; alpha_t zero.
AlphaVec init_alpha_ls(const RecoveryProblem& prob, const ThetaVec& init_theta);

// Alternating iteration: fixed-step gradient descent on (theta, alpha) with
// R_in from the previous proximal step, then the proximal update of R_in.
// Stops when the cost change falls below eps_it or at max_iter.
RecoveryResult recover(const RecoveryProblem& prob, const RecoveryConfig& cfg);

}  // namespace lftid
