#include "lftid/recovery.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace lftid {

AlphaVec AlphaVec::zero(const RecoveryDims& dims) {
    AlphaVec a;
    a.alpha_t = Vec::Zero(dims.width_t);
    a.alpha_s = Vec::Zero(dims.width_s);
    a.alpha_t_i.assign(static_cast<std::size_t>(dims.m_theta), Vec::Zero(dims.width_t));
    a.alpha_s_i.assign(static_cast<std::size_t>(dims.m_theta), Vec::Zero(dims.width_s));
    return a;
}

Vec AlphaVec::flatten() const {
    Index n = alpha_t.size() + alpha_s.size();
    for (const Vec& v : alpha_t_i) n += v.size();
    for (const Vec& v : alpha_s_i) n += v.size();
    Vec out(n);
    Index at = 0;
    out.segment(at, alpha_t.size()) = alpha_t;
    at += alpha_t.size();
    out.segment(at, alpha_s.size()) = alpha_s;
    at += alpha_s.size();
    for (const Vec& v : alpha_t_i) {
        out.segment(at, v.size()) = v;
        at += v.size();
    }
    for (const Vec& v : alpha_s_i) {
        out.segment(at, v.size()) = v;
        at += v.size();
    }
    return out;
}

void AlphaVec::validate(const RecoveryDims& dims) const {
    const auto m = static_cast<std::size_t>(dims.m_theta);
    if (alpha_t.size() != dims.width_t || alpha_s.size() != dims.width_s ||
        alpha_t_i.size() != m || alpha_s_i.size() != m)
        throw DimensionMismatch("alpha: block sizes do not match the problem dimensions");
    for (const Vec& v : alpha_t_i)
        if (v.size() != dims.width_t)
            throw DimensionMismatch("alpha_t_i: block sizes do not match the problem dimensions");
    for (const Vec& v : alpha_s_i)
        if (v.size() != dims.width_s)
            throw DimensionMismatch("alpha_s_i: block sizes do not match the problem dimensions");
}

void RecoveryConfig::validate(Index m_theta) const {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw DimensionMismatch("RecoveryConfig: lambda1 and lambda2 must be positive");
    if (!(step > 0.0))
        throw DimensionMismatch("RecoveryConfig: step must be positive");
    if (!(eps_it > 0.0) && eps_it != 0.0)
        throw DimensionMismatch("RecoveryConfig: eps_it must be nonnegative");
    if (max_iter < 1)
        throw DimensionMismatch("RecoveryConfig: max_iter must be at least 1");
    if (init_theta.size() != m_theta)
        throw DimensionMismatch("RecoveryConfig: init_theta length must equal the parameter count");
}

ConsistencyResult check_consistency(const LftPlant& plant, const ThetaVec& theta,
                                    const InterpSpec& spec, const Rtim& rtim,
                                    double res_tol, RankTol tol) {
    spec.validate(plant.m_u());
    if (plant.m_x() < spec.m_xi())
        throw DimensionOrder("check_consistency: m_x must be at least m_xi");
    if (rtim.gamma.rows() != plant.m_y() || rtim.gamma.cols() != spec.m_xi())
        throw DimensionMismatch("Gamma: must be m_y x m_xi");

    const StateSpace ss = assemble_system(plant, theta);
    ConsistencyResult out;
    out.t1 = solve_sylvester(ss.a, spec.xi, ss.b * spec.pi, tol);
    out.residual = (ss.c * out.t1 + ss.d * spec.pi - rtim.gamma).norm();
    const bool fcr = rank(out.t1, tol) == spec.m_xi();
    out.consistent = fcr && out.residual <= res_tol * std::max(1.0, rtim.gamma.norm());
    return out;
}

RecoveryProblem build_problem(const LftPlant& plant, const InterpSpec& spec,
                              const Rtim& rtim, RankTol tol) {
    plant.validate();
    spec.validate(plant.m_u());
    if (plant.m_x() < spec.m_xi())
        throw DimensionOrder("build_problem: m_x must be at least m_xi");
    if (rtim.gamma.rows() != plant.m_y() || rtim.gamma.cols() != spec.m_xi())
        throw DimensionMismatch("Gamma: must be m_y x m_xi");

    const Index m_x = plant.m_x(), m_y = plant.m_y(), m_v = plant.m_v();
    const Index m_xi = spec.m_xi();
    const Mat eye_xi = Mat::Identity(m_xi, m_xi);
    const Mat eye_v = Mat::Identity(m_v, m_v);

    Mat dg(m_x + m_y, m_v);
    dg << plant.b_xv, plant.d_yv;
    const Mat n_l = left_null_basis(dg, tol);
    const Mat n_r = right_null_basis(dg, tol);
    const Mat dg_pinv = pinv(dg, tol);

    Mat ac(m_x + m_y, m_x);
    ac << plant.a_xx, plant.c_yx;

    Mat pad(m_x + m_y, m_x);
    pad << Mat::Identity(m_x, m_x), Mat::Zero(m_y, m_x);

    RecoveryProblem pr;
    pr.upsilon_t = kron(eye_xi, pad);
    pr.upsilon_s = kron(spec.xi.transpose(), n_l) * pr.upsilon_t -
                   kron(eye_xi, Mat(n_l * ac));
    pr.upsilon_s_pinv = pinv(pr.upsilon_s, tol);
    pr.upsilon_s_null = right_null_basis(pr.upsilon_s, tol);

    Mat s_c(m_x + m_y, m_xi);
    s_c << plant.b_xu * spec.pi, plant.d_yu * spec.pi - rtim.gamma;

    const Vec t0 = pr.upsilon_s_pinv * vec(Mat(n_l * s_c));
    pr.t10 = unvec(t0, m_x, m_xi);

    const Mat k_mat = kron(spec.xi.transpose(), Mat::Identity(m_x + m_y, m_x + m_y)) *
                          pr.upsilon_t -
                      kron(eye_xi, ac);

    const Mat shrink0 = (plant.p0 * plant.d_zv - eye_v) * dg_pinv;
    const Mat w0t = kron(eye_xi, Mat(plant.p0 * plant.c_zx)) +
                    kron(eye_xi, shrink0) * k_mat;
    pr.gamma_vec = vec(Mat((eye_v - plant.p0 * plant.d_zv) * dg_pinv * (-s_c) -
                           plant.p0 * plant.d_zu * spec.pi)) -
                   w0t * t0;

    pr.wt0 = w0t * pr.upsilon_s_null;
    pr.ws0 = kron(eye_xi, Mat((plant.p0 * plant.d_zv - eye_v) * n_r));

    const Index m_theta = plant.m_theta();
    pr.w.reserve(static_cast<std::size_t>(m_theta));
    pr.wt.reserve(static_cast<std::size_t>(m_theta));
    pr.ws.reserve(static_cast<std::size_t>(m_theta));
    for (Index i = 0; i < m_theta; ++i) {
        const Mat& p_i = plant.p_basis[static_cast<std::size_t>(i)];
        const Mat wit = kron(eye_xi, Mat(p_i * plant.c_zx)) +
                        kron(eye_xi, Mat(p_i * plant.d_zv * dg_pinv)) * k_mat;
        pr.w.push_back(vec(Mat(p_i * (plant.d_zu * spec.pi +
                                      plant.d_zv * dg_pinv * (-s_c)))) +
                       wit * t0);
        pr.wt.push_back(wit * pr.upsilon_s_null);
        pr.ws.push_back(kron(eye_xi, Mat(p_i * plant.d_zv * n_r)));
    }

    pr.dims.m_x = m_x;
    pr.dims.m_xi = m_xi;
    pr.dims.m_u = plant.m_u();
    pr.dims.m_y = m_y;
    pr.dims.m_v = m_v;
    pr.dims.m_z = plant.m_z();
    pr.dims.m_theta = m_theta;
    pr.dims.width_t = pr.upsilon_s_null.cols();
    pr.dims.width_s = n_r.cols() * m_xi;
    pr.theta_box = plant.theta_box;
    return pr;
}

Vec eval_e(const RecoveryProblem& prob, const ThetaVec& theta, const AlphaVec& alpha) {
    if (theta.size() != prob.dims.m_theta)
        throw DimensionMismatch("theta: length must equal the parameter count");
    alpha.validate(prob.dims);
    Vec e = -prob.gamma_vec;
    for (Index i = 0; i < prob.dims.m_theta; ++i) {
        const auto k = static_cast<std::size_t>(i);
        e += theta(i) * prob.w[k];
        e += prob.wt[k] * alpha.alpha_t_i[k];
        e += prob.ws[k] * alpha.alpha_s_i[k];
    }
    e += prob.wt0 * alpha.alpha_t;
    e += prob.ws0 * alpha.alpha_s;
    return e;
}

Mat eval_t1(const RecoveryProblem& prob, const AlphaVec& alpha) {
    if (alpha.alpha_t.size() != prob.dims.width_t)
        throw DimensionMismatch("alpha_t: length must equal width_t");
    return prob.t10 + unvec(prob.upsilon_s_null * alpha.alpha_t,
                            prob.dims.m_x, prob.dims.m_xi);
}

Mat eval_r(const ThetaVec& theta, const AlphaVec& alpha) {
    const Index width_t = alpha.alpha_t.size();
    const Index width_s = alpha.alpha_s.size();
    const Index m_theta = theta.size();
    Mat r = Mat::Zero(1 + width_t + width_s, 1 + m_theta);
    r(0, 0) = 1.0;
    r.block(0, 1, 1, m_theta) = theta.transpose();
    r.block(1, 0, width_t, 1) = alpha.alpha_t;
    r.block(1 + width_t, 0, width_s, 1) = alpha.alpha_s;
    for (Index i = 0; i < m_theta; ++i) {
        const auto k = static_cast<std::size_t>(i);
        r.block(1, 1 + i, width_t, 1) = alpha.alpha_t_i[k];
        r.block(1 + width_t, 1 + i, width_s, 1) = alpha.alpha_s_i[k];
    }
    return r;
}

double cost_j(const RecoveryProblem& prob, const RecoveryConfig& cfg,
              const ThetaVec& theta, const AlphaVec& alpha, const Mat& r_in) {
    const Vec e = eval_e(prob, theta, alpha);
    const Mat r = eval_r(theta, alpha);
    Eigen::JacobiSVD<Mat> svd(r_in);
    const Vec sv = svd.singularValues();
    double tail = 0.0;
    for (Index i = 1; i < sv.size(); ++i) tail += sv(i);
    return 0.5 * e.squaredNorm() +
           cfg.lambda1 * (0.5 * (r - r_in).squaredNorm() + cfg.lambda2 * tail);
}

Gradient grad_j(const RecoveryProblem& prob, const RecoveryConfig& cfg,
                const ThetaVec& theta, const AlphaVec& alpha, const Mat& r_in) {
    const Vec e = eval_e(prob, theta, alpha);
    const Mat dr = eval_r(theta, alpha) - r_in;
    const Index width_t = prob.dims.width_t;
    const Index width_s = prob.dims.width_s;

    Gradient g;
    g.d_theta.resize(prob.dims.m_theta);
    g.d_alpha = AlphaVec::zero(prob.dims);
    for (Index i = 0; i < prob.dims.m_theta; ++i) {
        const auto k = static_cast<std::size_t>(i);
        g.d_theta(i) = prob.w[k].dot(e) + cfg.lambda1 * dr(0, 1 + i);
        g.d_alpha.alpha_t_i[k] = prob.wt[k].transpose() * e +
                                 cfg.lambda1 * dr.block(1, 1 + i, width_t, 1);
        g.d_alpha.alpha_s_i[k] = prob.ws[k].transpose() * e +
                                 cfg.lambda1 * dr.block(1 + width_t, 1 + i, width_s, 1);
    }
    g.d_alpha.alpha_t = prob.wt0.transpose() * e +
                        cfg.lambda1 * dr.block(1, 0, width_t, 1);
    g.d_alpha.alpha_s = prob.ws0.transpose() * e +
                        cfg.lambda1 * dr.block(1 + width_t, 0, width_s, 1);
    return g;
}

Mat prox_rin(const Mat& r, double lambda2, bool* saturated) {
    if (r.cols() < 1)
        throw DimensionMismatch("prox_rin: input needs at least one column");
    Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Mat u = svd.matrixU();
    Mat v = svd.matrixV();
    const Vec sv = svd.singularValues();

    // Fix each triple's sign so the leading left vector is reproducible.
    for (Index j = 0; j < sv.size(); ++j) {
        for (Index i = 0; i < u.rows(); ++i) {
            if (u(i, j) != 0.0) {
                if (u(i, j) < 0.0) {
                    u.col(j) = -u.col(j);
                    v.col(j) = -v.col(j);
                }
                break;
            }
        }
    }

    Mat out = Mat::Zero(r.rows(), r.cols());
    if (sv.size() == 0) {
        if (saturated) *saturated = false;
        return out;
    }
    out += sv(0) * u.col(0) * v.col(0).transpose();
    for (Index j = 1; j < sv.size(); ++j) {
        const double s = std::max(sv(j) - lambda2, 0.0);
        if (s > 0.0) out += s * u.col(j) * v.col(j).transpose();
    }
    if (saturated)
        *saturated = sv.size() == r.cols() && r.cols() >= 2 && sv(sv.size() - 1) >= lambda2;
    return out;
}

AlphaVec init_alpha_ls(const RecoveryProblem& prob, const ThetaVec& init_theta) {
    if (init_theta.size() != prob.dims.m_theta)
        throw DimensionMismatch("init_theta: length must equal the parameter count");
    AlphaVec a = AlphaVec::zero(prob.dims);
    if (prob.dims.width_s == 0) return a;
    Mat wsum = prob.ws0;
    Vec rhs = prob.gamma_vec;
    for (Index i = 0; i < prob.dims.m_theta; ++i) {
        const auto k = static_cast<std::size_t>(i);
        wsum += init_theta(i) * prob.ws[k];
        rhs -= init_theta(i) * prob.w[k];
    }
    a.alpha_s = pinv(wsum) * rhs;
    for (Index i = 0; i < prob.dims.m_theta; ++i)
        a.alpha_s_i[static_cast<std::size_t>(i)] = init_theta(i) * a.alpha_s;
    return a;
}

namespace {

void step_update(const RecoveryProblem& prob, ThetaVec& theta, AlphaVec& alpha,
                 const Gradient& g, double step, bool project) {
    theta -= step * g.d_theta;
    if (project) theta = prob.theta_box.clamp(theta);
    alpha.alpha_t -= step * g.d_alpha.alpha_t;
    alpha.alpha_s -= step * g.d_alpha.alpha_s;
    for (std::size_t k = 0; k < alpha.alpha_t_i.size(); ++k) {
        alpha.alpha_t_i[k] -= step * g.d_alpha.alpha_t_i[k];
        alpha.alpha_s_i[k] -= step * g.d_alpha.alpha_s_i[k];
    }
}

IterStat make_stat(const RecoveryProblem& prob, const ThetaVec& theta,
                   const AlphaVec& alpha, double cost) {
    IterStat st;
    st.cost = cost;
    st.e_norm = eval_e(prob, theta, alpha).norm();
    Eigen::JacobiSVD<Mat> svd(eval_r(theta, alpha));
    const Vec sv = svd.singularValues();
    st.sigma1 = sv.size() > 0 ? sv(0) : 0.0;
    st.sigma2 = sv.size() > 1 ? sv(1) : 0.0;
    return st;
}

}  // namespace

RecoveryResult recover(const RecoveryProblem& prob, const RecoveryConfig& cfg) {
    cfg.validate(prob.dims.m_theta);

    RecoveryResult res;
    ThetaVec theta = cfg.init_theta;
    AlphaVec alpha = init_alpha_ls(prob, theta);
    Mat r_in = eval_r(theta, alpha);

    double cost = cost_j(prob, cfg, theta, alpha, r_in);
    res.cost_trace.push_back(cost);
    res.stats.push_back(make_stat(prob, theta, alpha, cost));

    int it = 0;
    for (it = 1; it <= cfg.max_iter; ++it) {
        const Gradient g = grad_j(prob, cfg, theta, alpha, r_in);

        ThetaVec theta_next;
        AlphaVec alpha_next;
        Mat r_in_next;
        double cost_next = 0.0;
        bool sat = false;
        double step = cfg.step;
        for (int half = 0;; ++half) {
            theta_next = theta;
            alpha_next = alpha;
            step_update(prob, theta_next, alpha_next, g, step, cfg.project_theta);
            r_in_next = prox_rin(eval_r(theta_next, alpha_next), cfg.lambda2, &sat);
            cost_next = cost_j(prob, cfg, theta_next, alpha_next, r_in_next);
            if (!cfg.backtracking || cost_next <= cost || half >= 30) break;
            step *= 0.5;
        }

        theta = theta_next;
        alpha = alpha_next;
        r_in = r_in_next;
        res.prox_saturated = res.prox_saturated || sat;

        if (!std::isfinite(cost_next) || !theta.allFinite())
            throw NonFinite("recover: non-finite iterate at iteration " + std::to_string(it));

        res.cost_trace.push_back(cost_next);
        res.stats.push_back(make_stat(prob, theta, alpha, cost_next));
        const double delta = std::abs(cost_next - cost);
        cost = cost_next;
        if (delta <= cfg.eps_it) {
            res.converged = true;
            break;
        }
    }

    res.theta_hat = theta;
    res.alpha_hat = alpha;
    res.r_in = r_in;
    res.iterations = std::min(it, cfg.max_iter);
    res.t1_rank_ok = rank(eval_t1(prob, alpha)) == prob.dims.m_xi;
    return res;
}

}  // namespace lftid
