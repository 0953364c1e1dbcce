// Microbenchmarks for the hot paths of the core library: the Sylvester
// solve behind every response-matrix evaluation, the residual/gradient
// pair driving the recovery iteration, the proximal step, and one full
// (shortened) recovery plus a reduced sampling run for end-to-end scale.
#include <benchmark/benchmark.h>

#include <cstdint>

#include "lftid/experiment.hpp"
#include "lftid/interpolation.hpp"
#include "lftid/matops.hpp"
#include "lftid/recoverability.hpp"
#include "lftid/recovery.hpp"
#include "lftid/rng.hpp"

using namespace lftid;

namespace {

Mat random_mat(Rng& rng, Index rows, Index cols, double scale = 1.0) {
    Mat m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = scale * rng.normal();
    return m;
}

// Shifted so that a and xi have disjoint spectra regardless of the draw.
struct SylvesterCase {
    Mat a, xi, rhs;
};

SylvesterCase sylvester_case(Index n, std::uint64_t seed) {
    Rng rng(seed);
    SylvesterCase c;
    c.a = random_mat(rng, n, n) - 6.0 * Mat::Identity(n, n);
    c.xi = random_mat(rng, n, n) + 6.0 * Mat::Identity(n, n);
    c.rhs = random_mat(rng, n, n);
    return c;
}

struct RecoverySetup {
    LftPlant plant;
    InterpSpec spec;
    Rtim rtim;
    RecoveryProblem prob;
    ThetaVec theta;
    AlphaVec alpha;
    Mat r_in;
    RecoveryConfig cfg;
};

RecoverySetup recovery_setup() {
    RecoverySetup s;
    s.plant = build_example_plant();
    s.spec = build_xi_designs(-0.5, 4.48, 4.48, 6.4).spec1;
    s.theta = ExamplePlantParams{}.theta();
    s.rtim = compute_rtim(s.plant, s.theta, s.spec);
    s.prob = build_problem(s.plant, s.spec, s.rtim);
    s.cfg.init_theta = ThetaVec(2);
    s.cfg.init_theta << 1.0, 10.0;
    s.alpha = init_alpha_ls(s.prob, s.cfg.init_theta);
    s.r_in = prox_rin(eval_r(s.cfg.init_theta, s.alpha), s.cfg.lambda2);
    return s;
}

}  // namespace

static void BM_SolveSylvester(benchmark::State& state) {
    const auto c = sylvester_case(state.range(0), 42);
    for (auto _ : state) {
        Mat x = solve_sylvester(c.a, c.xi, c.rhs);
        benchmark::DoNotOptimize(x.data());
    }
    state.SetComplexityN(state.range(0));
}
// The solver works on the dense Kronecker form, so the cost grows with the
// sixth power of the state count; plants in scope stay below ~10 states.
BENCHMARK(BM_SolveSylvester)->RangeMultiplier(2)->Range(2, 16)->Complexity();

static void BM_ComputeRtim(benchmark::State& state) {
    const LftPlant plant = build_example_plant();
    const InterpSpec spec = build_xi_designs(-0.5, 4.48, 4.48, 6.4).spec0;
    const ThetaVec theta = ExamplePlantParams{}.theta();
    for (auto _ : state) {
        Rtim rt = compute_rtim(plant, theta, spec);
        benchmark::DoNotOptimize(rt.gamma.data());
    }
}
BENCHMARK(BM_ComputeRtim);

static void BM_ProxRin(benchmark::State& state) {
    Rng rng(7);
    const Index n = state.range(0);
    const Mat r = random_mat(rng, n, n, 2.0);
    for (auto _ : state) {
        Mat z = prox_rin(r, 0.5);
        benchmark::DoNotOptimize(z.data());
    }
}
BENCHMARK(BM_ProxRin)->RangeMultiplier(2)->Range(4, 32);

static void BM_EvalE(benchmark::State& state) {
    const auto s = recovery_setup();
    for (auto _ : state) {
        Vec e = eval_e(s.prob, s.theta, s.alpha);
        benchmark::DoNotOptimize(e.data());
    }
}
BENCHMARK(BM_EvalE);

static void BM_GradJ(benchmark::State& state) {
    const auto s = recovery_setup();
    for (auto _ : state) {
        Gradient g = grad_j(s.prob, s.cfg, s.theta, s.alpha, s.r_in);
        benchmark::DoNotOptimize(g.d_theta.data());
    }
}
BENCHMARK(BM_GradJ);

static void BM_RecoverIterations(benchmark::State& state) {
    auto s = recovery_setup();
    s.cfg.max_iter = static_cast<int>(state.range(0));
    s.cfg.eps_it = 0.0;  // run the full iteration count
    for (auto _ : state) {
        RecoveryResult res = recover(s.prob, s.cfg);
        benchmark::DoNotOptimize(res.theta_hat.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RecoverIterations)->Arg(10)->Arg(50)->Arg(200);

static void BM_RecoverabilitySampled(benchmark::State& state) {
    const LftPlant plant = build_example_plant();
    const InterpSpec spec = build_xi_designs(-0.5, 4.48, 4.48, 6.4).spec1;
    SamplingPlan plan;
    plan.n_theta = static_cast<int>(state.range(0));
    plan.n_phi = static_cast<int>(state.range(0));
    plan.seed = 2026;
    for (auto _ : state) {
        RecoverabilityVerdict v = check_recoverability_sampled(plant, spec, plan);
        benchmark::DoNotOptimize(v.min_ratio);
    }
}
BENCHMARK(BM_RecoverabilitySampled)->Arg(5)->Arg(10);

BENCHMARK_MAIN();
