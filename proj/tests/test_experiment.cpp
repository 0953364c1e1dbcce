// Worked-example tests: plant construction, the two interpolation designs,
// the Monte-Carlo study plumbing, binning, and the frequency search.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <complex>
#include <fstream>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "lftid/experiment.hpp"

using namespace lftid;

namespace {

RecoveryConfig example_config() {
    RecoveryConfig cfg;
    cfg.lambda1 = 2.0;
    cfg.lambda2 = 10.0;
    cfg.step = 0.05;
    cfg.eps_it = 1e-10;
    cfg.max_iter = 2500;
    cfg.init_theta = ThetaVec(2);
    cfg.init_theta << 1.0, 10.0;
    return cfg;
}

std::vector<std::complex<double>> sorted_eigs(const Mat& m) {
    Eigen::ComplexEigenSolver<Mat> es(m);
    std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                          es.eigenvalues().data() + m.rows());
    std::sort(out.begin(), out.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

}  // namespace

TEST_CASE("example parameters: defaults and validation") {
    ExamplePlantParams p;
    CHECK_NOTHROW(p.validate());
    const ThetaVec t = p.theta();
    CHECK(t(0) == 0.1);
    CHECK(t(1) == 5.0);

    p.r_p1 = 0.0;
    CHECK_THROWS_AS(p.validate(), DimensionMismatch);
    p = ExamplePlantParams{};
    p.zeta_p = 0.0;
    CHECK_THROWS_AS(p.validate(), DimensionMismatch);
    p = ExamplePlantParams{};
    CHECK_THROWS_AS(build_example_plant(ExamplePlantParams{.r_p2 = -1.0}),
                    DimensionMismatch);
}

TEST_CASE("example plant blocks carry the factored-form coefficients") {
    const LftPlant pl = build_example_plant();
    CHECK(pl.m_x() == 4);
    CHECK(pl.m_u() == 1);
    CHECK(pl.m_y() == 1);
    CHECK(pl.m_v() == 2);
    CHECK(pl.m_z() == 3);
    CHECK(pl.m_theta() == 2);

    CHECK(pl.a_xx(0, 0) == -3.0);
    CHECK(pl.a_xx(0, 1) == 1.0);  // r_p1 - r_z
    CHECK(pl.a_xx(1, 1) == -5.0);
    CHECK(pl.b_xu(1, 0) == 6.0);  // the gain k
    Mat c_row(1, 4);
    c_row << -1.0, 1.0, 64.0, 3.2;  // omega_z^2 and 2 zeta_z omega_z
    CHECK(testutil::max_abs_diff(pl.c_yx, c_row) == 0.0);

    CHECK(pl.theta_box.lower(0) == 0.01);
    CHECK(pl.theta_box.upper(0) == 1.0);
    CHECK(pl.theta_box.lower(1) == 1.0);
    CHECK(pl.theta_box.upper(1) == 10.0);

    // Coefficients move with the parameters they encode.
    ExamplePlantParams q;
    q.k = 2.0;
    q.omega_z = 3.0;
    const LftPlant pl2 = build_example_plant(q);
    CHECK(pl2.b_xu(1, 0) == 2.0);
    CHECK(pl2.c_yx(0, 2) == 9.0);
}

TEST_CASE("interpolation designs: structure and spectra") {
    const double sigma = -0.05;
    const XiDesigns ds = build_xi_designs(sigma, 4.4799, 4.4179, 4.5306);

    REQUIRE(ds.spec0.xi.rows() == 4);
    REQUIRE(ds.spec1.xi.rows() == 4);
    Mat pi0(1, 4), pi1(1, 4);
    pi0 << 1, 1, 1, 1;
    pi1 << 1, 1, 0, 0;
    CHECK(testutil::max_abs_diff(ds.spec0.pi, pi0) == 0.0);
    CHECK(testutil::max_abs_diff(ds.spec1.pi, pi1) == 0.0);
    CHECK(ds.spec0.xi.block(0, 2, 2, 2).isZero());
    CHECK(ds.spec0.xi.block(2, 0, 2, 2).isZero());
    // The derivative design couples the two rotation blocks.
    CHECK(ds.spec1.xi(0, 2) == 1.0);
    CHECK(ds.spec1.xi(1, 3) == 1.0);
    CHECK(ds.spec1.xi.block(2, 0, 2, 2).isZero());

    const auto e0 = sorted_eigs(ds.spec0.xi);
    for (const auto& ev : e0) CHECK(ev.real() == doctest::Approx(sigma).epsilon(1e-12));
    CHECK(e0[0].imag() == doctest::Approx(-4.5306).epsilon(1e-12));
    CHECK(e0[1].imag() == doctest::Approx(-4.4179).epsilon(1e-12));
    CHECK(e0[2].imag() == doctest::Approx(4.4179).epsilon(1e-12));
    CHECK(e0[3].imag() == doctest::Approx(4.5306).epsilon(1e-12));

    const auto e1 = sorted_eigs(ds.spec1.xi);
    for (const auto& ev : e1) {
        CHECK(ev.real() == doctest::Approx(sigma).epsilon(1e-12));
        CHECK(std::abs(ev.imag()) == doctest::Approx(4.4799).epsilon(1e-12));
    }
    // One chain per conjugate eigenvalue: geometric multiplicity 1.
    using CMat = Eigen::MatrixXcd;
    const std::complex<double> lam(sigma, 4.4799);
    CMat shifted = ds.spec1.xi.cast<std::complex<double>>() -
                   lam * CMat::Identity(4, 4);
    Eigen::FullPivLU<CMat> lu(shifted);
    CHECK(lu.rank() == 3);
}

TEST_CASE("noiseless trials recover the true parameters on both designs") {
    const LftPlant pl = build_example_plant();
    const ThetaVec theta = ExamplePlantParams{}.theta();
    const XiDesigns ds = build_xi_designs(-0.05, 4.4799, 4.4179, 4.5306);
    const auto records = run_monte_carlo(pl, ds.spec0, ds.spec1, theta,
                                         example_config(), 2, 0.0, 1);
    REQUIRE(records.size() == 2);
    for (const TrialRecord& rec : records) {
        CHECK(rec.eps_norm == 0.0);
        CHECK(rec.eps.isZero());
        CHECK(rec.converged0);
        CHECK(rec.converged1);
        // Percent errors; the fixed-point gap of the iteration is ~1e-3 %.
        CHECK(rec.rel_err_zeta0 < 1e-1);
        CHECK(rec.rel_err_zeta1 < 1e-1);
        CHECK(rec.rel_err_omega0 < 1e-1);
        CHECK(rec.rel_err_omega1 < 1e-1);
    }
}

TEST_CASE("trial records are deterministic and internally consistent") {
    const LftPlant pl = build_example_plant();
    const ThetaVec theta = ExamplePlantParams{}.theta();
    const XiDesigns ds = build_xi_designs(-0.05, 4.4799, 4.4179, 4.5306);
    RecoveryConfig cfg = example_config();
    cfg.max_iter = 600;  // keep the unit test quick
    const auto a = run_monte_carlo(pl, ds.spec0, ds.spec1, theta, cfg, 3, 0.17, 99);
    const auto b = run_monte_carlo(pl, ds.spec0, ds.spec1, theta, cfg, 3, 0.17, 99);
    REQUIRE(a.size() == 3);
    REQUIRE(b.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].eps_norm == b[i].eps_norm);
        CHECK(a[i].rel_err_zeta1 == b[i].rel_err_zeta1);
        CHECK(a[i].r_zeta == b[i].r_zeta);
        CHECK(a[i].eps.size() == 4);
        if (a[i].r_zeta_defined)
            CHECK(a[i].r_zeta ==
                  doctest::Approx(a[i].rel_err_zeta1 / a[i].rel_err_zeta0)
                      .epsilon(1e-12));
        if (a[i].r_omega_defined)
            CHECK(a[i].r_omega ==
                  doctest::Approx(a[i].rel_err_omega1 / a[i].rel_err_omega0)
                      .epsilon(1e-12));
    }
    // Different seeds draw different noise.
    const auto c = run_monte_carlo(pl, ds.spec0, ds.spec1, theta, cfg, 1, 0.17, 100);
    CHECK(c[0].eps_norm != a[0].eps_norm);

    CHECK_THROWS_AS(run_monte_carlo(pl, ds.spec0, ds.spec1, theta, cfg, 0, 0.17, 1),
                    DimensionMismatch);
}

TEST_CASE("binning: membership, overflow and undefined ratios") {
    std::vector<TrialRecord> recs(5);
    recs[0].eps_norm = 0.5;  // first bin, zeta win, omega loss
    recs[0].r_zeta_defined = recs[0].r_omega_defined = true;
    recs[0].r_zeta = 0.5;
    recs[0].r_omega = 2.0;
    recs[1].eps_norm = 1.0;  // lands in the second bin: intervals are [lo, hi)
    recs[1].r_zeta_defined = recs[1].r_omega_defined = true;
    recs[1].r_zeta = 0.9;
    recs[1].r_omega = 0.9;
    recs[2].eps_norm = 1.5;  // second bin, ratios undefined
    recs[3].eps_norm = 2.0;  // beyond the last edge: overflow
    recs[3].r_zeta_defined = recs[3].r_omega_defined = true;
    recs[3].r_zeta = 0.1;
    recs[3].r_omega = 0.1;
    recs[4].eps_norm = 5.0;  // overflow, undefined
    const BinTable t = bin_table(recs, {0.0, 1.0, 2.0});

    REQUIRE(t.total.size() == 2);
    CHECK(t.total[0] == 1);
    CHECK(t.total[1] == 2);
    CHECK(t.zeta_wins[0] == 1);
    CHECK(t.omega_wins[0] == 0);
    CHECK(t.zeta_wins[1] == 1);
    CHECK(t.omega_wins[1] == 1);
    CHECK(t.overflow_total == 2);
    CHECK(t.overflow_zeta_wins == 1);
    CHECK(t.overflow_omega_wins == 1);
    CHECK(t.sum_total == 3);
    CHECK(t.sum_zeta_wins == 2);
    CHECK(t.sum_omega_wins == 1);
    CHECK(t.undefined_ratios == 2);

    CHECK_THROWS_AS(bin_table(recs, {0.0}), DimensionMismatch);
    CHECK_THROWS_AS(bin_table(recs, {0.0, 0.0}), DimensionMismatch);
}

TEST_CASE("reference bin edges and the bundled study table") {
    const std::vector<double> edges = default_bin_edges();
    const std::vector<double> expect{0.05, 0.20, 0.35, 0.50, 0.65, 1.00};
    REQUIRE(edges.size() == expect.size());
    for (std::size_t i = 0; i < edges.size(); ++i)
        CHECK(edges[i] == doctest::Approx(expect[i]).epsilon(1e-15));

    std::ifstream in(testutil::fixture("table1.csv"));
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));  // header
    int total = 0, zeta = 0, omega = 0, rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        REQUIRE(vals.size() == 5);
        CHECK(vals[0] == doctest::Approx(edges[static_cast<std::size_t>(rows)]));
        CHECK(vals[1] == doctest::Approx(edges[static_cast<std::size_t>(rows) + 1]));
        total += static_cast<int>(vals[2]);
        zeta += static_cast<int>(vals[3]);
        omega += static_cast<int>(vals[4]);
        ++rows;
    }
    CHECK(rows == 5);
    CHECK(total == 300);
    CHECK(zeta == 187);
    CHECK(omega == 146);
}

TEST_CASE("frequency search stays in range and validates input") {
    const LftPlant pl = build_example_plant();
    const ThetaVec theta = ExamplePlantParams{}.theta();
    RecoveryConfig cfg = example_config();
    cfg.max_iter = 400;
    cfg.eps_it = 1e-8;

    const auto res = search_omegas(pl, theta, -0.05, 3.0, 6.0, 2, 0.1, 7, cfg);
    CHECK(res.omega1_best >= 3.0);
    CHECK(res.omega1_best <= 6.0);
    CHECK(res.omega_pair_best.first >= 3.0);
    CHECK(res.omega_pair_best.first <= 6.0);
    CHECK(res.omega_pair_best.second >= 3.0);
    CHECK(res.omega_pair_best.second <= 6.0);
    CHECK(res.metric1_best >= 0.0);
    CHECK(res.metric0_best >= 0.0);
    CHECK(std::isfinite(res.metric1_best));
    CHECK(std::isfinite(res.metric0_best));
    CHECK(res.failures >= 0);

    CHECK_THROWS_AS(search_omegas(pl, theta, -0.05, 6.0, 3.0, 2, 0.1, 7, cfg),
                    DimensionMismatch);
    CHECK_THROWS_AS(search_omegas(pl, theta, -0.05, 3.0, 6.0, 0, 0.1, 7, cfg),
                    DimensionMismatch);
}
