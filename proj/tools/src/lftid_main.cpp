// Command-line front end over the lftid library.  Every subcommand is a
// thin wrapper: parse flags, load inputs, call one library entry point,
// print or write the result.  Exit codes: 0 success, 1 invalid input,
// 2 numerical failure (a diagnostic file is written for the latter).

#include <complex>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lftid/experiment.hpp"
#include "lftid/interpolation.hpp"
#include "lftid/json_io.hpp"
#include "lftid/recoverability.hpp"
#include "lftid/recovery.hpp"
#include "lftid/robustness.hpp"

namespace fs = std::filesystem;
using namespace lftid;

namespace {

Vec parse_number_list(const std::string& text, const std::string& name) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError(name + ": cannot parse \"" + item + "\" as a number");
        }
    }
    if (values.empty()) throw ParseError(name + ": empty list");
    Vec v(static_cast<Index>(values.size()));
    for (Index i = 0; i < v.size(); ++i) v(i) = values[static_cast<std::size_t>(i)];
    return v;
}

// Accepts either a CSV file of numeric rows or an inline comma list
// interpreted as a single row.
Mat parse_matrix_arg(const std::string& arg, const std::string& name) {
    if (!fs::exists(arg)) {
        const Vec row = parse_number_list(arg, name);
        return row.transpose();
    }
    std::ifstream in(arg);
    if (!in) throw ParseError(name + ": cannot open " + arg);
    std::vector<Vec> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(parse_number_list(line, name));
    }
    if (rows.empty()) throw ParseError(name + ": no rows in " + arg);
    Mat m(static_cast<Index>(rows.size()), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols())
            throw DimensionMismatch(name + ": row " + std::to_string(r) +
                                    " has inconsistent length");
        m.row(static_cast<Index>(r)) = rows[r].transpose();
    }
    return m;
}

std::ostream& csv_stream(std::ostream& out) {
    out << std::setprecision(17);
    return out;
}

void print_matrix_csv(std::ostream& out, const Mat& m) {
    csv_stream(out);
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) out << ",";
            out << m(r, c);
        }
        out << "\n";
    }
}

void write_trace_csv(const std::string& path, const RecoveryResult& res) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    csv_stream(out) << "iter,J,e_norm,sigma1,sigma2\n";
    for (std::size_t k = 0; k < res.stats.size(); ++k) {
        const IterStat& st = res.stats[k];
        out << k << "," << st.cost << "," << st.e_norm << "," << st.sigma1 << ","
            << st.sigma2 << "\n";
    }
}

struct Args {
    std::string plant_path;
    std::string spec_path;
    std::string theta_text;
    std::string gamma_arg;
    std::string out_path;
    std::string trace_out;
    std::string ratios_out;
    std::string out_dir = "lftid_out";
    SamplingPlan plan;
    RecoveryConfig recovery;
    std::string init_text = "1,10";
    int trials = 300;
    double noise_std = 0.17;
    std::uint64_t seed = 2026;
    int search_samples = 0;
    bool no_project = false;
};

int run_rtim(const Args& a) {
    const LftPlant plant = load_plant(a.plant_path);
    const InterpSpec spec = load_interp_spec(a.spec_path);
    const ThetaVec theta = parse_number_list(a.theta_text, "--theta");
    const Rtim rtim = compute_rtim(plant, theta, spec);
    print_matrix_csv(std::cout, rtim.gamma);
    if (!a.out_path.empty()) {
        std::ofstream out(a.out_path);
        if (!out) throw ParseError("cannot write " + a.out_path);
        print_matrix_csv(out, rtim.gamma);
    }
    return 0;
}

int run_check(const Args& a) {
    const LftPlant plant = load_plant(a.plant_path);
    const InterpSpec spec = load_interp_spec(a.spec_path);
    const RecoverabilityVerdict verdict = check_recoverability_sampled(plant, spec, a.plan);
    std::cout << "verdict: " << to_string(verdict.verdict) << "\n";
    csv_stream(std::cout) << "min_ratio: " << verdict.min_ratio << "\n";
    std::cout << "failed_thetas: " << verdict.failed_thetas.size() << "\n";
    if (verdict.vacuous)
        std::cout << "note: no free direction to test, the pass is vacuous\n";
    if (verdict.vacuous_lhs_samples > 0)
        std::cout << "vacuous_lhs_samples: " << verdict.vacuous_lhs_samples << "\n";
    if (!a.ratios_out.empty()) {
        std::ofstream out(a.ratios_out);
        if (!out) throw ParseError("cannot write " + a.ratios_out);
        csv_stream(out) << "sample,min_ratio\n";
        for (std::size_t i = 0; i < verdict.per_theta_min_ratio.size(); ++i)
            out << i << "," << verdict.per_theta_min_ratio[i] << "\n";
    }
    return 0;
}

int run_recover(const Args& a) {
    const LftPlant plant = load_plant(a.plant_path);
    const InterpSpec spec = load_interp_spec(a.spec_path);
    Rtim rtim;
    rtim.gamma = parse_matrix_arg(a.gamma_arg, "--gamma");
    rtim.provenance = RtimProvenance::estimate;

    RecoveryConfig cfg = a.recovery;
    cfg.init_theta = parse_number_list(a.init_text, "--init");
    cfg.project_theta = !a.no_project;

    const RecoveryProblem prob = build_problem(plant, spec, rtim);
    const RecoveryResult res = recover(prob, cfg);

    csv_stream(std::cout) << "theta_hat:";
    for (Index i = 0; i < res.theta_hat.size(); ++i) std::cout << " " << res.theta_hat(i);
    std::cout << "\n";
    csv_stream(std::cout) << "final_cost: " << res.cost_trace.back() << "\n";
    std::cout << "iterations: " << res.iterations << "\n";
    std::cout << "converged: " << (res.converged ? "yes" : "no") << "\n";
    if (!res.t1_rank_ok)
        std::cout << "warning: reconstructed T_1 lost full column rank\n";
    if (!a.trace_out.empty()) write_trace_csv(a.trace_out, res);
    return 0;
}

int run_robustness(const Args& a) {
    const LftPlant plant = load_plant(a.plant_path);
    const InterpSpec spec = load_interp_spec(a.spec_path);
    const ThetaVec theta = parse_number_list(a.theta_text, "--theta");
    const RobustnessReport report = check_robustness(plant, theta, spec);
    std::cout << "robust: " << (report.robust ? "yes" : "no") << "\n";
    if (report.amplification)
        csv_stream(std::cout) << "amplification: " << *report.amplification << "\n";
    std::cout << "condition_matrix_rank: " << report.condition_matrix_rank << "\n";
    std::cout << "null_width: " << report.dims.null_width << "\n";
    if (report.degenerate)
        std::cout << "note: no admissible perturbation direction at all\n";
    return 0;
}

int run_reproduce(const Args& a) {
    fs::create_directories(a.out_dir);
    fs::create_directories(a.out_dir + "/cost_traces");

    const LftPlant plant = build_example_plant();
    const ExamplePlantParams params;
    const ThetaVec theta = params.theta();
    const XiDesigns designs = build_xi_designs(-0.05, 4.4799, 4.4179, 4.5306);

    RecoveryConfig cfg = a.recovery;
    cfg.init_theta = parse_number_list(a.init_text, "--init");

    if (a.search_samples > 0) {
        const OmegaSearchResult sr = search_omegas(plant, theta, -0.05, 4.0, 6.0,
                                                   a.search_samples, 1.7e-2, a.seed, cfg);
        csv_stream(std::cout) << "omega search: best single " << sr.omega1_best
                              << " (metric " << sr.metric1_best << "), best pair ("
                              << sr.omega_pair_best.first << ", "
                              << sr.omega_pair_best.second << ") (metric "
                              << sr.metric0_best << "), failures " << sr.failures << "\n";
    }

    // Magnitude of the frequency response at the true parameters.
    {
        std::ofstream out(a.out_dir + "/freq_response.csv");
        csv_stream(out) << "omega,magnitude\n";
        const int n_pts = 400;
        for (int i = 0; i < n_pts; ++i) {
            const double w = std::pow(10.0, -1.0 + 3.0 * i / (n_pts - 1.0));
            const CMat h = transfer_value(plant, theta, std::complex<double>(0.0, w));
            out << w << "," << std::abs(h(0, 0)) << "\n";
        }
    }

    // Cost traces of the noiseless recoveries, one file per design.
    {
        const Rtim g0 = compute_rtim(plant, theta, designs.spec0);
        const Rtim g1 = compute_rtim(plant, theta, designs.spec1);
        write_trace_csv(a.out_dir + "/cost_traces/design0.csv",
                        recover(build_problem(plant, designs.spec0, g0), cfg));
        write_trace_csv(a.out_dir + "/cost_traces/design1.csv",
                        recover(build_problem(plant, designs.spec1, g1), cfg));
    }

    const auto records = run_monte_carlo(plant, designs.spec0, designs.spec1, theta, cfg,
                                         a.trials, a.noise_std, a.seed);
    {
        std::ofstream out(a.out_dir + "/trials.csv");
        csv_stream(out) << "trial,eps1,eps2,eps3,eps4,eps_norm,"
                           "rel_err_zeta0,rel_err_zeta1,rel_err_omega0,rel_err_omega1,"
                           "r_zeta,r_omega,r_zeta_defined,r_omega_defined,"
                           "converged0,converged1\n";
        for (std::size_t t = 0; t < records.size(); ++t) {
            const TrialRecord& r = records[t];
            out << t;
            for (Index i = 0; i < r.eps.size(); ++i) out << "," << r.eps(i);
            out << "," << r.eps_norm << "," << r.rel_err_zeta0 << "," << r.rel_err_zeta1
                << "," << r.rel_err_omega0 << "," << r.rel_err_omega1 << "," << r.r_zeta
                << "," << r.r_omega << "," << r.r_zeta_defined << ","
                << r.r_omega_defined << "," << r.converged0 << "," << r.converged1
                << "\n";
        }
    }
    {
        const BinTable table = bin_table(records, default_bin_edges());
        std::ofstream out(a.out_dir + "/bins.csv");
        csv_stream(out) << "bin_lo,bin_hi,total,r_zeta_lt_1,r_omega_lt_1\n";
        for (std::size_t i = 0; i + 1 < table.edges.size(); ++i)
            out << table.edges[i] << "," << table.edges[i + 1] << "," << table.total[i]
                << "," << table.zeta_wins[i] << "," << table.omega_wins[i] << "\n";
        out << "overflow,," << table.overflow_total << "," << table.overflow_zeta_wins
            << "," << table.overflow_omega_wins << "\n";
        out << "sum,," << table.sum_total << "," << table.sum_zeta_wins << ","
            << table.sum_omega_wins << "\n";
    }
    std::cout << "wrote " << a.out_dir << "/trials.csv, bins.csv, freq_response.csv, "
              << "cost_traces/\n";
    return 0;
}

void write_diagnostic(const std::string& dir, const std::string& subcommand,
                      const std::string& what, std::string* path_out) {
    const std::string path =
        (dir.empty() ? fs::path("lftid_diagnostic.txt") : fs::path(dir) / "lftid_diagnostic.txt")
            .string();
    std::ofstream out(path);
    if (out) {
        out << "subcommand: " << subcommand << "\n";
        out << "error: " << what << "\n";
        *path_out = path;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tangential-response tools for LFT-structured models: compute "
                 "interpolation responses, decide parameter recoverability, recover "
                 "parameters, and quantify robustness to response errors."};
    app.require_subcommand(1);
    Args a;

    auto add_plant_spec = [&](CLI::App* cmd) {
        cmd->add_option("--plant", a.plant_path, "Plant description (JSON)")
            ->required();
        cmd->add_option("--spec", a.spec_path, "Interpolation pair file with Xi and Pi (JSON)")
            ->required();
    };

    CLI::App* rtim = app.add_subcommand(
        "rtim", "Compute the tangential response matrix at a given parameter value");
    add_plant_spec(rtim);
    rtim->add_option("--theta", a.theta_text, "Parameter values, comma separated")->required();
    rtim->add_option("--out", a.out_path, "Also write the matrix to this CSV file");

    CLI::App* check = app.add_subcommand(
        "check", "Randomized test whether the parameters are uniquely determined "
                 "by the tangential response");
    add_plant_spec(check);
    check->add_option("--n-theta", a.plan.n_theta, "Parameter samples")
        ->capture_default_str();
    check->add_option("--n-phi", a.plan.n_phi, "Free-direction samples per parameter sample")
        ->capture_default_str();
    check->add_option("--mu-t", a.plan.mu_t, "Pass threshold on |lhs|^2 / |phi|^2")
        ->capture_default_str();
    check->add_option("--seed", a.plan.seed, "Sampling seed")->capture_default_str();
    check->add_option("--ratios-out", a.ratios_out, "CSV of per-sample minimum ratios");

    CLI::App* rec = app.add_subcommand(
        "recover", "Recover parameters from a (possibly noisy) response matrix");
    add_plant_spec(rec);
    rec->add_option("--gamma", a.gamma_arg,
                    "Response matrix: CSV file of rows, or an inline comma list for a "
                    "single-output plant")
        ->required();
    rec->add_option("--lambda1", a.recovery.lambda1, "Coupling penalty weight")
        ->capture_default_str();
    rec->add_option("--lambda2", a.recovery.lambda2, "Rank penalty weight")
        ->capture_default_str();
    rec->add_option("--step", a.recovery.step, "Gradient step size")->capture_default_str();
    rec->add_option("--eps", a.recovery.eps_it, "Stop when the cost change falls below this")
        ->capture_default_str();
    rec->add_option("--max-iter", a.recovery.max_iter, "Iteration cap")->capture_default_str();
    rec->add_option("--init", a.init_text, "Initial parameter values, comma separated")
        ->capture_default_str();
    rec->add_option("--seed", a.recovery.seed, "Reserved for randomized variants")
        ->capture_default_str();
    rec->add_flag("--no-project", a.no_project,
                  "Do not clamp iterates onto the parameter box");
    rec->add_option("--trace-out", a.trace_out,
                    "CSV of per-iteration cost, residual norm and singular values");

    CLI::App* rob = app.add_subcommand(
        "robustness", "First-order sensitivity of recovery to response errors");
    add_plant_spec(rob);
    rob->add_option("--theta", a.theta_text, "Parameter values, comma separated")->required();

    CLI::App* repro = app.add_subcommand(
        "reproduce-example",
        "Run the bundled fourth-order example end to end: noiseless recoveries, "
        "a Monte-Carlo noise study, and the binned design comparison");
    repro->add_option("--trials", a.trials, "Monte-Carlo trials")->capture_default_str();
    repro->add_option("--noise-std", a.noise_std, "Std of the multiplicative response noise")
        ->capture_default_str();
    repro->add_option("--seed", a.seed, "Noise seed")->capture_default_str();
    repro->add_option("--out-dir", a.out_dir, "Output directory")->capture_default_str();
    repro->add_option("--search-omegas", a.search_samples,
                      "Also search this many random interpolation frequencies in [4, 6]")
        ->capture_default_str();
    repro->add_option("--lambda1", a.recovery.lambda1, "Coupling penalty weight")
        ->capture_default_str();
    repro->add_option("--lambda2", a.recovery.lambda2, "Rank penalty weight")
        ->capture_default_str();
    repro->add_option("--step", a.recovery.step, "Gradient step size")->capture_default_str();
    repro->add_option("--max-iter", a.recovery.max_iter, "Iteration cap per recovery")
        ->capture_default_str();
    repro->add_option("--init", a.init_text, "Initial parameter values")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    try {
        if (rtim->parsed()) return run_rtim(a);
        if (check->parsed()) return run_check(a);
        if (rec->parsed()) return run_recover(a);
        if (rob->parsed()) return run_robustness(a);
        if (repro->parsed()) return run_reproduce(a);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DimensionOrder& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SizeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::string dump_path;
        write_diagnostic(repro->parsed() ? a.out_dir : "", subcommand, e.what(), &dump_path);
        std::cerr << "numerical failure: " << e.what() << "\n";
        if (!dump_path.empty()) std::cerr << "diagnostic written to " << dump_path << "\n";
        return 2;
    }
    return 0;
}
