// Command-line front end: evaluates eigenfunctions and Green functions,
// scans singular curves, runs cutoff-convergence studies and the identity
// verification suite.  All outputs are deterministic for fixed inputs.

#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "faddeev/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace faddeev;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitNumerical = 3;

struct MomentumFlags {
    std::vector<double> lambda;  // 1 or 2 numbers
    std::vector<double> k_re;
    std::vector<double> k_im;
    std::vector<double> a_dir;
    std::vector<double> b_dir;
    double b_norm = 0.0;
    std::vector<double> gamma;
    std::string regime = "auto";
};

void add_momentum_flags(CLI::App* cmd, MomentumFlags& f) {
    cmd->add_option("--lambda", f.lambda, "lambda chart coordinate (re [im]), d=2")->expected(1, 2);
    cmd->add_option("--k-re", f.k_re, "Re k components")->expected(2, 3);
    cmd->add_option("--k-im", f.k_im, "Im k components")->expected(2, 3);
    cmd->add_option("--a-dir", f.a_dir, "d=3 unit direction of Re k")->expected(3);
    cmd->add_option("--b-dir", f.b_dir, "d=3 unit direction of Im k")->expected(3);
    cmd->add_option("--b-norm", f.b_norm, "d=3 |Im k|");
    cmd->add_option("--gamma", f.gamma, "limit direction (gamma regime)")->expected(2, 3);
    cmd->add_option("--regime", f.regime, "complex|gamma|plus|auto")
        ->check(CLI::IsMember({"complex", "gamma", "plus", "auto"}));
}

Vec to_vec(const std::vector<double>& v) {
    if (v.size() == 2) return Vec{v[0], v[1]};
    if (v.size() == 3) return Vec{v[0], v[1], v[2]};
    throw ConfigError("expected 2 or 3 components");
}

struct ResolvedMomentum {
    std::string regime;  // complex|gamma|plus
    ComplexMomentum k;
    Vec k_real;
    std::optional<RealLimitMomentum> gamma_k;
};

ResolvedMomentum resolve_momentum(const MomentumFlags& f, double energy) {
    ResolvedMomentum out;
    if (!f.lambda.empty()) {
        const Complex lam{f.lambda[0], f.lambda.size() > 1 ? f.lambda[1] : 0.0};
        out.k = lambda_to_k(LambdaCoord(lam), Energy(energy));
    } else if (!f.a_dir.empty() || !f.b_dir.empty() || f.b_norm != 0.0) {
        if (f.a_dir.size() != 3 || f.b_dir.size() != 3 || !(f.b_norm > 0.0))
            throw ConfigError("d=3 momentum needs --a-dir, --b-dir and --b-norm > 0");
        out.k = build_k_3d(Energy(energy), to_vec(f.a_dir), to_vec(f.b_dir), f.b_norm);
    } else if (!f.k_re.empty()) {
        const Vec re = to_vec(f.k_re);
        const Vec im = f.k_im.empty() ? Vec::zero(re.dim) : to_vec(f.k_im);
        out.k = ComplexMomentum{re, im};
    } else {
        throw ConfigError("no momentum given: use --lambda, --k-re[/--k-im] or the d=3 flags");
    }
    out.k_real = out.k.re;
    std::string regime = f.regime;
    if (regime == "auto")
        regime = out.k.im_norm() > 1e-12 * (1.0 + out.k.re.norm()) ? "complex" : "plus";
    if (regime == "gamma") {
        if (f.gamma.empty()) throw ConfigError("gamma regime requires --gamma");
        out.gamma_k = RealLimitMomentum(out.k_real, to_vec(f.gamma));
    }
    if (regime == "complex" && !(out.k.im_norm() > 0.0))
        throw ConfigError("complex regime requires Im k != 0 (|lambda| != 1)");
    out.regime = regime;
    return out;
}

json complex_to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path);
    os << text << "\n";
}

PotentialConfig default_or_loaded_config(const std::string& config_path, double energy_flag,
                                         bool has_energy, int dim_hint) {
    if (!config_path.empty()) {
        PotentialConfig cfg = load_config_file(config_path);
        if (has_energy) cfg.energy = energy_flag;
        return cfg;
    }
    if (!has_energy) throw ConfigError("either --config or --energy is required");
    PotentialConfig cfg;
    cfg.dimension = dim_hint;
    cfg.energy = energy_flag;
    cfg.points = {Vec::zero(dim_hint)};
    cfg.alphas = {0.0};
    return cfg;
}

// --- verify suite ------------------------------------------------------------

struct VerifyCase {
    std::string name;
    bool pass = false;
    json detail;
};

std::vector<VerifyCase> run_verify_suite(const std::string& suite, double tol_scale,
                                         std::uint64_t seed) {
    std::vector<VerifyCase> out;
    SolverOptions opts;
    const auto want = [&](const std::string& s) { return suite == "all" || suite == s; };

    auto [cfg1, grid1] = figure_preset(1);
    PotentialConfig cfg3;
    cfg3.dimension = 3;
    cfg3.energy = 4.0;
    cfg3.points = {Vec{0.0, 0.0, 0.0}, Vec{0.8, 0.0, 0.3}};
    cfg3.alphas = {5.0, -3.0};
    PotentialConfig cfg3_single = cfg3;
    cfg3_single.points = {Vec{0.1, -0.2, 0.4}};
    cfg3_single.alphas = {2.5};

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    if (want("dbar")) {
        for (const Complex lam : {Complex{2.0, 0.3}, Complex{0.55, -0.4}}) {
            const Vec x{0.37, -0.22};
            IdentityReport rep = check_dbar(cfg1, x, LambdaCoord(lam), DbarTarget::psi);
            VerifyCase vc{"dbar_psi@" + format_double(lam.real()) + "," +
                              format_double(lam.imag()),
                          rep.pass(1e-4 * tol_scale), report_to_json(rep)};
            out.push_back(vc);
            IdentityReport reph = check_dbar(cfg1, Vec{0.0, 0.0}, LambdaCoord(lam), DbarTarget::H);
            out.push_back({"dbar_H@" + format_double(lam.real()) + "," + format_double(lam.imag()),
                           reph.pass(1e-4 * tol_scale), report_to_json(reph)});
        }
    }
    if (want("limits")) {
        {
            const RealLimitMomentum k{Vec{2.0, 0.0, 0.0}, Vec{0.0, 0.0, 1.0}};
            IdentityReport rep =
                check_limit_relation(cfg3_single, k, Vec{0.5, -0.3, 0.7}, LimitTarget::psi);
            out.push_back({"limit_psi_d3_n1", rep.pass(1e-6 * tol_scale), report_to_json(rep)});
        }
        {
            const double kn = std::sqrt(cfg1.energy);
            const RealLimitMomentum k{Vec{kn, 0.0}, Vec{0.0, 1.0}};
            IdentityReport rep = check_limit_relation(cfg1, k, Vec{0.4, 0.9}, LimitTarget::psi);
            out.push_back({"limit_psi_d2", rep.pass(1e-4 * tol_scale), report_to_json(rep)});
            IdentityReport reph = check_limit_relation(cfg1, k, Vec{0.0, kn}, LimitTarget::h);
            out.push_back({"limit_h_d2", reph.pass(1e-4 * tol_scale), report_to_json(reph)});
        }
    }
    if (want("asymptotic")) {
        MuAsymptoticPath path3;
        IdentityReport rep3 =
            check_mu_asymptotic(cfg3, Vec{0.3, 0.4, -0.2}, path3, {5, 10, 20, 40});
        const bool ok3 = rep3.diagnostics.at("fitted_exponent") <= -0.8 &&
                         rep3.diagnostics.at("monotone") == 1.0;
        out.push_back({"mu_asymptotic_d3", ok3, report_to_json(rep3)});
        MuAsymptoticPath path2;
        path2.lambda_angle = 0.4;
        IdentityReport rep2 = check_mu_asymptotic(cfg1, Vec{0.25, 0.15}, path2, {5, 10, 20, 40});
        out.push_back({"mu_asymptotic_d2", rep2.diagnostics.at("monotone") == 1.0,
                       report_to_json(rep2)});
    }
    if (want("helmholtz")) {
        const std::vector<double> hs{0.04, 0.02, 0.01};
        const ComplexMomentum k2 = lambda_to_k(LambdaCoord({1.6, 0.5}), Energy(cfg1.energy));
        IdentityReport r1 = check_helmholtz(cfg1, Vec{0.9, 1.1}, k2, hs);
        out.push_back({"helmholtz_complex_d2", r1.diagnostics.at("observed_order") >= 1.7,
                       report_to_json(r1)});
        const double kn = std::sqrt(cfg3.energy);
        const RealLimitMomentum kg{Vec{kn, 0.0, 0.0}, Vec{0.0, 0.0, 1.0}};
        IdentityReport r2 = check_helmholtz(cfg3, Vec{0.9, 0.8, -0.9}, kg, hs);
        out.push_back({"helmholtz_gamma_d3", r2.diagnostics.at("observed_order") >= 1.7,
                       report_to_json(r2)});
        IdentityReport r3 = check_helmholtz(cfg3, Vec{-0.8, 0.9, 0.8}, Vec{kn, 0.0, 0.0}, hs);
        out.push_back({"helmholtz_plus_d3", r3.diagnostics.at("observed_order") >= 1.7,
                       report_to_json(r3)});
    }
    if (want("reality")) {
        int fails = 0;
        double worst = 0.0;
        const int samples = 12;
        for (int s = 0; s < samples; ++s) {
            const bool d3 = s % 2 == 1;
            ComplexMomentum k;
            Vec x;
            if (d3) {
                Vec a{unit(rng), unit(rng), unit(rng)};
                a = a * (1.0 / a.norm());
                Vec b{unit(rng), unit(rng), unit(rng)};
                b = b - a * b.dot(a);
                b = b * (1.0 / b.norm());
                k = build_k_3d(Energy(3.0), a, b, 0.5 + std::abs(unit(rng)));
                x = Vec{unit(rng), unit(rng), unit(rng)} * 1.2;
            } else {
                k = lambda_to_k(LambdaCoord(std::polar(0.4 + 2.0 * std::abs(unit(rng)),
                                                       3.0 * unit(rng))),
                                Energy(3.0));
                x = Vec{unit(rng), unit(rng)} * 1.2;
            }
            if (x.norm() < 0.05) x = d3 ? Vec{0.3, 0.2, 0.1} : Vec{0.3, 0.2};
            if (std::abs(std::abs(k.im_norm()) ) < 1e-3) continue;
            const GreenEvaluation G = eval_G(x, k, opts.quad);
            const double imbound = 1e-6 * tol_scale * (1.0 + std::abs(G.value));
            worst = std::max(worst, std::abs(G.value.imag()) / imbound);
            if (std::abs(G.value.imag()) > imbound) ++fails;
        }
        out.push_back({"reality_G", fails == 0, json{{"samples", samples}, {"worst_ratio", worst}}});
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Faddeev eigenfunctions and scattering data for multipoint potentials"};
    app.require_subcommand(1);

    int threads = 0;
    if (const char* env = std::getenv("FADDEEV_THREADS")) threads = std::atoi(env);
    app.add_option("--threads", threads, "worker count (default: available parallelism)");

    std::string config_path, out_path;
    double energy_flag = 0.0;

    // eval ------------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "evaluate psi, mu and det A at a point");
    MomentumFlags eval_mom;
    std::vector<double> eval_x;
    add_momentum_flags(eval_cmd, eval_mom);
    eval_cmd->add_option("--config", config_path, "potential config JSON");
    auto* eval_energy = eval_cmd->add_option("--energy", energy_flag, "energy override");
    eval_cmd->add_option("--x", eval_x, "evaluation point")->expected(2, 3);
    eval_cmd->add_option("--out", out_path, "output file (default stdout)");

    // green -----------------------------------------------------------------
    auto* green_cmd = app.add_subcommand("green", "evaluate a Green function");
    MomentumFlags green_mom;
    std::vector<double> green_x;
    std::string green_which = "g";
    double green_energy = 0.0;
    add_momentum_flags(green_cmd, green_mom);
    green_cmd->add_option("--which", green_which, "g|G|gplus|ggamma")
        ->check(CLI::IsMember({"g", "G", "gplus", "ggamma"}));
    auto* green_energy_opt = green_cmd->add_option("--energy", green_energy, "energy (for --lambda)");
    green_cmd->add_option("--x", green_x, "evaluation point")->expected(2, 3)->required();
    green_cmd->add_option("--out", out_path, "output file (default stdout)");

    // curves / figures --------------------------------------------------------
    auto* curves_cmd = app.add_subcommand("curves", "scan det A over the lambda annulus");
    GridSpec grid;
    std::string grid_csv;
    double refine_tol = 1e-9;
    curves_cmd->add_option("--config", config_path, "potential config JSON")->required();
    curves_cmd->add_option("--r-min", grid.r_min, "annulus inner radius");
    curves_cmd->add_option("--r-max", grid.r_max, "annulus outer radius");
    curves_cmd->add_option("--n-r", grid.n_r, "radial nodes");
    curves_cmd->add_option("--n-theta", grid.n_theta, "angular nodes");
    curves_cmd->add_option("--refine-tol", refine_tol, "vertex |det A| tolerance");
    curves_cmd->add_option("--grid-csv", grid_csv, "also write the raw grid CSV");
    curves_cmd->add_option("--out", out_path, "curves JSON output");

    auto* figures_cmd = app.add_subcommand("figures", "curves for a published preset (1..4)");
    int preset_id = 1;
    figures_cmd->add_option("id", preset_id, "preset id")->required();
    figures_cmd->add_option("--n-r", grid.n_r, "radial nodes");
    figures_cmd->add_option("--n-theta", grid.n_theta, "angular nodes");
    figures_cmd->add_option("--refine-tol", refine_tol, "vertex |det A| tolerance");
    figures_cmd->add_option("--grid-csv", grid_csv, "also write the raw grid CSV");
    figures_cmd->add_option("--out", out_path, "curves JSON output");

    // converge ----------------------------------------------------------------
    auto* conv_cmd = app.add_subcommand("converge", "cutoff-model convergence study");
    MomentumFlags conv_mom;
    std::vector<double> conv_cutoffs = default_cutoff_sequence();
    add_momentum_flags(conv_cmd, conv_mom);
    conv_cmd->add_option("--config", config_path, "potential config JSON")->required();
    conv_cmd->add_option("--cutoffs", conv_cutoffs, "cutoff sequence");
    conv_cmd->add_option("--out", out_path, "report CSV output");

    // verify --------------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "run the identity verification suite");
    std::string suite = "all";
    double tol_scale = 1.0;
    std::uint64_t seed = 1234;
    verify_cmd->add_option("--suite", suite, "all|dbar|limits|asymptotic|helmholtz|reality")
        ->check(CLI::IsMember({"all", "dbar", "limits", "asymptotic", "helmholtz", "reality"}));
    verify_cmd->add_option("--tol-scale", tol_scale, "tolerance multiplier");
    verify_cmd->add_option("--seed", seed, "seed for randomized sampling");
    verify_cmd->add_option("--out", out_path, "report JSON output");

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (eval_cmd->parsed()) {
            PotentialConfig cfg = default_or_loaded_config(
                config_path, energy_flag, eval_energy->count() > 0,
                eval_mom.a_dir.empty() && eval_mom.k_re.size() != 3 ? 2 : 3);
            const ResolvedMomentum m = resolve_momentum(eval_mom, cfg.energy);
            if (eval_x.empty()) throw ConfigError("--x is required");
            const Vec x = to_vec(eval_x);
            json doc;
            doc["regime"] = m.regime;
            json kre = json::array(), kim = json::array();
            for (int i = 0; i < m.k.dim(); ++i) {
                kre.push_back(m.k.re[i]);
                kim.push_back(m.k.im[i]);
            }
            doc["k"] = {{"re", kre}, {"im", kim}};
            CoefficientSolution sol;
            PsiValue psi;
            if (m.regime == "complex") {
                sol = solve_coefficients(cfg, m.k);
                psi = eval_psi(cfg, sol, x, m.k);
            } else if (m.regime == "gamma") {
                sol = solve_coefficients(cfg, *m.gamma_k);
                psi = eval_psi(cfg, sol, x, *m.gamma_k);
            } else {
                sol = solve_coefficients(cfg, m.k_real);
                psi = eval_psi(cfg, sol, x, m.k_real);
            }
            doc["psi"] = complex_to_json(psi.psi);
            doc["mu"] = complex_to_json(psi.mu);
            doc["detA"] = complex_to_json(sol.detA);
            doc["condition"] = sol.condition_estimate;
            json cvec = json::array();
            for (const Complex& c : sol.c_gauge) cvec.push_back(complex_to_json(c));
            doc["c"] = cvec;
            write_output(out_path, doc.dump(2));
        } else if (green_cmd->parsed()) {
            const Vec x = to_vec(green_x);
            const int dim = x.dim;
            const ResolvedMomentum m = resolve_momentum(
                green_mom, green_energy_opt->count() ? green_energy : 0.0);
            GreenEvaluation ev;
            if (green_which == "g" || green_which == "G") {
                ev = green_which == "g" ? eval_g(x, m.k) : eval_G(x, m.k);
            } else if (green_which == "gplus") {
                ev = eval_g_plus(x, m.k_real);
            } else {
                if (green_mom.gamma.empty()) throw ConfigError("ggamma requires --gamma");
                ev = eval_g_gamma(x, RealLimitMomentum(m.k_real, to_vec(green_mom.gamma)));
            }
            json doc = {{"which", green_which},
                        {"dimension", dim},
                        {"value", complex_to_json(ev.value)},
                        {"abs_error_estimate", ev.abs_error_estimate},
                        {"method", ev.method == GreenEvaluation::Method::closed_form
                                       ? "closed-form"
                                       : ev.method == GreenEvaluation::Method::oracle
                                             ? "oracle"
                                             : "reduced-quadrature"}};
            write_output(out_path, doc.dump(2));
        } else if (curves_cmd->parsed() || figures_cmd->parsed()) {
            PotentialConfig cfg;
            std::optional<int> preset;
            if (figures_cmd->parsed()) {
                auto [pc, pg] = figure_preset(preset_id);
                cfg = pc;
                const GridSpec defaults{};
                if (grid.n_r == defaults.n_r) grid.n_r = pg.n_r;
                if (grid.n_theta == defaults.n_theta) grid.n_theta = pg.n_theta;
                grid.r_min = pg.r_min;
                grid.r_max = pg.r_max;
                preset = preset_id;
            } else {
                cfg = load_config_file(config_path);
            }
            const ScanGrid sg = scan_det_grid(cfg, grid);
            if (!grid_csv.empty()) {
                std::ofstream os(grid_csv);
                if (!os) throw ConfigError("cannot open grid CSV path");
                write_grid_csv(os, sg);
            }
            SingularCurveSet curves = extract_zero_curves(sg, cfg, {}, refine_tol);
            curves.preset = preset;
            write_output(out_path, curves_to_json(curves, cfg).dump(2));
        } else if (conv_cmd->parsed()) {
            PotentialConfig cfg = load_config_file(config_path);
            const ResolvedMomentum m = resolve_momentum(conv_mom, cfg.energy);
            if (m.regime != "complex")
                throw ConfigError("convergence study runs in the complex regime (Im k != 0)");
            const ConvergenceReport rep = convergence_study(cfg, m.k, conv_cutoffs);
            std::ostringstream os;
            write_convergence_csv(os, rep);
            os << "# fitted_exponent," << format_double(rep.fitted_exponent) << "\n";
            write_output(out_path, os.str());
        } else if (verify_cmd->parsed()) {
            const std::vector<VerifyCase> cases = run_verify_suite(suite, tol_scale, seed);
            json arr = json::array();
            bool all_ok = true;
            for (const VerifyCase& vc : cases) {
                all_ok = all_ok && vc.pass;
                json one = vc.detail;
                one["name"] = vc.name;
                one["pass"] = vc.pass;
                arr.push_back(one);
                std::cerr << (vc.pass ? "PASS " : "FAIL ") << vc.name << "\n";
            }
            write_output(out_path, arr.dump(2));
            if (!all_ok) return kExitVerifyFailed;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const SpectralSingularityError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
