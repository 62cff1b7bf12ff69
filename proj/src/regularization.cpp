#include "faddeev/regularization.hpp"

#include <cmath>
#include <numbers>

namespace faddeev {

namespace {

constexpr double kPi = std::numbers::pi;

double two_pi_pow(int dim) { return std::pow(2.0 * kPi, dim); }

}  // namespace

double epsilon_of_N(double alpha, double N, int dim) {
    if (!(N > 0.0)) throw ConfigError("epsilon_of_N requires N > 0");
    if (alpha == 0.0) return 0.0;
    const double den = dim == 3 ? 1.0 - alpha * N / (2.0 * kPi * kPi)
                                : 1.0 - alpha * std::log(N) / (2.0 * kPi);
    if (den == 0.0) {
        const double pole = dim == 3 ? 2.0 * kPi * kPi / alpha : std::exp(2.0 * kPi / alpha);
        throw ConfigError("coupling renormalization pole at N = " + std::to_string(pole));
    }
    return alpha / den;
}

double pole_proximity(double alpha, double N, int dim) {
    if (alpha == 0.0) return std::numeric_limits<double>::infinity();
    if (dim == 3) {
        const double pole = 2.0 * kPi * kPi / alpha;
        return pole > 0.0 ? std::abs(N - pole) / pole : std::numeric_limits<double>::infinity();
    }
    const double arg = 2.0 * kPi / alpha;
    if (arg > 700.0 || arg < -700.0) return std::numeric_limits<double>::infinity();
    const double pole = std::exp(arg);
    return std::abs(N - pole) / pole;
}

CutoffModel::CutoffModel(PotentialConfig cfg, double N) : config(std::move(cfg)), cutoff(N) {
    config.validate();
    if (!(N > 0.0)) throw ConfigError("cutoff must be positive");
    eps.reserve(config.size());
    for (double alpha : config.alphas) eps.push_back(epsilon_of_N(alpha, N, config.dimension));
}

CMatrix assemble_A_N(const CutoffModel& model, const ComplexMomentum& k,
                     const QuadratureSpec& spec) {
    if (!(k.im_norm() > 0.0)) throw ConfigError("assemble_A_N requires Im k != 0");
    const PotentialConfig& cfg = model.config;
    const int n = static_cast<int>(cfg.size());
    const double norm = two_pi_pow(cfg.dimension);
    CMatrix A(n);
    const Complex diag_integral = cutoff_integral(model.cutoff, k, cfg.dimension, spec);
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            const Complex integral =
                m == j ? diag_integral
                       : ball_integral(cfg.points[static_cast<size_t>(m)] -
                                           cfg.points[static_cast<size_t>(j)],
                                       model.cutoff, k, spec);
            const Complex val = model.eps[static_cast<size_t>(m)] * integral / norm;
            A.at(m, j) = (m == j ? 1.0 : 0.0) + val;
        }
    }
    return A;
}

std::vector<Complex> solve_c_N(const CutoffModel& model, const ComplexMomentum& k,
                               const QuadratureSpec& spec) {
    const CMatrix A = assemble_A_N(model, k, spec);
    const LUDecomposition lu = lu_factor(A);
    if (lu.singular) throw NumericalError("singular cutoff system A_N");
    std::vector<Complex> b;
    b.reserve(model.eps.size());
    for (double e : model.eps) b.emplace_back(e, 0.0);
    return lu.solve(std::move(b));
}

Complex eval_mu_N(const CutoffModel& model, const Vec& x, const ComplexMomentum& k,
                  const QuadratureSpec& spec) {
    const std::vector<Complex> c = solve_c_N(model, k, spec);
    const PotentialConfig& cfg = model.config;
    Complex mu{1.0, 0.0};
    for (size_t j = 0; j < cfg.size(); ++j) {
        if (c[j] == Complex{0.0, 0.0}) continue;
        const Vec d = x - cfg.points[j];
        const Complex integral = d.norm() > 0.0
                                     ? ball_integral(d, model.cutoff, k, spec)
                                     : cutoff_integral(model.cutoff, k, cfg.dimension, spec);
        mu -= c[j] * integral / two_pi_pow(cfg.dimension);
    }
    return mu;
}

std::vector<double> default_cutoff_sequence() { return {25.0, 50.0, 100.0, 200.0, 400.0}; }

ConvergenceReport convergence_study(const PotentialConfig& config, const ComplexMomentum& k,
                                    const std::vector<double>& cutoffs,
                                    const QuadratureSpec& spec) {
    config.validate();
    ConvergenceReport report;
    SolverOptions opts;
    opts.quad = spec;
    const CoefficientSolution limit = solve_coefficients(config, k, opts);
    report.c_limit = limit.c_gauge;
    double limit_norm = 0.0;
    for (const Complex& c : limit.c_gauge) limit_norm += std::norm(c);
    limit_norm = std::sqrt(limit_norm);

    report.points.resize(cutoffs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (size_t i = 0; i < cutoffs.size(); ++i) {
        ConvergencePoint pt;
        pt.cutoff = cutoffs[i];
        bool near_pole = false;
        for (double alpha : config.alphas)
            near_pole = near_pole || pole_proximity(alpha, cutoffs[i], config.dimension) < 0.05;
        if (near_pole) {
            pt.excluded = true;
        } else {
            const CutoffModel model(config, cutoffs[i]);
            const std::vector<Complex> c_n = solve_c_N(model, k, spec);
            double err = 0.0;
            for (size_t j = 0; j < c_n.size(); ++j) err += std::norm(c_n[j] - limit.c_gauge[j]);
            pt.err_abs = std::sqrt(err);
            pt.err_rel = limit_norm > 0.0 ? pt.err_abs / limit_norm : pt.err_abs;
        }
        report.points[i] = pt;
    }

    // least-squares slope on the log-log tail, dropping the smallest cutoff
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 1; i < report.points.size(); ++i) {
        const ConvergencePoint& p = report.points[i];
        if (!p.excluded && p.err_abs > 0.0)
            pts.emplace_back(std::log(p.cutoff), std::log(p.err_abs));
    }
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [lx, ly] : pts) {
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double m = static_cast<double>(pts.size());
        report.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        report.fit_valid = true;
    }
    return report;
}

}  // namespace faddeev
