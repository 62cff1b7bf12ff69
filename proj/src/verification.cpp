#include "faddeev/verification.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace faddeev {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

double two_pi_pow(int dim) { return std::pow(2.0 * kPi, dim); }

/// d/d(conj lambda) of k_j(lambda) pullback weights: conj(k_j'(lambda)).
std::array<Complex, 2> chart_pullback(const Complex lambda, double energy) {
    const double half_sqrt_e = 0.5 * std::sqrt(energy);
    const Complex inv2 = 1.0 / (lambda * lambda);
    const Complex k1p = (1.0 - inv2) * half_sqrt_e;
    const Complex k2p = kI * (-inv2 - 1.0) * half_sqrt_e;
    return {std::conj(k1p), std::conj(k2p)};
}

Complex eval_H_raw(const PotentialConfig& config, const CoefficientSolution& sol, const Vec& p) {
    Complex sum{0.0, 0.0};
    for (size_t j = 0; j < config.size(); ++j)
        sum += sol.c_gauge[j] * std::exp(kI * p.dot(config.points[j]));
    return sum / two_pi_pow(config.dimension);
}

Complex dbar_target_value(const PotentialConfig& config, DbarTarget which, const Vec& x_or_p,
                          const ComplexMomentum& k, const SolverOptions& opts) {
    const CoefficientSolution sol = solve_coefficients(config, k, opts);
    if (which == DbarTarget::psi) return eval_psi(config, sol, x_or_p, k, opts).psi;
    return eval_H_raw(config, sol, x_or_p);
}

void require_dbar_domain(const PotentialConfig& config, DbarTarget which, const Vec& x_or_p) {
    if (config.dimension != 2)
        throw ConfigError("dbar check implemented for d=2 (one-complex-dimensional variety)");
    if (which == DbarTarget::H && x_or_p.norm() != 0.0)
        throw ConfigError("dbar check for H requires p = 0 in d=2");
}

}  // namespace

double identity_rel_error(Complex lhs, Complex rhs) {
    return std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
}

Complex dbar_lhs_finite_difference(const PotentialConfig& config, DbarTarget which,
                                   const Vec& x_or_p, const LambdaCoord& lambda, double step,
                                   const SolverOptions& opts) {
    require_dbar_domain(config, which, x_or_p);
    const Energy E(config.energy);
    const auto F = [&](Complex lam) {
        return dbar_target_value(config, which, x_or_p, lambda_to_k(LambdaCoord(lam), E), opts);
    };
    const Complex lam = lambda.value;
    const Complex du = (F(lam + step) - F(lam - step)) / (2.0 * step);
    const Complex dv = (F(lam + kI * step) - F(lam - kI * step)) / (2.0 * step);
    return 0.5 * (du + kI * dv);
}

Complex dbar_rhs_integrand(const PotentialConfig& config, DbarTarget which, const Vec& x_or_p,
                           const LambdaCoord& lambda, const Vec& xi, const SolverOptions& opts) {
    require_dbar_domain(config, which, x_or_p);
    const Energy E(config.energy);
    const ComplexMomentum k = lambda_to_k(lambda, E);
    const auto pull = chart_pullback(lambda.value, config.energy);
    const Complex xi_weight = pull[0] * xi[0] + pull[1] * xi[1];

    const CoefficientSolution sol_k = solve_coefficients(config, k, opts);
    const Complex H_k = eval_H_raw(config, sol_k, -xi);
    const ComplexMomentum k_shift = k + xi;
    Complex target;
    if (which == DbarTarget::psi) {
        target = eval_psi(config, x_or_p, k_shift, opts).psi;
    } else {
        const CoefficientSolution sol_s = solve_coefficients(config, k_shift, opts);
        target = eval_H_raw(config, sol_s, x_or_p + xi);
    }
    return -2.0 * kPi * xi_weight * H_k * target;
}

Complex dbar_rhs_point_mass(const PotentialConfig& config, DbarTarget which, const Vec& x_or_p,
                            const LambdaCoord& lambda, const SolverOptions& opts) {
    require_dbar_domain(config, which, x_or_p);
    const Energy E(config.energy);
    const ComplexMomentum k = lambda_to_k(lambda, E);
    const Vec a = k.re, b = k.im;
    const double jac = 4.0 * std::abs(a[0] * b[1] - a[1] * b[0]);
    if (!(jac > 0.0))
        throw NumericalError("degenerate point-mass Jacobian (Re k and Im k collinear)");
    const Vec xi_star = a * -2.0;
    return dbar_rhs_integrand(config, which, x_or_p, lambda, xi_star, opts) / jac;
}

IdentityReport check_dbar(const PotentialConfig& config, const Vec& x_or_p,
                          const LambdaCoord& lambda, DbarTarget which, const DbarOptions& opts) {
    IdentityReport rep;
    rep.identity_id = which == DbarTarget::psi ? "dbar_psi" : "dbar_H";
    const Complex rhs = dbar_rhs_point_mass(config, which, x_or_p, lambda, opts.solver);
    const Complex lhs_h =
        dbar_lhs_finite_difference(config, which, x_or_p, lambda, opts.step, opts.solver);
    const Complex lhs_h2 =
        dbar_lhs_finite_difference(config, which, x_or_p, lambda, 0.5 * opts.step, opts.solver);
    const double err_h = std::abs(lhs_h - rhs);
    const double err_h2 = std::abs(lhs_h2 - rhs);
    rep.lhs = lhs_h2;
    rep.rhs = rhs;
    rep.rel_error = identity_rel_error(lhs_h2, rhs);
    rep.diagnostics["step"] = opts.step;
    rep.diagnostics["err_step"] = err_h;
    rep.diagnostics["err_half_step"] = err_h2;
    rep.diagnostics["observed_order"] =
        err_h2 > 0.0 ? std::log2(err_h / err_h2) : 2.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Limit relations
// ---------------------------------------------------------------------------

IdentityReport check_limit_relation(const PotentialConfig& config, const RealLimitMomentum& k,
                                    const Vec& x_or_l, LimitTarget which,
                                    const SolverOptions& opts) {
    config.validate();
    IdentityReport rep;
    rep.identity_id = which == LimitTarget::psi ? "limit_psi" : "limit_h";
    const double kn = k.k_prime.norm();
    const int d = config.dimension;

    const CoefficientSolution sol_gamma = solve_coefficients(config, k, opts);
    const auto h_gamma_at = [&](const Vec& xi) {
        Complex sum{0.0, 0.0};
        const Vec diff = k.k_prime - xi;
        for (size_t j = 0; j < config.size(); ++j)
            sum += sol_gamma.c_gauge[j] * std::exp(kI * diff.dot(config.points[j]));
        return sum / two_pi_pow(d);
    };
    const auto plus_value = [&](const Vec& xi) -> Complex {
        const CoefficientSolution sol_p = solve_coefficients(config, xi, opts);
        if (which == LimitTarget::psi) return eval_psi(config, sol_p, x_or_l, xi, opts).psi;
        Complex sum{0.0, 0.0};
        const Vec diff = xi - x_or_l;
        for (size_t j = 0; j < config.size(); ++j)
            sum += sol_p.c_gauge[j] * std::exp(kI * diff.dot(config.points[j]));
        return sum / two_pi_pow(d);
    };

    if (which == LimitTarget::psi) {
        rep.lhs = eval_psi(config, sol_gamma, x_or_l, k, opts).psi;
    } else {
        if (std::abs(x_or_l.norm2() - kn * kn) > 1e-8 * (1.0 + kn * kn))
            throw ConfigError("limit_h requires |l| = |k|");
        Complex sum{0.0, 0.0};
        const Vec diff = k.k_prime - x_or_l;
        for (size_t j = 0; j < config.size(); ++j)
            sum += sol_gamma.c_gauge[j] * std::exp(kI * diff.dot(config.points[j]));
        rep.lhs = sum / two_pi_pow(d);
    }

    Complex correction;
    if (d == 2) {
        const Vec g = k.gamma;
        const Vec gperp{-g[1], g[0]};
        const auto f = [&](double theta) -> Complex {
            const Vec xi = (g * std::cos(theta) + gperp * std::sin(theta)) * kn;
            return h_gamma_at(xi) * plus_value(xi);
        };
        const QuadResult q = integrate(f, -0.5 * kPi, 0.5 * kPi, opts.quad);
        if (!q.converged) throw NumericalError("limit-relation arc quadrature failed");
        correction = kPi * kI * q.value;
    } else {
        Vec e1{0, 0, 0}, e2{0, 0, 0};
        // frame with gamma as pole
        const Vec g = k.gamma;
        Vec seed = std::abs(g[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
        e1 = seed - g * seed.dot(g);
        e1 = e1 * (1.0 / e1.norm());
        e2 = Vec{g[1] * e1[2] - g[2] * e1[1], g[2] * e1[0] - g[0] * e1[2],
                 g[0] * e1[1] - g[1] * e1[0]};
        QuadratureSpec inner_spec = opts.quad.scaled(0.1);
        const auto outer = [&](double u) -> Complex {
            const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
            const auto inner = [&](double phi) -> Complex {
                const Vec xi =
                    (e1 * (s * std::cos(phi)) + e2 * (s * std::sin(phi)) + g * u) * kn;
                return h_gamma_at(xi) * plus_value(xi);
            };
            return integrate(inner, 0.0, 2.0 * kPi, inner_spec).value;
        };
        const QuadResult q = integrate(outer, 0.0, 1.0, opts.quad);
        if (!q.converged) throw NumericalError("limit-relation hemisphere quadrature failed");
        correction = kPi * kI * kn * q.value;
    }
    rep.rhs = plus_value(k.k_prime) + correction;
    rep.rel_error = identity_rel_error(rep.lhs, rep.rhs);
    rep.diagnostics["correction_abs"] = std::abs(correction);
    return rep;
}

// ---------------------------------------------------------------------------
// mu -> 1
// ---------------------------------------------------------------------------

IdentityReport check_mu_asymptotic(const PotentialConfig& config, const Vec& x,
                                   const MuAsymptoticPath& path, const std::vector<double>& t_seq,
                                   const SolverOptions& opts) {
    config.validate();
    if (t_seq.size() < 2) throw ConfigError("mu asymptotic needs >= 2 path points");
    IdentityReport rep;
    rep.identity_id = "mu_asymptotic";
    std::vector<std::pair<double, double>> devs;  // (t, |mu-1|)
    int skipped = 0;
    for (double t : t_seq) {
        ComplexMomentum k;
        if (config.dimension == 3) {
            k = build_k_3d(Energy(config.energy), path.a_dir, path.b_dir, t);
        } else {
            const double e = Energy(config.energy).require_positive();
            const double r = t / std::sqrt(e) + std::sqrt(t * t / e + 1.0);
            k = lambda_to_k(LambdaCoord(std::polar(r, path.lambda_angle)), Energy(config.energy));
        }
        try {
            const PsiValue v = eval_psi(config, x, k, opts);
            devs.emplace_back(t, std::abs(v.mu - 1.0));
        } catch (const SpectralSingularityError&) {
            ++skipped;  // path point at a singularity: skip and record
        }
    }
    if (devs.size() < 2) throw NumericalError("mu asymptotic: too few usable path points");
    bool monotone = true;
    for (size_t i = 1; i < devs.size(); ++i) monotone = monotone && devs[i].second < devs[i - 1].second;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [t, d] : devs) {
        const double lx = std::log(t), ly = std::log(std::max(d, 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double m = static_cast<double>(devs.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.lhs = devs.back().second;
    rep.rhs = 0.0;
    rep.rel_error = devs.back().second;
    rep.diagnostics["fitted_exponent"] = slope;
    rep.diagnostics["monotone"] = monotone ? 1.0 : 0.0;
    rep.diagnostics["skipped"] = skipped;
    for (size_t i = 0; i < devs.size(); ++i) {
        rep.diagnostics["t" + std::to_string(i)] = devs[i].first;
        rep.diagnostics["dev" + std::to_string(i)] = devs[i].second;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Helmholtz residual
// ---------------------------------------------------------------------------

namespace {

template <typename Momentum>
IdentityReport helmholtz_impl(const PotentialConfig& config, const Vec& x, const Momentum& k,
                              const std::vector<double>& h_seq, const SolverOptions& opts) {
    config.validate();
    if (h_seq.size() < 2) throw ConfigError("helmholtz check needs >= 2 spacings");
    double hmax = 0.0;
    for (double h : h_seq) hmax = std::max(hmax, h);
    for (const Vec& z : config.points)
        if ((x - z).norm() <= 10.0 * hmax)
            throw ConfigError("x too close to a potential point for the stencil");
    IdentityReport rep;
    rep.identity_id = "helmholtz";
    const CoefficientSolution sol = solve_coefficients(config, k, opts);
    const Complex psi0 = eval_psi(config, sol, x, k, opts).psi;
    const double scale = std::abs(config.energy * psi0);
    std::vector<double> residuals;
    for (double h : h_seq) {
        Complex lap{0.0, 0.0};
        for (int axis = 0; axis < config.dimension; ++axis) {
            Vec xp = x, xm = x;
            xp[axis] += h;
            xm[axis] -= h;
            lap += eval_psi(config, sol, xp, k, opts).psi - 2.0 * psi0 +
                   eval_psi(config, sol, xm, k, opts).psi;
        }
        lap /= h * h;
        residuals.push_back(std::abs(-lap - config.energy * psi0) / std::max(scale, 1e-300));
    }
    rep.lhs = residuals.back();
    rep.rhs = 0.0;
    rep.rel_error = residuals.back();
    for (size_t i = 0; i < h_seq.size(); ++i) {
        rep.diagnostics["h" + std::to_string(i)] = h_seq[i];
        rep.diagnostics["res" + std::to_string(i)] = residuals[i];
    }
    double order_min = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < h_seq.size(); ++i) {
        const double p = std::log(residuals[i] / residuals[i + 1]) /
                         std::log(h_seq[i] / h_seq[i + 1]);
        rep.diagnostics["order" + std::to_string(i)] = p;
        order_min = std::min(order_min, p);
    }
    rep.diagnostics["observed_order"] = order_min;
    return rep;
}

}  // namespace

IdentityReport check_helmholtz(const PotentialConfig& config, const Vec& x,
                               const ComplexMomentum& k, const std::vector<double>& h_seq,
                               const SolverOptions& opts) {
    return helmholtz_impl(config, x, k, h_seq, opts);
}

IdentityReport check_helmholtz(const PotentialConfig& config, const Vec& x,
                               const RealLimitMomentum& k, const std::vector<double>& h_seq,
                               const SolverOptions& opts) {
    return helmholtz_impl(config, x, k, h_seq, opts);
}

IdentityReport check_helmholtz(const PotentialConfig& config, const Vec& x, const Vec& k_real,
                               const std::vector<double>& h_seq, const SolverOptions& opts) {
    return helmholtz_impl(config, x, k_real, h_seq, opts);
}

}  // namespace faddeev
