#include "faddeev/solver.hpp"

#include "faddeev/geometry.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace faddeev {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

double two_pi_pow(int dim) { return std::pow(2.0 * kPi, dim); }

std::vector<size_t> active_points(const PotentialConfig& config) {
    std::vector<size_t> idx;
    for (size_t j = 0; j < config.size(); ++j)
        if (config.alphas[j] != 0.0) idx.push_back(j);
    return idx;
}

Complex green_G_complex(const Vec& x, const ComplexMomentum& k, const SolverOptions& opts) {
    if (opts.cache) {
        const GreenEvaluation g = opts.cache->get_or_compute(x, k, opts.quad);
        if (!g.converged) throw NumericalError("Green evaluation did not converge");
        return std::exp(kI * k.dot(x)) * g.value;
    }
    const GreenEvaluation G = eval_G(x, k, opts.quad);
    if (!G.converged) throw NumericalError("Green evaluation did not converge");
    return G.value;
}

CoefficientSolution solve_assembled(const AssembledSystem& sys, size_t n_total,
                                    const SolverOptions& opts) {
    CoefficientSolution sol;
    sol.regime = sys.regime;
    sol.C.assign(n_total, Complex{0.0, 0.0});
    const int n = sys.A.n;
    if (n == 0) return sol;
    const LUDecomposition lu = lu_factor(sys.A);
    sol.detA = lu.determinant();
    const double scale = std::pow(sys.A.norm_inf(), n);
    if (lu.singular || std::abs(sol.detA) < opts.singularity_threshold * scale) {
        throw SpectralSingularityError(
            "momentum at or near a spectral singularity (|det A| below threshold)",
            std::abs(sol.detA), opts.singularity_threshold * scale);
    }
    sol.condition_estimate = condition_inf(sys.A, lu);
    const std::vector<Complex> c = lu.solve(sys.B);
    double resid = 0.0, bnorm = 0.0;
    for (int i = 0; i < n; ++i) {
        Complex r = -sys.B[static_cast<size_t>(i)];
        for (int j = 0; j < n; ++j) r += sys.A.at(i, j) * c[static_cast<size_t>(j)];
        resid = std::max(resid, std::abs(r));
        bnorm = std::max(bnorm, std::abs(sys.B[static_cast<size_t>(i)]));
    }
    sol.residual = bnorm > 0.0 ? resid / bnorm : resid;
    for (int i = 0; i < n; ++i) sol.C[sys.active[static_cast<size_t>(i)]] = c[static_cast<size_t>(i)];
    return sol;
}

void fill_c_gauge(CoefficientSolution& sol, const PotentialConfig& config,
                  const std::function<Complex(const Vec&)>& k_dot) {
    sol.c_gauge.assign(config.size(), Complex{0.0, 0.0});
    for (size_t j = 0; j < config.size(); ++j)
        sol.c_gauge[j] = std::exp(-kI * k_dot(config.points[j])) * sol.C[j];
}

}  // namespace

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::complex_k: return "complex";
        case Regime::gamma_limit: return "gamma";
        case Regime::classical_plus: return "plus";
    }
    return "?";
}

// --- assembly ---------------------------------------------------------------

AssembledSystem assemble_system(const PotentialConfig& config, const ComplexMomentum& k,
                                const SolverOptions& opts) {
    config.validate();
    if (k.dim() != config.dimension) throw ConfigError("momentum dimension mismatch");
    if (!(k.im_norm() > 0.0)) throw ConfigError("complex regime requires Im k != 0");
    AssembledSystem sys;
    sys.regime = Regime::complex_k;
    sys.dimension = config.dimension;
    sys.active = active_points(config);
    const int n = static_cast<int>(sys.active.size());
    sys.A = CMatrix(n);
    sys.B.resize(static_cast<size_t>(n));
    const double beta = k.im_norm();
    const double amod = k.re.norm();
    for (int m = 0; m < n; ++m) {
        const size_t jm = sys.active[static_cast<size_t>(m)];
        const double alpha = config.alphas[jm];
        sys.A.at(m, m) = config.dimension == 3
                             ? 1.0 / alpha - beta / (4.0 * kPi)
                             : 1.0 / alpha - std::log(amod + beta) / (2.0 * kPi);
        sys.B[static_cast<size_t>(m)] = std::exp(kI * k.dot(config.points[jm]));
        for (int j = 0; j < n; ++j) {
            if (j == m) continue;
            const size_t jj = sys.active[static_cast<size_t>(j)];
            sys.A.at(m, j) = -green_G_complex(config.points[jm] - config.points[jj], k, opts);
        }
    }
    return sys;
}

AssembledSystem assemble_system(const PotentialConfig& config, const RealLimitMomentum& k,
                                const SolverOptions& opts) {
    config.validate();
    if (k.dim() != config.dimension) throw ConfigError("momentum dimension mismatch");
    AssembledSystem sys;
    sys.regime = Regime::gamma_limit;
    sys.dimension = config.dimension;
    sys.active = active_points(config);
    const int n = static_cast<int>(sys.active.size());
    sys.A = CMatrix(n);
    sys.B.resize(static_cast<size_t>(n));
    const double kn = k.k_prime.norm();
    for (int m = 0; m < n; ++m) {
        const size_t jm = sys.active[static_cast<size_t>(m)];
        const double alpha = config.alphas[jm];
        sys.A.at(m, m) = config.dimension == 3 ? Complex{1.0 / alpha, 0.0}
                                               : Complex{1.0 / alpha - std::log(kn) / (2.0 * kPi), 0.0};
        sys.B[static_cast<size_t>(m)] = std::exp(kI * k.k_prime.dot(config.points[jm]));
        for (int j = 0; j < n; ++j) {
            if (j == m) continue;
            const size_t jj = sys.active[static_cast<size_t>(j)];
            const GreenEvaluation G =
                eval_G_gamma(config.points[jm] - config.points[jj], k, opts.quad);
            if (!G.converged) throw NumericalError("Green evaluation did not converge");
            sys.A.at(m, j) = -G.value;
        }
    }
    return sys;
}

AssembledSystem assemble_system(const PotentialConfig& config, const Vec& k_real,
                                const SolverOptions& opts) {
    config.validate();
    if (k_real.dim != config.dimension) throw ConfigError("momentum dimension mismatch");
    if (!(k_real.norm() > 0.0)) throw ConfigError("classical regime requires k != 0");
    AssembledSystem sys;
    sys.regime = Regime::classical_plus;
    sys.dimension = config.dimension;
    sys.active = active_points(config);
    const int n = static_cast<int>(sys.active.size());
    sys.A = CMatrix(n);
    sys.B.resize(static_cast<size_t>(n));
    const double kn = k_real.norm();
    for (int m = 0; m < n; ++m) {
        const size_t jm = sys.active[static_cast<size_t>(m)];
        const double alpha = config.alphas[jm];
        sys.A.at(m, m) =
            config.dimension == 3
                ? Complex{1.0 / alpha, kn / (4.0 * kPi)}
                : Complex{1.0 / alpha - 2.0 * std::log(kn) / (4.0 * kPi), 1.0 / 4.0};
        sys.B[static_cast<size_t>(m)] = std::exp(kI * k_real.dot(config.points[jm]));
        for (int j = 0; j < n; ++j) {
            if (j == m) continue;
            const size_t jj = sys.active[static_cast<size_t>(j)];
            const GreenEvaluation G =
                eval_G_plus(config.points[jm] - config.points[jj], k_real, opts.quad);
            if (!G.converged) throw NumericalError("Green evaluation did not converge");
            sys.A.at(m, j) = -G.value;
        }
    }
    return sys;
}

// --- solve -------------------------------------------------------------------

CoefficientSolution solve_coefficients(const PotentialConfig& config, const ComplexMomentum& k,
                                       const SolverOptions& opts) {
    const AssembledSystem sys = assemble_system(config, k, opts);
    CoefficientSolution sol = solve_assembled(sys, config.size(), opts);
    fill_c_gauge(sol, config, [&](const Vec& z) { return k.dot(z); });
    return sol;
}

CoefficientSolution solve_coefficients(const PotentialConfig& config, const RealLimitMomentum& k,
                                       const SolverOptions& opts) {
    const AssembledSystem sys = assemble_system(config, k, opts);
    CoefficientSolution sol = solve_assembled(sys, config.size(), opts);
    fill_c_gauge(sol, config, [&](const Vec& z) { return Complex{k.k_prime.dot(z), 0.0}; });
    return sol;
}

CoefficientSolution solve_coefficients(const PotentialConfig& config, const Vec& k_real,
                                       const SolverOptions& opts) {
    const AssembledSystem sys = assemble_system(config, k_real, opts);
    CoefficientSolution sol = solve_assembled(sys, config.size(), opts);
    fill_c_gauge(sol, config, [&](const Vec& z) { return Complex{k_real.dot(z), 0.0}; });
    return sol;
}

// --- eigenfunctions -----------------------------------------------------------

namespace {

void check_eval_point(const PotentialConfig& config, const Vec& x) {
    for (const Vec& z : config.points)
        if ((x - z).norm() == 0.0)
            throw ConfigError("psi is singular at the potential points: x must differ from z_j");
}

}  // namespace

PsiValue eval_psi(const PotentialConfig& config, const CoefficientSolution& sol, const Vec& x,
                  const ComplexMomentum& k, const SolverOptions& opts) {
    check_eval_point(config, x);
    Complex mu{1.0, 0.0};
    for (size_t j = 0; j < config.size(); ++j) {
        if (sol.C[j] == Complex{0.0, 0.0}) continue;
        const GreenEvaluation g = opts.cache ? opts.cache->get_or_compute(x - config.points[j], k, opts.quad)
                                             : eval_g(x - config.points[j], k, opts.quad);
        if (!g.converged) throw NumericalError("Green evaluation did not converge");
        mu += sol.c_gauge[j] * g.value;
    }
    return {std::exp(kI * k.dot(x)) * mu, mu};
}

PsiValue eval_psi(const PotentialConfig& config, const CoefficientSolution& sol, const Vec& x,
                  const RealLimitMomentum& k, const SolverOptions& opts) {
    check_eval_point(config, x);
    Complex mu{1.0, 0.0};
    for (size_t j = 0; j < config.size(); ++j) {
        if (sol.C[j] == Complex{0.0, 0.0}) continue;
        const GreenEvaluation g = eval_g_gamma(x - config.points[j], k, opts.quad);
        if (!g.converged) throw NumericalError("Green evaluation did not converge");
        mu += sol.c_gauge[j] * g.value;
    }
    return {std::exp(kI * k.k_prime.dot(x)) * mu, mu};
}

PsiValue eval_psi(const PotentialConfig& config, const CoefficientSolution& sol, const Vec& x,
                  const Vec& k_real, const SolverOptions& opts) {
    check_eval_point(config, x);
    Complex mu{1.0, 0.0};
    for (size_t j = 0; j < config.size(); ++j) {
        if (sol.C[j] == Complex{0.0, 0.0}) continue;
        const GreenEvaluation g = eval_g_plus(x - config.points[j], k_real, opts.quad);
        if (!g.converged) throw NumericalError("Green evaluation did not converge");
        mu += sol.c_gauge[j] * g.value;
    }
    return {std::exp(kI * k_real.dot(x)) * mu, mu};
}

PsiValue eval_psi(const PotentialConfig& config, const Vec& x, const ComplexMomentum& k,
                  const SolverOptions& opts) {
    return eval_psi(config, solve_coefficients(config, k, opts), x, k, opts);
}

PsiValue eval_psi(const PotentialConfig& config, const Vec& x, const RealLimitMomentum& k,
                  const SolverOptions& opts) {
    return eval_psi(config, solve_coefficients(config, k, opts), x, k, opts);
}

PsiValue eval_psi(const PotentialConfig& config, const Vec& x, const Vec& k_real,
                  const SolverOptions& opts) {
    return eval_psi(config, solve_coefficients(config, k_real, opts), x, k_real, opts);
}

// --- scattering data -----------------------------------------------------------

ScatteringData eval_h(const PotentialConfig& config, const ComplexMomentum& k,
                      const ComplexMomentum& l, const SolverOptions& opts) {
    if (!validate_pair_theta(k, l, Energy(config.energy)))
        throw ConfigError("(k,l) must satisfy Im k = Im l and k^2 = l^2 = E");
    if (!(k.im_norm() > 0.0)) throw ConfigError("h is defined off the real momenta (Im k != 0)");
    const CoefficientSolution sol = solve_coefficients(config, k, opts);
    Complex sum{0.0, 0.0};
    const Vec diff = k.re - l.re;  // Im parts cancel on Theta
    for (size_t j = 0; j < config.size(); ++j)
        sum += sol.c_gauge[j] * std::exp(kI * diff.dot(config.points[j]));
    return {ScatteringData::Kind::h, sum / two_pi_pow(config.dimension)};
}

ScatteringData eval_H(const PotentialConfig& config, const ComplexMomentum& k, const Vec& p,
                      const SolverOptions& opts) {
    const Complex constraint = 2.0 * k.dot(p) - p.norm2();
    if (std::abs(constraint) > 1e-8 * (1.0 + p.norm2() + k.abs2()))
        throw ConfigError("(k,p) must satisfy 2 k.p = p^2");
    const CoefficientSolution sol = solve_coefficients(config, k, opts);
    Complex sum{0.0, 0.0};
    for (size_t j = 0; j < config.size(); ++j)
        sum += sol.c_gauge[j] * std::exp(kI * p.dot(config.points[j]));
    return {ScatteringData::Kind::H, sum / two_pi_pow(config.dimension)};
}

ScatteringData eval_h_gamma(const PotentialConfig& config, const RealLimitMomentum& k,
                            const Vec& l, const SolverOptions& opts) {
    if (std::abs(l.norm2() - k.k_prime.norm2()) > 1e-8 * (1.0 + k.k_prime.norm2()))
        throw ConfigError("h_gamma requires k^2 = l^2");
    const CoefficientSolution sol = solve_coefficients(config, k, opts);
    Complex sum{0.0, 0.0};
    const Vec diff = k.k_prime - l;
    for (size_t j = 0; j < config.size(); ++j)
        sum += sol.c_gauge[j] * std::exp(kI * diff.dot(config.points[j]));
    return {ScatteringData::Kind::h_gamma, sum / two_pi_pow(config.dimension)};
}

ScatteringData eval_f(const PotentialConfig& config, const Vec& k_real, const Vec& l,
                      const SolverOptions& opts) {
    if (std::abs(l.norm2() - k_real.norm2()) > 1e-8 * (1.0 + k_real.norm2()))
        throw ConfigError("f requires k^2 = l^2");
    const CoefficientSolution sol = solve_coefficients(config, k_real, opts);
    Complex sum{0.0, 0.0};
    const Vec diff = k_real - l;
    for (size_t j = 0; j < config.size(); ++j)
        sum += sol.c_gauge[j] * std::exp(kI * diff.dot(config.points[j]));
    return {ScatteringData::Kind::f, sum / two_pi_pow(config.dimension)};
}

// --- determinant -----------------------------------------------------------------

namespace {

DetResult det_from_system(const AssembledSystem& sys) {
    DetResult out;
    if (sys.A.n == 0) return out;  // empty active block: det = 1
    const LUDecomposition lu = lu_factor(sys.A);
    out.value = lu.determinant();
    out.imag_residual = std::abs(out.value.imag());
    out.condition_estimate = lu.singular ? std::numeric_limits<double>::infinity()
                                         : condition_inf(sys.A, lu);
    return out;
}

}  // namespace

DetResult det_A(const PotentialConfig& config, const ComplexMomentum& k, const SolverOptions& opts) {
    return det_from_system(assemble_system(config, k, opts));
}

DetResult det_A(const PotentialConfig& config, const RealLimitMomentum& k, const SolverOptions& opts) {
    return det_from_system(assemble_system(config, k, opts));
}

DetResult det_A(const PotentialConfig& config, const Vec& k_real, const SolverOptions& opts) {
    return det_from_system(assemble_system(config, k_real, opts));
}

}  // namespace faddeev
