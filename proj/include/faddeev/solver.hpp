#pragma once

#include <optional>
#include <string>
#include <vector>

#include "faddeev/green.hpp"
#include "faddeev/linalg.hpp"
#include "faddeev/types.hpp"

namespace faddeev {

/// The three momentum regimes of the coefficient systems.
enum class Regime { complex_k, gamma_limit, classical_plus };

std::string regime_name(Regime r);

/// Solver knobs.  Points with alpha = 0 are inert: they are removed before
/// assembly and their coefficients are fixed to zero.
struct SolverOptions {
    QuadratureSpec quad{};
    double singularity_threshold = 1e-8;  // |det A| < threshold * ||A||_inf^n
    GreenCache* cache = nullptr;
};

/// Assembled coefficient system over the active (alpha != 0) points.
struct AssembledSystem {
    CMatrix A;
    std::vector<Complex> B;
    std::vector<size_t> active;  // map active row -> config point index
    Regime regime = Regime::complex_k;
    int dimension = 2;
};

struct CoefficientSolution {
    std::vector<Complex> C;        // length n, zeros at inert points
    std::vector<Complex> c_gauge;  // c_j = e^{-ik z_j} C_j
    Complex detA{1.0, 0.0};
    double condition_estimate = 1.0;
    double residual = 0.0;  // ||A C - B||_inf / ||B||_inf over the active block
    Regime regime = Regime::complex_k;
};

struct ScatteringData {
    enum class Kind { h, h_gamma, f, H, H_gamma } kind;
    Complex value{0.0, 0.0};
};

struct PsiValue {
    Complex psi{0.0, 0.0};
    Complex mu{0.0, 0.0};
};

// --- assembly -------------------------------------------------------------

AssembledSystem assemble_system(const PotentialConfig& config, const ComplexMomentum& k,
                                const SolverOptions& opts = {});
AssembledSystem assemble_system(const PotentialConfig& config, const RealLimitMomentum& k,
                                const SolverOptions& opts = {});
AssembledSystem assemble_system(const PotentialConfig& config, const Vec& k_real,
                                const SolverOptions& opts = {});

// --- solve ----------------------------------------------------------------

CoefficientSolution solve_coefficients(const PotentialConfig& config, const ComplexMomentum& k,
                                       const SolverOptions& opts = {});
CoefficientSolution solve_coefficients(const PotentialConfig& config, const RealLimitMomentum& k,
                                       const SolverOptions& opts = {});
CoefficientSolution solve_coefficients(const PotentialConfig& config, const Vec& k_real,
                                       const SolverOptions& opts = {});

// --- eigenfunctions ---------------------------------------------------------

PsiValue eval_psi(const PotentialConfig& config, const Vec& x, const ComplexMomentum& k,
                  const SolverOptions& opts = {});
PsiValue eval_psi(const PotentialConfig& config, const Vec& x, const RealLimitMomentum& k,
                  const SolverOptions& opts = {});
PsiValue eval_psi(const PotentialConfig& config, const Vec& x, const Vec& k_real,
                  const SolverOptions& opts = {});

/// Same, reusing an existing coefficient solution.
PsiValue eval_psi(const PotentialConfig& config, const CoefficientSolution& sol, const Vec& x,
                  const ComplexMomentum& k, const SolverOptions& opts = {});
PsiValue eval_psi(const PotentialConfig& config, const CoefficientSolution& sol, const Vec& x,
                  const RealLimitMomentum& k, const SolverOptions& opts = {});
PsiValue eval_psi(const PotentialConfig& config, const CoefficientSolution& sol, const Vec& x,
                  const Vec& k_real, const SolverOptions& opts = {});

// --- scattering data ---------------------------------------------------------

/// Faddeev data h(k,l) on the Theta variety (Im k = Im l != 0, k^2 = l^2 = E).
ScatteringData eval_h(const PotentialConfig& config, const ComplexMomentum& k,
                      const ComplexMomentum& l, const SolverOptions& opts = {});

/// H(k,p) = h(k, k-p) for real p with 2 k.p = p^2.
ScatteringData eval_H(const PotentialConfig& config, const ComplexMomentum& k, const Vec& p,
                      const SolverOptions& opts = {});

/// h_gamma(k,l) for real k,l with k^2 = l^2, k.gamma = 0.
ScatteringData eval_h_gamma(const PotentialConfig& config, const RealLimitMomentum& k,
                            const Vec& l, const SolverOptions& opts = {});

/// Classical amplitude f(k,l) for real k,l with k^2 = l^2.
ScatteringData eval_f(const PotentialConfig& config, const Vec& k_real, const Vec& l,
                      const SolverOptions& opts = {});

// --- determinant -------------------------------------------------------------

struct DetResult {
    Complex value{1.0, 0.0};
    double imag_residual = 0.0;  // |Im det| diagnostic (expected ~0 in complex regime)
    double condition_estimate = 1.0;
};

DetResult det_A(const PotentialConfig& config, const ComplexMomentum& k,
                const SolverOptions& opts = {});
DetResult det_A(const PotentialConfig& config, const RealLimitMomentum& k,
                const SolverOptions& opts = {});
DetResult det_A(const PotentialConfig& config, const Vec& k_real, const SolverOptions& opts = {});

}  // namespace faddeev
