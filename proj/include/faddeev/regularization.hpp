#pragma once

#include <vector>

#include "faddeev/solver.hpp"

namespace faddeev {

// Non-local cutoff models with Fourier-ball profiles: couplings eps_j(N) are
// renormalized so that the coefficient vectors c_N(k) converge, as N grows,
// to the limits produced by multipoint solve_coefficients.

/// Renormalized coupling.  Throws on the pole of the renormalization
/// denominator (N = 2 pi^2/alpha for d=3, ln N = 2 pi/alpha for d=2).
double epsilon_of_N(double alpha, double N, int dim);

/// Relative distance of N from the renormalization pole (infinity when the
/// coupling has no pole).  Sweeps exclude N closer than 5%.
double pole_proximity(double alpha, double N, int dim);

struct CutoffModel {
    PotentialConfig config;
    double cutoff = 0.0;            // N
    std::vector<double> eps;        // eps_j(N)

    CutoffModel(PotentialConfig cfg, double N);
};

/// A_N matrix of the cutoff system (identity + eps-scaled ball integrals).
CMatrix assemble_A_N(const CutoffModel& model, const ComplexMomentum& k,
                     const QuadratureSpec& spec = {});

/// Solve A_N c_N = b_N with b_{m,N} = eps_m(N).
std::vector<Complex> solve_c_N(const CutoffModel& model, const ComplexMomentum& k,
                               const QuadratureSpec& spec = {});

/// mu_N(x,k) via the Fourier representation of the cutoff eigenfunction.
Complex eval_mu_N(const CutoffModel& model, const Vec& x, const ComplexMomentum& k,
                  const QuadratureSpec& spec = {});

// --- convergence study -------------------------------------------------------

struct ConvergencePoint {
    double cutoff = 0.0;
    double err_abs = 0.0;
    double err_rel = 0.0;
    bool excluded = false;  // skipped: within 5% of a renormalization pole
};

struct ConvergenceReport {
    std::vector<ConvergencePoint> points;
    std::vector<Complex> c_limit;
    double fitted_exponent = 0.0;   // least-squares slope of log err vs log N
    bool fit_valid = false;
};

/// Sweeps c_N against the multipoint limit c(k) over the given cutoffs and
/// fits the decay exponent on the log-log tail (smallest cutoff dropped).
ConvergenceReport convergence_study(const PotentialConfig& config, const ComplexMomentum& k,
                                    const std::vector<double>& cutoffs,
                                    const QuadratureSpec& spec = {});

/// Default geometric cutoff sequence {25, 50, 100, 200, 400}.
std::vector<double> default_cutoff_sequence();

}  // namespace faddeev
