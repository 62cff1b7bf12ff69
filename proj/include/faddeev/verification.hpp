#pragma once

#include <map>
#include <string>

#include "faddeev/geometry.hpp"
#include "faddeev/solver.hpp"

namespace faddeev {

/// Outcome of one identity check.  rel_error = |lhs-rhs| / (1 + max(|lhs|,|rhs|)).
struct IdentityReport {
    std::string identity_id;
    Complex lhs{0.0, 0.0};
    Complex rhs{0.0, 0.0};
    double rel_error = 0.0;
    std::map<std::string, double> diagnostics;

    bool pass(double threshold) const { return rel_error < threshold; }
};

double identity_rel_error(Complex lhs, Complex rhs);

// ---------------------------------------------------------------------------
// dbar checks (d=2).  The eigenfunctions are not holomorphic across the
// fixed-energy variety; their antiholomorphic derivative in the lambda chart
// equals a point-mass integral located at xi* = -2 Re k, the second
// intersection of the two delta constraints (xi = 0 is killed by the xi_j
// factor).  The left side is a central finite difference in conj(lambda).
// ---------------------------------------------------------------------------

struct DbarOptions {
    SolverOptions solver{};
    double step = 1e-3;  // finite-difference step; the check also runs step/2
};

/// Which function the dbar identity is checked for.
enum class DbarTarget { psi, H };

/// Point-mass value of the pulled-back right side.
Complex dbar_rhs_point_mass(const PotentialConfig& config, DbarTarget which, const Vec& x_or_p,
                            const LambdaCoord& lambda, const SolverOptions& opts = {});

/// Integrand of the right side before the delta weights: evaluated at real xi,
/// includes the -2 pi factor, the xi_j components contracted with the chart
/// pullback conj(k_j'(lambda)), and the target functions at k + xi.
/// The mollified-delta oracle integrates this against delta_sigma products.
Complex dbar_rhs_integrand(const PotentialConfig& config, DbarTarget which, const Vec& x_or_p,
                           const LambdaCoord& lambda, const Vec& xi,
                           const SolverOptions& opts = {});

/// Finite-difference antiholomorphic derivative of psi(x, k(lambda)) or
/// H(k(lambda), p) with respect to conj(lambda).
Complex dbar_lhs_finite_difference(const PotentialConfig& config, DbarTarget which,
                                   const Vec& x_or_p, const LambdaCoord& lambda, double step,
                                   const SolverOptions& opts = {});

IdentityReport check_dbar(const PotentialConfig& config, const Vec& x_or_p,
                          const LambdaCoord& lambda, DbarTarget which,
                          const DbarOptions& opts = {});

// ---------------------------------------------------------------------------
// Limit relations at real momenta with k.gamma = 0: the gamma-limit functions
// equal the classical ones plus a hemisphere (d=3) / arc (d=2) integral over
// the momentum sphere |xi| = |k| restricted to xi.gamma > 0.
// ---------------------------------------------------------------------------

enum class LimitTarget { psi, h };

/// which = psi: compare psi_gamma(x,k) with psi+ plus the correction (pass x).
/// which = h:   compare h_gamma(k,l) with f(k,l) plus the correction (pass l,
///              a real vector with |l| = |k|).
IdentityReport check_limit_relation(const PotentialConfig& config, const RealLimitMomentum& k,
                                    const Vec& x_or_l, LimitTarget which,
                                    const SolverOptions& opts = {});

// ---------------------------------------------------------------------------
// mu -> 1 along |Im k| -> infinity paths.
// ---------------------------------------------------------------------------

struct MuAsymptoticPath {
    // d=3: k(t) = sqrt(E + t^2) a_dir + i t b_dir
    Vec a_dir{1.0, 0.0, 0.0};
    Vec b_dir{0.0, 0.0, 1.0};
    // d=2: lambda ray at fixed angle, radius chosen so |Im k| = t
    double lambda_angle = 0.3;
};

IdentityReport check_mu_asymptotic(const PotentialConfig& config, const Vec& x,
                                   const MuAsymptoticPath& path, const std::vector<double>& t_seq,
                                   const SolverOptions& opts = {});

// ---------------------------------------------------------------------------
// Helmholtz residual: centered second differences of psi satisfy
// -Lap psi = E psi away from the potential points, at second order in the
// stencil spacing.
// ---------------------------------------------------------------------------

IdentityReport check_helmholtz(const PotentialConfig& config, const Vec& x,
                               const ComplexMomentum& k, const std::vector<double>& h_seq,
                               const SolverOptions& opts = {});
IdentityReport check_helmholtz(const PotentialConfig& config, const Vec& x,
                               const RealLimitMomentum& k, const std::vector<double>& h_seq,
                               const SolverOptions& opts = {});
IdentityReport check_helmholtz(const PotentialConfig& config, const Vec& x, const Vec& k_real,
                               const std::vector<double>& h_seq, const SolverOptions& opts = {});

}  // namespace faddeev
