#pragma once

#include <cstdint>
#include <optional>

#include "faddeev/geometry.hpp"
#include "faddeev/solver.hpp"

namespace faddeev {

/// Log-radial x uniform-angular grid over an annulus in the lambda plane.
struct GridSpec {
    double r_min = 0.1;
    double r_max = 10.0;
    int n_r = 400;
    int n_theta = 720;

    void validate() const {
        if (!(0.0 < r_min && r_min < r_max)) throw ConfigError("need 0 < r_min < r_max");
        if (n_r < 2 || n_theta < 4) throw ConfigError("grid too small");
    }
};

/// Sampled det A field over the annulus.  Radii avoid |lambda| = 1 exactly
/// (the real-momentum circle is excluded from the complex-regime scan).
struct ScanGrid {
    GridSpec spec;
    std::vector<double> radii;        // n_r log-spaced values, nudged off 1.0
    std::vector<double> values;       // Re det A, node-major [ir * n_theta + it]
    std::vector<double> im_residual;  // |Im det A| per node
    std::vector<std::uint8_t> flags;  // 1 = evaluation failed at this node
    double reality_residual = 0.0;    // max |Im det A|
    double max_abs = 0.0;             // max |det A|
    bool unit_circle_excluded = true;

    double theta(int it) const;
    Complex lambda_at(int ir, int it) const;
    size_t node(int ir, int it) const {
        return static_cast<size_t>(ir) * static_cast<size_t>(spec.n_theta) +
               static_cast<size_t>(it);
    }
};

/// Polylines tracing det A(k(lambda)) = 0 in the lambda plane.
struct SingularCurveSet {
    std::vector<std::vector<Complex>> curves;
    double refinement_tol = 1e-9;
    std::optional<int> preset = std::nullopt;
};

/// OpenMP-parallel scan (cells evaluate concurrently).
ScanGrid scan_det_grid(const PotentialConfig& config, const GridSpec& spec,
                       const SolverOptions& opts = {});

/// Serial reference scan kept for testing; must produce identical values.
ScanGrid scan_det_grid_serial(const PotentialConfig& config, const GridSpec& spec,
                              const SolverOptions& opts = {});

/// Marching squares on the scanned field at level zero, vertices refined by
/// bisection along grid edges until |det A| <= refinement_tol.
SingularCurveSet extract_zero_curves(const ScanGrid& grid, const PotentialConfig& config,
                                     const SolverOptions& opts = {}, double refinement_tol = 1e-9);

/// Bisection polish of a zero of Re det A on the segment [a, b] (sign change
/// required).  Returns lambda with |det A| <= tol.
LambdaCoord refine_zero_bracketed(const PotentialConfig& config, Complex a, Complex b,
                                  const SolverOptions& opts = {}, double tol = 1e-10,
                                  int max_iter = 60);

/// Probe around the seed along the given direction for a sign change, then
/// bisect.  Throws when no bracket is found within half_width.
LambdaCoord refine_zero(const PotentialConfig& config, const LambdaCoord& seed,
                        Complex direction = {1.0, 0.0}, double half_width = 0.05,
                        const SolverOptions& opts = {}, double tol = 1e-10);

/// For d=3, n=2: the product alpha1*alpha2 making k' + i0*gamma a real
/// spectral singularity; any real factorization of the product works.
/// Throws when the Green product vanishes.
double real_singularity_alphas(const Vec& z1, const Vec& z2, const RealLimitMomentum& k,
                               const QuadratureSpec& spec = {});

/// Published two-point configurations (id in 1..4) with the default annulus.
std::pair<PotentialConfig, GridSpec> figure_preset(int id);

}  // namespace faddeev
