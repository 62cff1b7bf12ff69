#pragma once

#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "faddeev/quadrature.hpp"
#include "faddeev/types.hpp"

namespace faddeev {

/// Result of a Green-function evaluation.
struct GreenEvaluation {
    Complex value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    enum class Method { reduced_quadrature, closed_form, oracle } method = Method::reduced_quadrature;
    bool converged = true;
};

// ---------------------------------------------------------------------------
// Faddeev Green functions for the operator Delta + 2ik.grad and their
// Helmholtz counterparts G = e^{ikx} g.
//
// Evaluation strategy: after shifting the Fourier contour by Re k, G depends
// on k only through Im k and the complex square k.k.  Rotating Im k onto the
// last axis and integrating that axis by residues leaves a one-dimensional
// radial integral (a cosine transform for d=2, a J0 Hankel transform for
// d=3) whose integrand is piecewise smooth with a single breakpoint and
// decays either exponentially (|x.Im k| > 0) or through an oscillatory tail
// handled by series acceleration.
// ---------------------------------------------------------------------------

/// g(x,k) for Im k != 0, x != 0.  Supports general complex k.k.
GreenEvaluation eval_g(const Vec& x, const ComplexMomentum& k, const QuadratureSpec& spec = {});

/// G(x,k) = e^{ikx} g(x,k); real-valued on the fixed-energy variety for real E.
GreenEvaluation eval_G(const Vec& x, const ComplexMomentum& k, const QuadratureSpec& spec = {});

/// Classical outgoing Green function g+(x,k) for real k != 0, x != 0.
/// d=3: -e^{-ikx} e^{i|k||x|}/(4 pi |x|); d=2 via the outgoing cylinder wave.
GreenEvaluation eval_g_plus(const Vec& x, const Vec& k_real, const QuadratureSpec& spec = {});

/// G+(x,k) = e^{ikx} g+(x,k).
GreenEvaluation eval_G_plus(const Vec& x, const Vec& k_real, const QuadratureSpec& spec = {});

/// Real-limit Green function: returns g_gamma(x,k') = e^{-ik'x} G_gamma(x,k'),
/// where G_gamma = G+ + the hemisphere (d=3) / arc (d=2) correction over the
/// sphere |xi| = |k'| selected by theta(xi.gamma).  Requires k'.gamma = 0.
GreenEvaluation eval_g_gamma(const Vec& x, const RealLimitMomentum& k, const QuadratureSpec& spec = {});

/// G_gamma(x,k') = e^{ik'x} g_gamma(x,k').
GreenEvaluation eval_G_gamma(const Vec& x, const RealLimitMomentum& k, const QuadratureSpec& spec = {});

/// The hemisphere/arc correction term G_gamma(x,k') - G+(x,k') on its own.
Complex gamma_correction(const Vec& x, const RealLimitMomentum& k, const QuadratureSpec& spec = {});

/// Cutoff self-interaction integral over |xi| <= N of 1/(xi^2 + 2 k.xi).
/// Grows like 4 pi N (d=3) or 2 pi ln N (d=2).
Complex cutoff_integral(double N, const ComplexMomentum& k, int dim, const QuadratureSpec& spec = {});

/// Ball integral over |xi| <= N of e^{i xi.x}/(xi^2 + 2 k.xi) for x != 0,
/// computed as the full-space value minus the exterior tail.
/// Requires N > 2(|Re k| + |Im k|).
Complex ball_integral(const Vec& x, double N, const ComplexMomentum& k,
                      const QuadratureSpec& spec = {});

// ---------------------------------------------------------------------------
// Brute-force oracle: direct midpoint-lattice quadrature of the defining
// integral over the ball |xi| <= N in polar/spherical coordinates, with local
// lattice refinement near the real singular set of the integrand.
// Independent of the reduced-quadrature path above.
// ---------------------------------------------------------------------------

/// Single (N, mesh) lattice estimate of g(x,k).
Complex oracle_g_direct(const Vec& x, const ComplexMomentum& k, double N, double mesh);

/// N-sweep Richardson extrapolation (model value(N) ~ v + c1/N + c2/N^2) over
/// a doubling cutoff list, with a mesh-halving step to cancel the leading
/// lattice error.  err_est receives a combined error estimate.
Complex oracle_g_extrapolated(const Vec& x, const ComplexMomentum& k,
                              const std::vector<double>& cutoffs, double mesh,
                              double* err_est = nullptr);

// ---------------------------------------------------------------------------
// Memoization cache for eval_g: read-shared, first-write-wins.  Keys are the
// exact bit patterns of (x, k, rel_tol).
// ---------------------------------------------------------------------------

class GreenCache {
  public:
    GreenEvaluation get_or_compute(const Vec& x, const ComplexMomentum& k,
                                   const QuadratureSpec& spec);
    size_t size() const;
    void clear();

  private:
    struct Key {
        std::array<double, 12> bits;
        bool operator==(const Key& o) const { return bits == o.bits; }
    };
    struct KeyHash {
        size_t operator()(const Key& k) const;
    };
    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, GreenEvaluation, KeyHash> map_;
};

}  // namespace faddeev
