#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "faddeev/vec.hpp"

namespace faddeev {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Invalid configuration or precondition violation.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Quadrature non-convergence or other numerical breakdown.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when the coefficient system degenerates: the requested momentum
/// sits at (or too close to) a spectral singularity.
struct SpectralSingularityError : std::runtime_error {
    double abs_det;
    double threshold;
    SpectralSingularityError(const std::string& msg, double det, double thresh)
        : std::runtime_error(msg), abs_det(det), threshold(thresh) {}
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Fixed real energy E.
struct Energy {
    double value = 0.0;

    Energy() = default;
    explicit Energy(double e) : value(e) {
        if (!std::isfinite(e)) throw ConfigError("energy must be finite");
    }
    /// Requires E > 0 (needed by the 2D lambda chart).
    double require_positive() const {
        if (!(value > 0.0)) throw ConfigError("operation requires energy E > 0");
        return value;
    }
};

/// Complex momentum k = a + i b in C^d, stored as real and imaginary parts.
struct ComplexMomentum {
    Vec re;  // a
    Vec im;  // b

    ComplexMomentum() = default;
    ComplexMomentum(const Vec& a, const Vec& b) : re(a), im(b) {
        if (a.dim != b.dim) throw ConfigError("momentum parts must have equal dimension");
    }

    int dim() const { return re.dim; }
    Complex component(int i) const { return {re[i], im[i]}; }
    double im_norm() const { return im.norm(); }

    /// k.k (the complex energy); real iff a.b = 0.
    Complex k_squared() const {
        return {re.norm2() - im.norm2(), 2.0 * re.dot(im)};
    }
    /// k.x for real x.
    Complex dot(const Vec& x) const { return complex_dot(re, im, x); }

    ComplexMomentum operator-() const { return {-re, -im}; }
    ComplexMomentum conj() const { return {re, -im}; }

    /// |Re k|^2 + |Im k|^2, the squared modulus used in the |k| -> infinity limits.
    double abs2() const { return re.norm2() + im.norm2(); }
};

inline ComplexMomentum operator+(const ComplexMomentum& k, const Vec& xi) {
    return {k.re + xi, k.im};
}

/// Nonzero lambda coordinate on the d=2 fixed-energy variety.
struct LambdaCoord {
    Complex value{0.0, 0.0};

    LambdaCoord() = default;
    explicit LambdaCoord(Complex v) : value(v) {
        if (std::abs(v) == 0.0) throw ConfigError("lambda must be nonzero");
    }
};

/// Real-limit momentum k' with approach direction gamma, k'.gamma = 0, |gamma| = 1.
struct RealLimitMomentum {
    Vec k_prime;
    Vec gamma;

    RealLimitMomentum() = default;
    RealLimitMomentum(const Vec& k, const Vec& g, double tol = 1e-10) : k_prime(k), gamma(g) {
        if (k.dim != g.dim) throw ConfigError("k' and gamma must have equal dimension");
        if (std::abs(g.norm() - 1.0) > tol) throw ConfigError("gamma must be a unit vector");
        if (std::abs(k.dot(g)) > tol * (1.0 + k.norm())) throw ConfigError("k'.gamma must vanish");
        if (k.norm() == 0.0) throw ConfigError("k' must be nonzero");
    }

    int dim() const { return k_prime.dim; }
};

/// Multipoint potential: points z_j with real strengths alpha_j at fixed energy.
struct PotentialConfig {
    int dimension = 2;
    double energy = 0.0;
    std::vector<Vec> points;
    std::vector<double> alphas;

    size_t size() const { return points.size(); }

    void validate() const {
        if (dimension != 2 && dimension != 3) throw ConfigError("dimension must be 2 or 3");
        if (!std::isfinite(energy)) throw ConfigError("energy must be finite");
        if (points.empty()) throw ConfigError("at least one point required");
        if (points.size() != alphas.size()) throw ConfigError("points/alphas size mismatch");
        for (size_t j = 0; j < points.size(); ++j) {
            if (points[j].dim != dimension) throw ConfigError("point dimension mismatch");
            if (!std::isfinite(alphas[j])) throw ConfigError("alpha must be finite");
            for (size_t m = 0; m < j; ++m) {
                if ((points[j] - points[m]).norm() == 0.0)
                    throw ConfigError("points must be pairwise distinct");
            }
        }
    }
};

/// Variety-membership tolerances: relative 1e-10, absolute 1e-12.
struct VarietyTol {
    double rel = 1e-10;
    double abs = 1e-12;
    double operator()(double scale) const { return abs + rel * std::abs(scale); }
};

}  // namespace faddeev
