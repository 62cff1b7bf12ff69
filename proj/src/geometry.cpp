#include "faddeev/geometry.hpp"

namespace faddeev {

ComplexMomentum lambda_to_k(const LambdaCoord& lambda, const Energy& E) {
    const double e = E.require_positive();
    const Complex lam = lambda.value;
    if (std::abs(lam) == 0.0) throw ConfigError("lambda must be nonzero");
    const double half_sqrt_e = 0.5 * std::sqrt(e);
    const Complex inv = 1.0 / lam;
    const Complex k1 = (inv + lam) * half_sqrt_e;
    const Complex k2 = Complex(0.0, 1.0) * (inv - lam) * half_sqrt_e;
    return {Vec(k1.real(), k2.real()), Vec(k1.imag(), k2.imag())};
}

LambdaCoord k_to_lambda(const ComplexMomentum& k, const Energy& E, const VarietyTol& tol) {
    if (k.dim() != 2) throw ConfigError("k_to_lambda requires d=2");
    const double e = E.require_positive();
    const Complex k2 = k.k_squared();
    if (std::abs(k2 - e) > tol(e)) throw ConfigError("k is not on the fixed-energy variety");
    const Complex lam = (k.component(0) + Complex(0.0, 1.0) * k.component(1)) / std::sqrt(e);
    return LambdaCoord(lam);
}

ComplexMomentum build_k_3d(const Energy& E, const Vec& a_dir, const Vec& b_dir,
                           double b_norm, double ortho_tol) {
    if (a_dir.dim != 3 || b_dir.dim != 3) throw ConfigError("build_k_3d requires 3-vectors");
    if (!(b_norm > 0.0)) throw ConfigError("b_norm must be positive");
    if (std::abs(a_dir.norm() - 1.0) > ortho_tol || std::abs(b_dir.norm() - 1.0) > ortho_tol)
        throw ConfigError("directions must be unit vectors");
    if (std::abs(a_dir.dot(b_dir)) > ortho_tol) throw ConfigError("directions must be orthogonal");
    const double s = E.value + b_norm * b_norm;
    if (!(s > 0.0)) throw ConfigError("E + b_norm^2 must be positive");
    return {a_dir * std::sqrt(s), b_dir * b_norm};
}

bool validate_pair_theta(const ComplexMomentum& k, const ComplexMomentum& l,
                         const Energy& E, const VarietyTol& tol) {
    if (k.dim() != l.dim()) return false;
    const double scale = 1.0 + k.im.norm() + l.im.norm();
    if ((k.im - l.im).norm() > tol(scale)) return false;
    const double e = E.value;
    return std::abs(k.k_squared() - e) <= tol(e) && std::abs(l.k_squared() - e) <= tol(e);
}

bool on_sigma_interior(const ComplexMomentum& k, const Energy& E, const VarietyTol& tol) {
    return k.im_norm() > 0.0 && std::abs(k.k_squared() - E.value) <= tol(E.value);
}

}  // namespace faddeev
