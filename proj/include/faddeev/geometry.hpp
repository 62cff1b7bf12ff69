#pragma once

#include "faddeev/types.hpp"

namespace faddeev {

// Momenta on the fixed-energy varieties and the 2D lambda chart.
//
// For d=2 and E>0 the variety {k in C^2 : k^2 = E} is parametrized by
// lambda in C\0:
//   k1 = (1/lambda + lambda) sqrt(E)/2,
//   k2 = i (1/lambda - lambda) sqrt(E)/2,
// with |lambda| = 1 corresponding to real momenta.  The inverse map is
// lambda = (k1 + i k2)/sqrt(E).

/// Map lambda to k on the d=2 variety. Requires E > 0.
ComplexMomentum lambda_to_k(const LambdaCoord& lambda, const Energy& E);

/// Inverse chart map; requires d=2, E>0 and k^2 = E within tolerance.
LambdaCoord k_to_lambda(const ComplexMomentum& k, const Energy& E,
                        const VarietyTol& tol = {});

/// Construct k = sqrt(E + b_norm^2) a_dir + i b_norm b_dir on the d=3 variety.
/// Requires orthonormal directions and E + b_norm^2 > 0.
ComplexMomentum build_k_3d(const Energy& E, const Vec& a_dir, const Vec& b_dir,
                           double b_norm, double ortho_tol = 1e-10);

/// True iff Im k = Im l and k^2 = l^2 = E within tolerance.
bool validate_pair_theta(const ComplexMomentum& k, const ComplexMomentum& l,
                         const Energy& E, const VarietyTol& tol = {});

/// True iff k^2 = E within tolerance and Im k != 0.
bool on_sigma_interior(const ComplexMomentum& k, const Energy& E,
                       const VarietyTol& tol = {});

}  // namespace faddeev
