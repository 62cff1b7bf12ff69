#pragma once

#include <vector>

#include "faddeev/types.hpp"

namespace faddeev {

/// Dense complex matrix, row-major, for the small n x n coefficient systems.
struct CMatrix {
    int n = 0;
    std::vector<Complex> a;

    CMatrix() = default;
    explicit CMatrix(int size) : n(size), a(static_cast<size_t>(size) * size, Complex{0.0, 0.0}) {}

    Complex& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const Complex& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    double norm_inf() const;
};

/// LU decomposition with partial pivoting.
struct LUDecomposition {
    CMatrix lu;
    std::vector<int> pivot;
    int sign = 1;
    bool singular = false;

    Complex determinant() const;
    std::vector<Complex> solve(std::vector<Complex> b) const;
    CMatrix inverse() const;
};

LUDecomposition lu_factor(CMatrix m);

/// Infinity-norm condition estimate via the explicit inverse (n is small).
double condition_inf(const CMatrix& m, const LUDecomposition& lu);

}  // namespace faddeev
