#include "faddeev/linalg.hpp"

#include <cmath>

namespace faddeev {

double CMatrix::norm_inf() const {
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::abs(at(i, j));
        best = std::max(best, row);
    }
    return best;
}

LUDecomposition lu_factor(CMatrix m) {
    const int n = m.n;
    LUDecomposition d;
    d.pivot.resize(static_cast<size_t>(n));
    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::abs(m.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(m.at(r, col));
            if (v > best) {
                best = v;
                p = r;
            }
        }
        d.pivot[static_cast<size_t>(col)] = p;
        if (p != col) {
            for (int j = 0; j < n; ++j) std::swap(m.at(col, j), m.at(p, j));
            d.sign = -d.sign;
        }
        if (best == 0.0) {
            d.singular = true;
            continue;
        }
        const Complex inv_piv = 1.0 / m.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const Complex factor = m.at(r, col) * inv_piv;
            m.at(r, col) = factor;
            for (int j = col + 1; j < n; ++j) m.at(r, j) -= factor * m.at(col, j);
        }
    }
    d.lu = std::move(m);
    return d;
}

Complex LUDecomposition::determinant() const {
    Complex det{static_cast<double>(sign), 0.0};
    for (int i = 0; i < lu.n; ++i) det *= lu.at(i, i);
    return det;
}

std::vector<Complex> LUDecomposition::solve(std::vector<Complex> b) const {
    const int n = lu.n;
    if (static_cast<int>(b.size()) != n) throw ConfigError("rhs size mismatch");
    if (singular) throw NumericalError("singular matrix in solve");
    for (int i = 0; i < n; ++i) {
        const int p = pivot[static_cast<size_t>(i)];
        if (p != i) std::swap(b[static_cast<size_t>(i)], b[static_cast<size_t>(p)]);
        for (int j = 0; j < i; ++j) b[static_cast<size_t>(i)] -= lu.at(i, j) * b[static_cast<size_t>(j)];
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) b[static_cast<size_t>(i)] -= lu.at(i, j) * b[static_cast<size_t>(j)];
        b[static_cast<size_t>(i)] /= lu.at(i, i);
    }
    return b;
}

CMatrix LUDecomposition::inverse() const {
    const int n = lu.n;
    CMatrix inv(n);
    for (int col = 0; col < n; ++col) {
        std::vector<Complex> e(static_cast<size_t>(n), Complex{0.0, 0.0});
        e[static_cast<size_t>(col)] = 1.0;
        const std::vector<Complex> x = solve(std::move(e));
        for (int i = 0; i < n; ++i) inv.at(i, col) = x[static_cast<size_t>(i)];
    }
    return inv;
}

double condition_inf(const CMatrix& m, const LUDecomposition& lu) {
    if (lu.singular) return std::numeric_limits<double>::infinity();
    return m.norm_inf() * lu.inverse().norm_inf();
}

}  // namespace faddeev
