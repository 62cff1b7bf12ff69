#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <complex>

namespace faddeev {

using Complex = std::complex<double>;

/// Real vector in R^2 or R^3 with runtime dimension.
struct Vec {
    int dim = 0;
    std::array<double, 3> c{0.0, 0.0, 0.0};

    Vec() = default;
    Vec(double x, double y) : dim(2), c{x, y, 0.0} {}
    Vec(double x, double y, double z) : dim(3), c{x, y, z} {}

    static Vec zero(int d) {
        Vec v;
        v.dim = d;
        return v;
    }

    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<size_t>(i)]; }

    Vec operator+(const Vec& o) const {
        assert(dim == o.dim);
        Vec r = *this;
        for (int i = 0; i < dim; ++i) r.c[static_cast<size_t>(i)] += o[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        assert(dim == o.dim);
        Vec r = *this;
        for (int i = 0; i < dim; ++i) r.c[static_cast<size_t>(i)] -= o[i];
        return r;
    }
    Vec operator*(double s) const {
        Vec r = *this;
        for (int i = 0; i < dim; ++i) r.c[static_cast<size_t>(i)] *= s;
        return r;
    }
    Vec operator-() const { return (*this) * -1.0; }

    double dot(const Vec& o) const {
        assert(dim == o.dim);
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += (*this)[i] * o[i];
        return s;
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

/// Dot product k.x for a complex vector given as (re, im) parts.
inline Complex complex_dot(const Vec& re, const Vec& im, const Vec& x) {
    return {re.dot(x), im.dot(x)};
}

}  // namespace faddeev
