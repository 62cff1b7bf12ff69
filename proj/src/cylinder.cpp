#include "faddeev/cylinder.hpp"

#include <cmath>
#include <numbers>

#include "faddeev/types.hpp"

namespace faddeev {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606;

// Ascending series, adequate in double precision up to the switchover radius.
void series_j0_y0(double z, double& j0, double& y0) {
    const double q = 0.25 * z * z;
    double term = 1.0;   // (-q)^m / (m!)^2
    double sj = 1.0;     // J0 partial sum
    double sy = 0.0;     // sum of (-1)^{m+1} H_m q^m/(m!)^2
    double harmonic = 0.0;
    for (int m = 1; m <= 64; ++m) {
        term *= -q / (static_cast<double>(m) * static_cast<double>(m));
        harmonic += 1.0 / static_cast<double>(m);
        sj += term;
        sy -= term * harmonic;
        if (std::abs(term) < 1e-18 * (std::abs(sj) + 1.0)) break;
    }
    j0 = sj;
    y0 = (2.0 / std::numbers::pi) * ((std::log(0.5 * z) + kEulerGamma) * sj + sy);
}

// Large-argument expansion of H0^(1), truncated at the smallest term.
Complex asymptotic_h0(double z) {
    Complex a{1.0, 0.0};
    Complex sum = a;
    double prev = 1.0;
    for (int k = 0; k < 24; ++k) {
        const double num = (2.0 * k + 1.0) * (2.0 * k + 1.0);
        a *= Complex(0.0, -1.0) * (num / (8.0 * (k + 1.0) * z));
        if (std::abs(a) >= prev) break;
        sum += a;
        prev = std::abs(a);
        if (prev < 1e-18) break;
    }
    const double chi = z - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * z)) * Complex(std::cos(chi), std::sin(chi)) * sum;
}

}  // namespace

double bessel_j0(double z) {
    if (!(z > 0.0)) {
        if (z == 0.0) return 1.0;
        throw ConfigError("bessel_j0 requires z >= 0");
    }
    if (z <= kCylinderSwitchover) {
        double j0, y0;
        series_j0_y0(z, j0, y0);
        return j0;
    }
    return asymptotic_h0(z).real();
}

double bessel_y0(double z) {
    if (!(z > 0.0)) throw ConfigError("bessel_y0 requires z > 0");
    if (z <= kCylinderSwitchover) {
        double j0, y0;
        series_j0_y0(z, j0, y0);
        return y0;
    }
    return asymptotic_h0(z).imag();
}

Complex hankel0_first(double z) {
    if (!(z > 0.0)) throw ConfigError("hankel0_first requires z > 0");
    if (z <= kCylinderSwitchover) {
        double j0, y0;
        series_j0_y0(z, j0, y0);
        return {j0, y0};
    }
    return asymptotic_h0(z);
}

}  // namespace faddeev
