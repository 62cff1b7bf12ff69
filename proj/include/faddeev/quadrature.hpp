#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "faddeev/types.hpp"

namespace faddeev {

/// Tolerances for the adaptive quadrature and the brute-force oracle path.
struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 1 << 16;
    double oracle_cutoff = 80.0;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("tolerances must be positive");
        if (max_subdivisions < 1) throw ConfigError("max_subdivisions must be >= 1");
    }
    QuadratureSpec scaled(double factor) const {
        QuadratureSpec s = *this;
        s.rel_tol *= factor;
        s.abs_tol *= factor;
        return s;
    }
};

struct QuadResult {
    Complex value{0.0, 0.0};
    double error = 0.0;
    bool converged = true;
    std::int64_t evals = 0;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        error += o.error;
        converged = converged && o.converged;
        evals += o.evals;
        return *this;
    }
};

namespace detail {

// 15-point Kronrod / 7-point Gauss pair on [-1,1].
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename F>
inline void gk15(F&& f, double a, double b, Complex& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Complex resk = kGK15WeightsK[7] * f(c);
    Complex resg = kGK15WeightsG[3] * f(c);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kGK15Nodes[j];
        const Complex fsum = f(c - dx) + f(c + dx);
        resk += kGK15WeightsK[j] * fsum;
        if (j % 2 == 1) resg += kGK15WeightsG[j / 2] * fsum;
    }
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
    // QUADPACK-style sharpening of the raw |K15-G7| estimate.
    if (err > 0.0) {
        const double scale = std::abs(kronrod);
        err = std::min(err, std::pow(200.0 * err / std::max(scale, 1e-300), 1.5) *
                                std::max(scale, 1e-300));
        err = std::max(err, 1e-300);
    }
}

struct Interval {
    double a, b;
    Complex value;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of a complex-valued f over [a, b].
/// Splits the worst interval first until the combined error estimate
/// meets abs_tol + rel_tol*|value| or the subdivision budget runs out.
template <typename F>
QuadResult integrate(F&& f, double a, double b, const QuadratureSpec& spec) {
    QuadResult out;
    if (a == b) return out;
    std::priority_queue<detail::Interval> heap;
    detail::Interval first{a, b, {}, 0.0};
    detail::gk15(f, a, b, first.value, first.error);
    out.evals += 15;
    Complex total = first.value;
    double total_err = first.error;
    heap.push(first);
    int splits = 0;
    while (total_err > spec.abs_tol + spec.rel_tol * std::abs(total) &&
           splits < spec.max_subdivisions) {
        detail::Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval at roundoff width
            heap.push(detail::Interval{worst.a, worst.b, worst.value, 0.0});
            total_err -= worst.error;
            continue;
        }
        detail::Interval left{worst.a, mid, {}, 0.0};
        detail::Interval right{mid, worst.b, {}, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        out.evals += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    out.value = total;
    out.error = total_err;
    out.converged = total_err <= spec.abs_tol + spec.rel_tol * std::abs(total) ||
                    total_err <= spec.abs_tol + 10.0 * spec.rel_tol * std::abs(total);
    return out;
}

/// As integrate(), but splitting at interior breakpoints first.
template <typename F>
QuadResult integrate_segmented(F&& f, double a, double b, std::vector<double> breaks,
                               const QuadratureSpec& spec) {
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    QuadResult out;
    double lo = a;
    for (double p : breaks) {
        if (p <= lo || p > b) continue;
        out += integrate(f, lo, std::min(p, b), spec);
        lo = p;
    }
    if (lo < b) out += integrate(f, lo, b, spec);
    return out;
}

namespace detail {

/// Iterated Aitken delta-squared limit of a sequence of partial sums.
inline Complex aitken_limit(std::vector<Complex> s, double& err_est) {
    if (s.empty()) {
        err_est = 0.0;
        return {};
    }
    Complex best = s.back();
    err_est = s.size() > 1 ? std::abs(s[s.size() - 1] - s[s.size() - 2]) : std::abs(best);
    while (s.size() >= 3) {
        std::vector<Complex> next;
        next.reserve(s.size() - 2);
        for (size_t i = 0; i + 2 < s.size(); ++i) {
            const Complex d2 = s[i + 2] - 2.0 * s[i + 1] + s[i];
            if (std::abs(d2) < 1e-300) {
                next.push_back(s[i + 2]);
            } else {
                next.push_back(s[i + 2] - (s[i + 2] - s[i + 1]) * (s[i + 2] - s[i + 1]) / d2);
            }
        }
        const double step = std::abs(next.back() - best);
        best = next.back();
        err_est = step;
        if (step < 1e-300) break;
        s = std::move(next);
    }
    return best;
}

}  // namespace detail

/// Integral of f over [start, infinity) for an eventually-decaying integrand
/// whose sign pattern alternates on panels of length `panel` (half a period of
/// the oscillation).  Panel integrals are summed and the partial sums are
/// accelerated by iterated Aitken extrapolation.
template <typename F>
QuadResult integrate_tail_alternating(F&& f, double start, double panel,
                                      const QuadratureSpec& spec, int max_panels = 96) {
    QuadResult out;
    if (!(panel > 0.0) || !std::isfinite(panel)) throw ConfigError("panel length must be positive");
    std::vector<Complex> partial;
    partial.reserve(static_cast<size_t>(max_panels));
    Complex sum = 0.0;
    double quad_err = 0.0;
    double a = start;
    const double target = spec.abs_tol;
    for (int m = 0; m < max_panels; ++m) {
        Complex v;
        double e;
        detail::gk15(f, a, a + panel, v, e);
        out.evals += 15;
        if (e > 1e-3 * (std::abs(v) + 1e-300)) {  // panel not smooth enough: one refinement
            Complex v1, v2;
            double e1, e2;
            detail::gk15(f, a, a + 0.5 * panel, v1, e1);
            detail::gk15(f, a + 0.5 * panel, a + panel, v2, e2);
            out.evals += 30;
            v = v1 + v2;
            e = e1 + e2;
        }
        sum += v;
        quad_err += e;
        partial.push_back(sum);
        a += panel;
        if (partial.size() >= 6) {
            double acc_err;
            const Complex lim = detail::aitken_limit(partial, acc_err);
            if (acc_err < target + spec.rel_tol * std::abs(lim) && std::abs(v) < 1e3 * target + spec.rel_tol * std::abs(lim)) {
                out.value = lim;
                out.error = acc_err + quad_err;
                out.converged = true;
                return out;
            }
        }
    }
    double acc_err;
    out.value = detail::aitken_limit(partial, acc_err);
    out.error = acc_err + quad_err;
    out.converged = acc_err <= 100.0 * (target + spec.rel_tol * std::abs(out.value));
    return out;
}

}  // namespace faddeev
