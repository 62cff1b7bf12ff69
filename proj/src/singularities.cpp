#include "faddeev/singularities.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <tuple>

namespace faddeev {

namespace {

constexpr double kPi = std::numbers::pi;

struct NodeResult {
    double value = 0.0;
    double imres = 0.0;
    std::uint8_t flag = 0;
};

NodeResult eval_node(const PotentialConfig& config, Complex lambda, const SolverOptions& opts) {
    NodeResult out;
    try {
        const ComplexMomentum k = lambda_to_k(LambdaCoord(lambda), Energy(config.energy));
        DetResult det;
        try {
            det = det_A(config, k, opts);
        } catch (const NumericalError&) {
            SolverOptions tight = opts;  // one retry with tightened tolerance
            tight.quad = opts.quad.scaled(1e-2);
            det = det_A(config, k, tight);
        }
        out.value = det.value.real();
        out.imres = std::abs(det.value.imag());
    } catch (const std::exception&) {
        out.flag = 1;
    }
    return out;
}

std::vector<double> make_radii(const GridSpec& spec) {
    std::vector<double> radii(static_cast<size_t>(spec.n_r));
    const double lo = std::log(spec.r_min), hi = std::log(spec.r_max);
    const double step = (hi - lo) / (spec.n_r - 1);
    for (int i = 0; i < spec.n_r; ++i) {
        double u = lo + i * step;
        if (std::abs(u) < 1e-9) u += 0.25 * step;  // keep off the real-momentum circle
        radii[static_cast<size_t>(i)] = std::exp(u);
    }
    return radii;
}

ScanGrid scan_impl(const PotentialConfig& config, const GridSpec& spec, const SolverOptions& opts,
                   bool parallel) {
    config.validate();
    spec.validate();
    if (config.dimension != 2) throw ConfigError("lambda-plane scan requires d=2");
    Energy(config.energy).require_positive();
    ScanGrid grid;
    grid.spec = spec;
    grid.radii = make_radii(spec);
    const size_t total = static_cast<size_t>(spec.n_r) * static_cast<size_t>(spec.n_theta);
    grid.values.assign(total, 0.0);
    grid.im_residual.assign(total, 0.0);
    grid.flags.assign(total, 0);

    const auto body = [&](int ir, int it) {
        const Complex lam = std::polar(grid.radii[static_cast<size_t>(ir)], grid.theta(it));
        const NodeResult r = eval_node(config, lam, opts);
        const size_t idx = grid.node(ir, it);
        grid.values[idx] = r.value;
        grid.im_residual[idx] = r.imres;
        grid.flags[idx] = r.flag;
    };
    if (parallel) {
#pragma omp parallel for collapse(2) schedule(dynamic, 16)
        for (int ir = 0; ir < spec.n_r; ++ir)
            for (int it = 0; it < spec.n_theta; ++it) body(ir, it);
    } else {
        for (int ir = 0; ir < spec.n_r; ++ir)
            for (int it = 0; it < spec.n_theta; ++it) body(ir, it);
    }
    for (size_t i = 0; i < total; ++i) {
        if (grid.flags[i]) continue;
        grid.reality_residual = std::max(grid.reality_residual, grid.im_residual[i]);
        grid.max_abs = std::max(grid.max_abs, std::abs(grid.values[i]));
    }
    return grid;
}

}  // namespace

double ScanGrid::theta(int it) const { return 2.0 * kPi * it / spec.n_theta; }

Complex ScanGrid::lambda_at(int ir, int it) const {
    return std::polar(radii[static_cast<size_t>(ir)], theta(it));
}

ScanGrid scan_det_grid(const PotentialConfig& config, const GridSpec& spec,
                       const SolverOptions& opts) {
    return scan_impl(config, spec, opts, true);
}

ScanGrid scan_det_grid_serial(const PotentialConfig& config, const GridSpec& spec,
                              const SolverOptions& opts) {
    return scan_impl(config, spec, opts, false);
}

// ---------------------------------------------------------------------------
// Zero-curve extraction
// ---------------------------------------------------------------------------

namespace {

// Edge identifiers: radial edge R(ir,it) joins (ir,it)-(ir+1,it); tangential
// edge T(ir,it) joins (ir,it)-(ir,it+1 mod n_theta).
struct EdgeId {
    int ir, it;
    bool radial;
    bool operator<(const EdgeId& o) const {
        return std::tie(ir, it, radial) < std::tie(o.ir, o.it, o.radial);
    }
    bool operator==(const EdgeId& o) const {
        return ir == o.ir && it == o.it && radial == o.radial;
    }
};

double node_value(const ScanGrid& g, int ir, int it) { return g.values[g.node(ir, it)]; }
bool node_ok(const ScanGrid& g, int ir, int it) { return g.flags[g.node(ir, it)] == 0; }

Complex refine_edge(const ScanGrid& grid, const PotentialConfig& config, const EdgeId& e,
                    const SolverOptions& opts, double tol) {
    const int it2 = e.radial ? e.it : (e.it + 1) % grid.spec.n_theta;
    const int ir2 = e.radial ? e.ir + 1 : e.ir;
    // bisect in the natural grid coordinate (log-radius or angle)
    double ua, ub, va, vb;
    if (e.radial) {
        ua = std::log(grid.radii[static_cast<size_t>(e.ir)]);
        ub = std::log(grid.radii[static_cast<size_t>(ir2)]);
    } else {
        ua = grid.theta(e.it);
        ub = grid.theta(e.it) + 2.0 * kPi / grid.spec.n_theta;
    }
    va = node_value(grid, e.ir, e.it);
    vb = node_value(grid, ir2, it2);
    const double theta_fix = e.radial ? grid.theta(e.it) : 0.0;
    const double logr_fix = e.radial ? 0.0 : std::log(grid.radii[static_cast<size_t>(e.ir)]);
    const auto lambda_of = [&](double u) {
        return e.radial ? std::polar(std::exp(u), theta_fix) : std::polar(std::exp(logr_fix), u);
    };
    const auto value_of = [&](double u) {
        const ComplexMomentum k = lambda_to_k(LambdaCoord(lambda_of(u)), Energy(config.energy));
        return det_A(config, k, opts).value.real();
    };
    double best_u = std::abs(va) < std::abs(vb) ? ua : ub;
    double best_v = std::min(std::abs(va), std::abs(vb));
    for (int iter = 0; iter < 60 && best_v > tol; ++iter) {
        const double um = 0.5 * (ua + ub);
        const double vm = value_of(um);
        if (std::abs(vm) < best_v) {
            best_v = std::abs(vm);
            best_u = um;
        }
        if ((vm > 0.0) == (va > 0.0)) {
            ua = um;
            va = vm;
        } else {
            ub = um;
            vb = vm;
        }
    }
    return lambda_of(best_u);
}

}  // namespace

SingularCurveSet extract_zero_curves(const ScanGrid& grid, const PotentialConfig& config,
                                     const SolverOptions& opts, double refinement_tol) {
    SingularCurveSet out;
    out.refinement_tol = refinement_tol;
    const int nr = grid.spec.n_r, nt = grid.spec.n_theta;

    std::vector<std::pair<EdgeId, EdgeId>> segments;
    const auto edge_AB = [](int ir, int it) { return EdgeId{ir, it, true}; };
    const auto edge_BC = [](int ir, int it) { return EdgeId{ir + 1, it, false}; };
    const auto edge_CD = [nt](int ir, int it) { return EdgeId{ir, (it + 1) % nt, true}; };
    const auto edge_DA = [](int ir, int it) { return EdgeId{ir, it, false}; };

    for (int ir = 0; ir + 1 < nr; ++ir) {
        for (int it = 0; it < nt; ++it) {
            const int itn = (it + 1) % nt;
            if (!node_ok(grid, ir, it) || !node_ok(grid, ir + 1, it) ||
                !node_ok(grid, ir + 1, itn) || !node_ok(grid, ir, itn))
                continue;
            const double a = node_value(grid, ir, it);
            const double b = node_value(grid, ir + 1, it);
            const double c = node_value(grid, ir + 1, itn);
            const double d = node_value(grid, ir, itn);
            const int code = (a > 0.0 ? 1 : 0) | (b > 0.0 ? 2 : 0) | (c > 0.0 ? 4 : 0) |
                             (d > 0.0 ? 8 : 0);
            switch (code) {
                case 0:
                case 15: break;
                case 1:
                case 14: segments.emplace_back(edge_AB(ir, it), edge_DA(ir, it)); break;
                case 2:
                case 13: segments.emplace_back(edge_AB(ir, it), edge_BC(ir, it)); break;
                case 3:
                case 12: segments.emplace_back(edge_BC(ir, it), edge_DA(ir, it)); break;
                case 4:
                case 11: segments.emplace_back(edge_BC(ir, it), edge_CD(ir, it)); break;
                case 6:
                case 9: segments.emplace_back(edge_AB(ir, it), edge_CD(ir, it)); break;
                case 7:
                case 8: segments.emplace_back(edge_CD(ir, it), edge_DA(ir, it)); break;
                case 5:
                case 10: {  // saddle: resolve with the cell-center sample
                    const double center = 0.25 * (a + b + c + d);
                    const bool join_high = (code == 5) == (center > 0.0);
                    if (join_high) {
                        segments.emplace_back(edge_AB(ir, it), edge_BC(ir, it));
                        segments.emplace_back(edge_CD(ir, it), edge_DA(ir, it));
                    } else {
                        segments.emplace_back(edge_AB(ir, it), edge_DA(ir, it));
                        segments.emplace_back(edge_BC(ir, it), edge_CD(ir, it));
                    }
                    break;
                }
                default: break;
            }
        }
    }

    // refine every crossed edge once (shared endpoints stay consistent)
    std::vector<EdgeId> edges;
    edges.reserve(2 * segments.size());
    for (const auto& s : segments) {
        edges.push_back(s.first);
        edges.push_back(s.second);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<Complex> refined(edges.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (size_t i = 0; i < edges.size(); ++i)
        refined[i] = refine_edge(grid, config, edges[i], opts, refinement_tol);
    std::map<EdgeId, Complex> vertex;
    for (size_t i = 0; i < edges.size(); ++i) vertex[edges[i]] = refined[i];

    // chain segments into polylines
    std::multimap<EdgeId, size_t> by_edge;
    for (size_t s = 0; s < segments.size(); ++s) {
        by_edge.emplace(segments[s].first, s);
        by_edge.emplace(segments[s].second, s);
    }
    std::vector<bool> used(segments.size(), false);
    const auto next_segment = [&](const EdgeId& e, size_t current) -> long {
        auto [lo, hi] = by_edge.equal_range(e);
        for (auto it = lo; it != hi; ++it)
            if (it->second != current && !used[it->second]) return static_cast<long>(it->second);
        return -1;
    };
    for (size_t s0 = 0; s0 < segments.size(); ++s0) {
        if (used[s0]) continue;
        used[s0] = true;
        std::deque<EdgeId> chain{segments[s0].first, segments[s0].second};
        // extend forward
        for (;;) {
            const long nxt = next_segment(chain.back(), SIZE_MAX);
            if (nxt < 0) break;
            const size_t sn = static_cast<size_t>(nxt);
            used[sn] = true;
            chain.push_back(segments[sn].first == chain.back() ? segments[sn].second
                                                               : segments[sn].first);
            if (chain.back() == chain.front()) break;  // closed loop
        }
        if (!(chain.back() == chain.front())) {
            for (;;) {
                const long nxt = next_segment(chain.front(), SIZE_MAX);
                if (nxt < 0) break;
                const size_t sn = static_cast<size_t>(nxt);
                used[sn] = true;
                chain.push_front(segments[sn].first == chain.front() ? segments[sn].second
                                                                     : segments[sn].first);
            }
        }
        std::vector<Complex> poly;
        poly.reserve(chain.size());
        for (const EdgeId& e : chain) poly.push_back(vertex.at(e));
        if (poly.size() >= 2) out.curves.push_back(std::move(poly));
    }
    return out;
}

LambdaCoord refine_zero_bracketed(const PotentialConfig& config, Complex a, Complex b,
                                  const SolverOptions& opts, double tol, int max_iter) {
    const auto value_of = [&](Complex lam) {
        const ComplexMomentum k = lambda_to_k(LambdaCoord(lam), Energy(config.energy));
        return det_A(config, k, opts).value.real();
    };
    double va = value_of(a), vb = value_of(b);
    if ((va > 0.0) == (vb > 0.0)) throw NumericalError("refine_zero: endpoints do not bracket");
    Complex best = std::abs(va) < std::abs(vb) ? a : b;
    double best_v = std::min(std::abs(va), std::abs(vb));
    for (int i = 0; i < max_iter && best_v > tol; ++i) {
        const Complex m = 0.5 * (a + b);
        const double vm = value_of(m);
        if (std::abs(vm) < best_v) {
            best_v = std::abs(vm);
            best = m;
        }
        if ((vm > 0.0) == (va > 0.0)) {
            a = m;
            va = vm;
        } else {
            b = m;
            vb = vm;
        }
    }
    return LambdaCoord(best);
}

LambdaCoord refine_zero(const PotentialConfig& config, const LambdaCoord& seed, Complex direction,
                        double half_width, const SolverOptions& opts, double tol) {
    const double dn = std::abs(direction);
    if (!(dn > 0.0)) throw ConfigError("refine_zero: zero direction");
    direction /= dn;
    const auto value_of = [&](Complex lam) {
        const ComplexMomentum k = lambda_to_k(LambdaCoord(lam), Energy(config.energy));
        return det_A(config, k, opts).value.real();
    };
    // probe outward for a sign change
    const int probes = 16;
    const double v0 = value_of(seed.value);
    for (int i = 1; i <= probes; ++i) {
        const double t = half_width * i / probes;
        for (double sgn : {1.0, -1.0}) {
            const Complex cand = seed.value + sgn * t * direction;
            if ((value_of(cand) > 0.0) != (v0 > 0.0))
                return refine_zero_bracketed(config, seed.value, cand, opts, tol);
        }
    }
    throw NumericalError("refine_zero: no sign change bracketed near seed");
}

double real_singularity_alphas(const Vec& z1, const Vec& z2, const RealLimitMomentum& k,
                               const QuadratureSpec& spec) {
    if (z1.dim != 3 || k.dim() != 3) throw ConfigError("real_singularity_alphas requires d=3");
    if (!((z1 - z2).norm() > 0.0)) throw ConfigError("points must be distinct");
    const Complex g12 = eval_G_gamma(z1 - z2, k, spec).value;
    const Complex g21 = eval_G_gamma(z2 - z1, k, spec).value;
    const Complex product = g12 * g21;
    if (std::abs(product) < 1e-12)
        throw NumericalError("vanishing Green product: construction impossible here");
    if (std::abs(product.imag()) > 1e-6 * (1.0 + std::abs(product)))
        throw NumericalError("Green product unexpectedly non-real");
    return 1.0 / product.real();
}

std::pair<PotentialConfig, GridSpec> figure_preset(int id) {
    PotentialConfig cfg;
    cfg.dimension = 2;
    GridSpec grid;
    switch (id) {
        case 1:
            cfg.energy = 4.0;
            cfg.points = {Vec{0.0, 0.0}, Vec{0.5, 0.0}};
            cfg.alphas = {5.0, 6.0};
            break;
        case 2:
            cfg.energy = 6.0;
            cfg.points = {Vec{0.0, 0.0}, Vec{0.5, 0.0}};
            cfg.alphas = {5.0, 6.0};
            break;
        case 3:
            cfg.energy = 5.0;
            cfg.points = {Vec{0.0, 0.0}, Vec{10.0, 0.0}};
            cfg.alphas = {6.0, 6.0};
            break;
        case 4:
            cfg.energy = 5.0;
            cfg.points = {Vec{0.0, 0.0}, Vec{10.0, 0.0}};
            cfg.alphas = {6.0, 6.8};
            break;
        default: throw ConfigError("figure preset id must be in 1..4");
    }
    return {cfg, grid};
}

}  // namespace faddeev
