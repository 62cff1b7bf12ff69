#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "faddeev/regularization.hpp"
#include "support/oracles.hpp"

using namespace faddeev;
using testing::kTestPi;

namespace {

PotentialConfig single_point_d3(double alpha) {
    PotentialConfig cfg;
    cfg.dimension = 3;
    cfg.energy = 4.0;
    cfg.points = {Vec{0.0, 0.0, 0.0}};
    cfg.alphas = {alpha};
    return cfg;
}

}  // namespace

TEST_CASE("renormalized coupling") {
    // alpha = 5, N = 10, d = 3
    const double expect = 5.0 / (1.0 - 5.0 * 10.0 / (2.0 * kTestPi * kTestPi));
    CHECK(epsilon_of_N(5.0, 10.0, 3) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(expect == doctest::Approx(-3.2615).epsilon(1e-4));

    CHECK(epsilon_of_N(0.0, 7.0, 3) == 0.0);
    CHECK(epsilon_of_N(0.0, 7.0, 2) == 0.0);

    // pole: d=2 at ln N = 2 pi / alpha
    CHECK_THROWS_AS(epsilon_of_N(2.0 * kTestPi, std::exp(1.0), 2), ConfigError);
    CHECK_THROWS_AS(epsilon_of_N(5.0, 2.0 * kTestPi * kTestPi / 5.0, 3), ConfigError);
    CHECK_THROWS_AS(epsilon_of_N(5.0, -1.0, 3), ConfigError);

    CHECK(pole_proximity(5.0, 2.0 * kTestPi * kTestPi / 5.0, 3) == doctest::Approx(0.0));
    CHECK(pole_proximity(0.0, 100.0, 3) == std::numeric_limits<double>::infinity());
}

TEST_CASE("A_N entries approach the renormalized limits") {
    const ComplexMomentum k = build_k_3d(Energy(4.0), Vec{1, 0, 0}, Vec{0, 1, 0}, 1.2);
    const double beta = k.im_norm();
    SUBCASE("diagonal (d=3): eps_m(N) I_N / (2 pi)^3 -> alpha/(1 - alpha |Im k| / 4 pi)") {
        const double alpha = 5.0;
        const double target = alpha / (1.0 - alpha * beta / (4.0 * kTestPi));
        double prev = 1e300;
        for (double N : {50.0, 100.0, 200.0}) {
            const double eps = epsilon_of_N(alpha, N, 3);
            const Complex scaled =
                eps * cutoff_integral(N, k, 3, {}) / std::pow(2.0 * kTestPi, 3);
            const double err = std::abs(scaled - target);
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev < 2e-2 * std::abs(target));
    }
    SUBCASE("off-diagonal: ball integral / (2 pi)^d -> -g(z_m - z_j, k)") {
        const Vec dz{0.8, 0.0, 0.3};
        const Complex target = -eval_g(dz, k, {}).value;
        double prev = 1e300;
        for (double N : {25.0, 50.0, 100.0}) {
            const Complex scaled = ball_integral(dz, N, k, {}) / std::pow(2.0 * kTestPi, 3);
            const double err = std::abs(scaled - target);
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev < 2e-2 * (1.0 + std::abs(target)));
    }
    SUBCASE("small N sanity against the lattice oracle") {
        const Vec dz{0.8, 0.0, 0.3};
        const Complex ball = ball_integral(dz, 12.0, k, {});
        const Complex lattice = -std::pow(2.0 * kTestPi, 3) * oracle_g_direct(dz, k, 12.0, 0.12);
        CHECK(std::abs(ball - lattice) < 2e-3 * (1.0 + std::abs(ball)));
    }
}

TEST_CASE("cutoff model assembly and 1x1 solve") {
    const PotentialConfig cfg = single_point_d3(5.0);
    const CutoffModel model(cfg, 50.0);
    const ComplexMomentum k = build_k_3d(Energy(4.0), Vec{1, 0, 0}, Vec{0, 1, 0}, 1.2);
    const CMatrix A = assemble_A_N(model, k, {});
    REQUIRE(A.n == 1);
    const Complex I_N = cutoff_integral(50.0, k, 3, {}) / std::pow(2.0 * kTestPi, 3);
    CHECK(std::abs(A.at(0, 0) - (1.0 + model.eps[0] * I_N)) < 1e-12);

    const std::vector<Complex> c = solve_c_N(model, k, {});
    const Complex expect = model.eps[0] / (1.0 + model.eps[0] * I_N);
    CHECK(std::abs(c[0] - expect) < 1e-12 * (1.0 + std::abs(expect)));
}

TEST_CASE("inert coupling: c_N = 0 at every cutoff") {
    const PotentialConfig cfg = single_point_d3(0.0);
    const ComplexMomentum k = build_k_3d(Energy(4.0), Vec{1, 0, 0}, Vec{0, 1, 0}, 1.2);
    for (double N : {25.0, 100.0}) {
        const CutoffModel model(cfg, N);
        const std::vector<Complex> c = solve_c_N(model, k, {});
        CHECK(std::abs(c[0]) == 0.0);
    }
    const ConvergenceReport rep = convergence_study(cfg, k, {25.0, 50.0});
    for (const ConvergencePoint& p : rep.points) CHECK(p.err_abs == 0.0);
}

TEST_CASE("convergence: d=3 single point reaches the closed-form limit at rate ~1/N") {
    const PotentialConfig cfg = single_point_d3(5.0);
    const ComplexMomentum k = build_k_3d(Energy(4.0), Vec{1, 0, 0}, Vec{0, 1, 0}, 1.2);
    const ConvergenceReport rep = convergence_study(cfg, k, {25.0, 50.0, 100.0, 200.0});
    REQUIRE(rep.fit_valid);
    CHECK(rep.fitted_exponent <= -0.8);
    for (size_t i = 1; i < rep.points.size(); ++i)
        CHECK(rep.points[i].err_abs < rep.points[i - 1].err_abs);
    // the solver limit itself matches the closed form
    const double beta = k.im_norm();
    const Complex closed = 5.0 / (1.0 - 5.0 * beta / (4.0 * kTestPi));
    CHECK(std::abs(rep.c_limit[0] - closed) < 1e-6 * std::abs(closed));
}

TEST_CASE("convergence: d=2 two-point errors decrease monotonically") {
    PotentialConfig cfg;
    cfg.dimension = 2;
    cfg.energy = 4.0;
    cfg.points = {Vec{0.0, 0.0}, Vec{0.5, 0.0}};
    cfg.alphas = {5.0, 6.0};
    const ComplexMomentum k = lambda_to_k(LambdaCoord({1.7, 0.35}), Energy(4.0));
    const ConvergenceReport rep = convergence_study(cfg, k, {25.0, 50.0, 100.0});
    for (size_t i = 1; i < rep.points.size(); ++i) {
        CHECK_FALSE(rep.points[i].excluded);
        CHECK(rep.points[i].err_abs < rep.points[i - 1].err_abs);
    }
}

TEST_CASE("sweep excludes cutoffs within 5% of a renormalization pole") {
    // alpha chosen so the d=3 pole sits at N = 329 (approximately)
    const double alpha = 0.06;
    const double pole = 2.0 * kTestPi * kTestPi / alpha;
    const PotentialConfig cfg = single_point_d3(alpha);
    const ComplexMomentum k = build_k_3d(Energy(4.0), Vec{1, 0, 0}, Vec{0, 1, 0}, 1.2);
    const ConvergenceReport rep = convergence_study(cfg, k, {0.9 * pole, pole * 1.001, 1.2 * pole});
    REQUIRE(rep.points.size() == 3);
    CHECK_FALSE(rep.points[0].excluded);
    CHECK(rep.points[1].excluded);
    CHECK_FALSE(rep.points[2].excluded);
}

TEST_CASE("mu_N converges to the limiting mu") {
    const PotentialConfig cfg = single_point_d3(5.0);
    const ComplexMomentum k = build_k_3d(Energy(4.0), Vec{1, 0, 0}, Vec{0, 1, 0}, 1.2);
    const Vec x{0.5, 0.3, -0.4};
    const Complex mu_limit = eval_psi(cfg, x, k).mu;
    double prev = 1e300;
    for (double N : {25.0, 50.0, 100.0}) {
        const CutoffModel model(cfg, N);
        const double err = std::abs(eval_mu_N(model, x, k, {}) - mu_limit);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 5e-3);
}
