#include <cmath>

#include "doctest.h"
#include "sfk/curvature.hpp"
#include "sfk/families.hpp"

using namespace sfk;

TEST_CASE("flat metric in polar coordinates has no curvature") {
    MetricField g;
    g.chart = "polar";
    g.domain.lo = {0.0, -10.0, -10.0, -10.0};
    g.evaluator = [](const Point& p) {
        Mat4 m = identity4();
        m[1][1] = p.x[0] * p.x[0];
        return m;
    };
    const Point p{"polar", {1.3, 0.4, 0.2, -0.1}};
    const auto c = curvature_at(g, p, 1);
    CHECK(c.rm_norm_sq < 1e-10);
    // Gamma^r_tt = -r, Gamma^t_rt = 1/r
    const auto G = christoffel(g, p);
    CHECK(G[0][1][1] == doctest::Approx(-1.3).epsilon(1e-7));
    CHECK(G[1][0][1] == doctest::Approx(1 / 1.3).epsilon(1e-7));
    CHECK(G[1][1][0] == G[1][0][1]);
}

TEST_CASE("S2 x S2: symmetries, decomposition and Kaehler blocks") {
    const auto b = s2_s2();
    std::mt19937_64 rng(4);
    for (int i = 0; i < 4; ++i) {
        const Point p = b.sample(rng);
        for (auto mode : {DerivativeMode::Analytic, DerivativeMode::FiniteDifference}) {
            const auto c = curvature_at(b.metric, p, b.orientation, mode);
            const double tol = mode == DerivativeMode::Analytic ? 1e-12 : 1e-6;
            CHECK(c.scalar == doctest::Approx(4.0).epsilon(tol));
            CHECK(pair_symmetry_defect(c.riemann) < tol);
            CHECK(bianchi_defect(c.riemann) < tol);
            CHECK(decomposition_defect(c) < 10 * tol);
            CHECK(block_reassembly_defect(c, b.metric(p), b.orientation) < 10 * tol);
            // both factors have unit sectional curvature: Ric = g
            CHECK(c.ric_norm_sq == doctest::Approx(4.0).epsilon(tol));
            CHECK(c.traceless_ric_norm_sq < 10 * tol);
        }
        const auto k = kahler_curvature_checks(b.metric, b.J, p, b.orientation);
        CHECK(k.scalar == doctest::Approx(4.0));
        CHECK(k.rm_pp_vs_omega < 1e-12);
        CHECK(k.rm_pp_norm < 1e-12);
    }
}

TEST_CASE("sectional curvature sign convention") {
    // unit sphere factor: sec(d_theta, d_phi) = +1 with sec = Rm_ijji
    const auto b = s2_s2();
    const Point p{"product", {1.0, 0.3, 2.0, 0.5}};
    const auto c = curvature_at(b.metric, p, b.orientation);
    const Mat4 g = b.metric(p);
    const double sec = c.riemann[0][1][1][0] / (g[0][0] * g[1][1]);
    CHECK(sec == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scalar-flat Kaehler instantons have W+ = 0") {
    const auto b = lebrun_instanton(3, 1.0);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 4; ++i) {
        const Point p = b.sample(rng);
        const auto c = curvature_at(b.metric, p, b.orientation);
        CHECK(std::abs(c.scalar) < 1e-10);
        CHECK(c.weyl_plus_norm_sq < 1e-10);
        CHECK(pair_symmetry_defect(c.riemann) < 1e-10);
        CHECK(bianchi_defect(c.riemann) < 1e-10);
        CHECK(decomposition_defect(c) < 1e-9);
    }
}
