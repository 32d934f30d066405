#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sfk/curvature.hpp"
#include "sfk/kahler_killing.hpp"
#include "sfk/reduction.hpp"

using namespace sfk;
constexpr double pi = std::numbers::pi;

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
    const auto [x, w] = gauss_legendre(7);
    REQUIRE(x.size() == 7);
    double s0 = 0, s12 = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        s0 += w[i];
        s12 += w[i] * std::pow(x[i], 12);
    }
    CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s12 == doctest::Approx(2.0 / 13.0).epsilon(1e-13));
    const auto r = tensor_rule({-1.0, 0.0}, {1.0, 2 * pi}, 8);
    double area = 0;
    for (double wt : r.weights) area += wt;
    CHECK(area == doctest::Approx(4 * pi).epsilon(1e-14));
}

TEST_CASE("flat Hopf reduction") {
    const auto b = flat_c2(1, 1);
    const double z = -2.0;
    CHECK(reduced_area(b, z) == doctest::Approx(4 * pi).epsilon(1e-10));
    auto vsq = [&b](const Point& p) {
        const Vec4 V = b.V(p);
        return inner(b.metric(p), V, V);
    };
    CHECK(integrate_reduced(b, z, vsq).value == doctest::Approx(16 * pi).epsilon(1e-10));
    const auto chart = reduction_chart(b, z);
    CHECK(gauss_curvature(b, chart, {0.3, 1.0}) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(chi_g(b, z) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(e_g(b, z) == doctest::Approx(-1.0).epsilon(1e-10));
    // Vol3 of the round 3-sphere of radius 2.
    CHECK(integrate_level_set(b, z, [](const Point&) { return 1.0; }).value ==
          doctest::Approx(2 * pi * pi * 8).epsilon(1e-10));
}

TEST_CASE("instanton reductions") {
    for (int k : {1, 2, 3})
        for (double m : {0.5, 1.0}) {
            const auto b = lebrun_instanton(k, m);
            for (double z : {-3.0, -1.0, -0.2}) {
                CAPTURE(k);
                CAPTURE(m);
                CAPTURE(z);
                CHECK(reduced_area(b, z) == doctest::Approx(b.declared.vol2(z)).epsilon(1e-10));
                CHECK(e_g(b, z) == doctest::Approx(-k).epsilon(1e-10));
                CHECK(chi_g(b, z) == doctest::Approx(2.0).epsilon(1e-7));
                auto lap = [&b](const Point& p) { return laplacian_z(b, p); };
                CHECK(integrate_reduced(b, z, lap).value == doctest::Approx(b.declared.int_lap(z)).epsilon(1e-10));
                // Vol3 = (2 pi^2 / k) C^{3/2} sqrt(F)
                const double P = m * m - 2 * k * z;
                const double w = -std::log(P);
                const double F = 1 + m * m * (k - 2) * std::exp(w) - std::pow(m, 4) * (k - 1) * std::exp(2 * w);
                const double vol3 = 2 * pi * pi / k * std::pow(P, 1.5) * std::sqrt(F);
                CHECK(integrate_level_set(b, z, [](const Point&) { return 1.0; }).value ==
                      doctest::Approx(vol3).epsilon(1e-10));
            }
        }
}

TEST_CASE("product reductions") {
    for (auto c : {S2H2Case::Elliptic, S2H2Case::Parabolic, S2H2Case::Hyperbolic}) {
        const auto b = s2_h2(c);
        const double z = 1.5;
        CHECK(reduced_area(b, z) == doctest::Approx(4 * pi).epsilon(1e-10));
        CHECK(e_g(b, z) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
        CHECK(chi_g(b, z) == doctest::Approx(2.0).epsilon(1e-8));
        CHECK(gauss_curvature(b, reduction_chart(b, z), {0.1, 2.0}) == doctest::Approx(1.0).epsilon(1e-8));
    }
    const auto comb = s2_h2(S2H2Case::Elliptic, S2H2Field::Combined);
    for (double z : {0.5, 1.3, 3.0}) {
        CAPTURE(z);
        CHECK(reduced_area(comb, z) == doctest::Approx(comb.declared.vol2(z)).epsilon(1e-10));
        CHECK(e_g(comb, z) == doctest::Approx(comb.declared.e_g(z)).scale(1.0).epsilon(1e-10));
        CHECK(chi_g(comb, z) == doctest::Approx(2.0).epsilon(1e-7));
    }
}

TEST_CASE("reduction errors") {
    CHECK_THROWS_AS(reduced_area(flat_c2(1, 0), -1.0), ReductionError);
    CHECK_THROWS_AS(reduced_area(s2_h2(S2H2Case::Hyperbolic, S2H2Field::Sphere), 0.5), ReductionError);
    const auto b = flat_c2(1, 1);
    // Not invariant under the Hopf action.
    CHECK_THROWS_AS(integrate_reduced(b, -1.0, [](const Point& p) { return p.x[1]; }), ReductionError);
}
