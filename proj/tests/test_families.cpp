#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sfk/curvature.hpp"
#include "sfk/families.hpp"

using namespace sfk;

namespace {

std::vector<GeometryBundle> catalog() {
    std::vector<GeometryBundle> out;
    out.push_back(flat_c2(1.0, 1.0));
    out.push_back(flat_c2(1.0, -1.0));
    out.push_back(lebrun_instanton(1, 1.0));
    out.push_back(lebrun_instanton(2, 0.5));
    out.push_back(lebrun_instanton(3, 1.0));
    out.push_back(s2_h2(S2H2Case::Elliptic));
    out.push_back(s2_h2(S2H2Case::Parabolic));
    out.push_back(s2_h2(S2H2Case::Hyperbolic));
    out.push_back(s2_h2(S2H2Case::Elliptic, S2H2Field::Combined));
    return out;
}

}  // namespace

TEST_CASE("catalog members are Kaehler with a Hamiltonian Killing field") {
    for (const auto& b : catalog()) {
        CAPTURE(b.name);
        CAPTURE(b.tag);
        std::mt19937_64 rng(7);
        for (int n = 0; n < 50; ++n) {
            const Point p = b.sample(rng);
            const Mat4 g = b.metric(p);
            const Mat4 J = b.J(p);
            const Mat4 J2 = matmul(J, J);
            const Mat4 gJJ = matmul(transpose(J), matmul(g, J));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    CHECK(J2[i][j] == doctest::Approx(i == j ? -1.0 : 0.0).epsilon(1e-12).scale(1.0));
                    CHECK(gJJ[i][j] == doctest::Approx(g[i][j]).epsilon(1e-12).scale(1.0));
                }
            // dz = -i_V w
            const FormValue w = FormValue::two_form(kahler_form(b, p));
            const FormValue iv = interior(b.V(p), w);
            const Vec4 dz = b.dz(p);
            for (int i = 0; i < 4; ++i) CHECK(std::abs(dz[i] + iv.at({i})) < 1e-8);
            // dz agrees with a numerical derivative of z
            const Vec4 dzn = gradient_fd(b.z, p, b.domain());
            for (int i = 0; i < 4; ++i) CHECK(std::abs(dz[i] - dzn[i]) < 1e-8);
            // dw = 0
            FormField wf(2, [&b](const Point& q) { return FormValue::two_form(kahler_form(b, q)); }, b.domain());
            CHECK(exterior_derivative(wf, p).max_abs() < 1e-8);
            // scalar flat
            const auto c = curvature_at(b.metric, p, b.orientation);
            CHECK(std::abs(c.scalar) < 1e-6);
        }
    }
}

TEST_CASE("orientation agrees with half w^w") {
    for (const auto& b : catalog()) {
        std::mt19937_64 rng(3);
        const Point p = b.sample(rng);
        const Mat4 g = b.metric(p);
        const FormValue w = FormValue::two_form(kahler_form(b, p));
        const FormValue half = 0.5 * wedge(w, w);
        CHECK(half.value() == doctest::Approx(volume_form(g, b.orientation).value()).epsilon(1e-12));
    }
}

TEST_CASE("instanton Ricci norm follows the closed form in w") {
    for (int k : {1, 2, 3})
        for (double m : {0.5, 1.0}) {
            const auto b = lebrun_instanton(k, m);
            std::mt19937_64 rng(11);
            for (int n = 0; n < 10; ++n) {
                const Point p = b.sample(rng);
                const auto c = curvature_at(b.metric, p, b.orientation, DerivativeMode::Analytic);
                const double w = p.x[0];
                const double expect = 16.0 * std::pow(m, 4) * (k - 2) * (k - 2) * std::exp(4.0 * w);
                CHECK(c.ric_norm_sq == doctest::Approx(expect).epsilon(1e-5).scale(1e-12));
            }
        }
}

TEST_CASE("product of unit curvatures has |Ric|^2 = 4") {
    const auto b = s2_h2(S2H2Case::Hyperbolic);
    std::mt19937_64 rng(5);
    const Point p = b.sample(rng);
    const auto c = curvature_at(b.metric, p, b.orientation);
    CHECK(c.ric_norm_sq == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(std::abs(c.scalar) < 1e-10);
}

TEST_CASE("analytic and finite-difference metric derivatives agree on the instanton") {
    const auto b = lebrun_instanton(3, 1.0);
    std::mt19937_64 rng(2);
    const Point p = b.sample(rng);
    const auto ga = christoffel(b.metric, p, DerivativeMode::Analytic);
    const auto gf = christoffel(b.metric, p, DerivativeMode::FiniteDifference);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) CHECK(std::abs(ga[i][j][k] - gf[i][j][k]) < 1e-6);
}

TEST_CASE("family construction errors") {
    CHECK_THROWS_AS(flat_c2(0.0, 0.0), FamilyError);
    CHECK_THROWS_AS(lebrun_instanton(0, 1.0), FamilyError);
    CHECK_THROWS_AS(lebrun_instanton(2, -1.0), FamilyError);
    CHECK_THROWS_AS(make_family("taub_nut", {}), FamilyError);
    CHECK_THROWS_AS(make_family("lebrun_instanton", {{"k", "2.5"}}), FamilyError);
    LebrunData d;
    d.u = [](const std::array<double, 3>&) { return 0.0; };
    d.w = [](const std::array<double, 3>&) { return -1.0; };
    CHECK_THROWS_AS(from_lebrun_data(d), FamilyError);
}

TEST_CASE("tags") {
    CHECK(flat_c2(1, 0).tag.find("circle x plane") != std::string::npos);
    CHECK(flat_c2(1, -1).tag.find("hyperboloid") != std::string::npos);
    CHECK(s2_h2(S2H2Case::Parabolic).tag.find("Type III") != std::string::npos);
}
