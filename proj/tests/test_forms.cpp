#include <cmath>
#include <random>

#include "doctest.h"
#include "sfk/forms.hpp"

using namespace sfk;

namespace {

FormValue random_form(int k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    FormValue a(k);
    if (k == 0) return FormValue::scalar(U(rng));
    for (const auto& idx : sorted_indices(k)) a.set_sorted(idx.data(), U(rng));
    return a;
}

Mat4 random_metric(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-0.3, 0.3);
    Mat4 A{};
    for (auto& r : A)
        for (double& v : r) v = U(rng);
    Mat4 g = matmul(transpose(A), A);
    for (int i = 0; i < 4; ++i) g[i][i] += 1.0 + 0.2 * i;
    return g;
}

double diff(const FormValue& a, const FormValue& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("graded commutativity and associativity of the wedge product") {
    std::mt19937_64 rng(1);
    for (int p = 0; p <= 4; ++p)
        for (int q = 0; p + q <= 4; ++q) {
            const FormValue a = random_form(p, rng), b = random_form(q, rng);
            const double sign = ((p * q) % 2) ? -1.0 : 1.0;
            CHECK(diff(wedge(a, b), sign * wedge(b, a)) < 1e-14);
            for (int r = 0; p + q + r <= 4; ++r) {
                const FormValue c = random_form(r, rng);
                CHECK(diff(wedge(wedge(a, b), c), wedge(a, wedge(b, c))) < 1e-14);
            }
        }
}

TEST_CASE("coordinate conventions") {
    const FormValue e01 = wedge(FormValue::coordinate(0), FormValue::coordinate(1));
    CHECK(e01.at({0, 1}) == 1.0);
    CHECK(e01.at({1, 0}) == -1.0);
    CHECK(form_norm(e01, identity4()) == doctest::Approx(1.0));
    const FormValue vol = volume_form(identity4(), 1);
    CHECK(vol.at({0, 1, 2, 3}) == 1.0);
    CHECK(e01.antisymmetry_defect() == 0.0);
}

TEST_CASE("interior product is an antiderivation") {
    std::mt19937_64 rng(2);
    const Vec4 v{0.3, -1.2, 0.7, 2.0};
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; p + q <= 4; ++q) {
            const FormValue a = random_form(p, rng), b = random_form(q, rng);
            const double sign = (p % 2) ? -1.0 : 1.0;
            const FormValue rhs = wedge(interior(v, a), b) + sign * wedge(a, interior(v, b));
            CHECK(diff(interior(v, wedge(a, b)), rhs) < 1e-13);
        }
    const FormValue a = random_form(2, rng);
    CHECK(diff(interior(v, interior(v, a)), FormValue(0)) < 1e-15);
}

TEST_CASE("Hodge star: isometry, double dual signs, pairing") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const Mat4 g = random_metric(rng);
        const FormValue vol = volume_form(g, 1);
        for (int k = 0; k <= 4; ++k) {
            const FormValue a = random_form(k, rng), b = random_form(k, rng);
            const FormValue sa = hodge(a, g, 1);
            CHECK(form_norm(sa, g) == doctest::Approx(form_norm(a, g)).epsilon(1e-12));
            const double sign = (k % 2) ? -1.0 : 1.0;
            CHECK(diff(hodge(sa, g, 1), sign * a) < 1e-12);
            // a ^ *b = <a, b> dVol
            CHECK(diff(wedge(a, hodge(b, g, 1)), form_inner(a, b, g) * vol) < 1e-12);
            CHECK(diff(hodge(a, g, -1), -1.0 * sa) < 1e-15);
        }
    }
}

TEST_CASE("sharp and flat are inverse") {
    std::mt19937_64 rng(4);
    const Mat4 g = random_metric(rng);
    const Vec4 v{1.0, -0.5, 0.25, 3.0};
    const Vec4 back = sharp(flat(v, g), g);
    for (int i = 0; i < 4; ++i) CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-13));
}

TEST_CASE("exterior derivative") {
    const Point p{"c", {0.3, -0.4, 0.8, 1.1}};
    // d(x0 x2^2 dx1) = x2^2 dx0^dx1 + 2 x0 x2 dx2^dx1
    FormField a(1, [](const Point& q) {
        FormValue f(1);
        f.set({1}, q.x[0] * q.x[2] * q.x[2]);
        return f;
    });
    FormValue expect(2);
    expect.set({0, 1}, p.x[2] * p.x[2]);
    expect.set({2, 1}, 2 * p.x[0] * p.x[2]);
    CHECK(diff(exterior_derivative(a, p), expect) < 1e-9);

    // d o d = 0 on a non-polynomial 1-form
    FormField b(1, [](const Point& q) {
        return FormValue::one_form({std::sin(q.x[1] * q.x[2]), std::exp(q.x[0]) * q.x[3], std::cos(q.x[0] + q.x[3]),
                                    q.x[1] * q.x[1] * q.x[2]});
    });
    FormField db(2, [&b](const Point& q) { return exterior_derivative(b, q); });
    CHECK(exterior_derivative(db, p, 1e-3).max_abs() < 1e-7);

    // Cartan formula on a function: L_X f = X(f)
    VectorField X = [](const Point& q) { return Vec4{1.0, q.x[0], 0.0, -q.x[2]}; };
    FormField f = scalar_field([](const Point& q) { return q.x[0] * q.x[1] + q.x[3]; });
    const double lie = lie_derivative(X, f, p).value();
    CHECK(lie == doctest::Approx(p.x[1] + p.x[0] * p.x[0] - p.x[2]).epsilon(1e-9));
}

TEST_CASE("stencil leaving the chart") {
    Domain dom;
    dom.lo = {0.0, 0.0, 0.0, 0.0};
    dom.hi = {1.0, 1.0, 1.0, 1.0};
    FormField f(0, [](const Point& q) { return FormValue::scalar(q.x[0]); }, dom);
    CHECK_THROWS_AS(exterior_derivative(f, Point{"c", {1e-7, 0.5, 0.5, 0.5}}), ChartBoundaryError);
}
