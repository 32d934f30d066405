// Level sets of the momentum and their Kähler reductions: quadrature on
// reduction charts, the quotient metric, its Gauss curvature and the two
// Euler numbers.
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "sfk/families.hpp"

namespace sfk {

struct ReductionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Successive quadrature orders disagreed beyond tolerance.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureRule {
    std::vector<Vec2> nodes;
    std::vector<double> weights;
    int order = 0;
};

// Gauss-Legendre nodes and weights on [-1, 1], in increasing order.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

// Tensor-product rule with order nodes per direction on the box.
QuadratureRule tensor_rule(const Vec2& lo, const Vec2& hi, int order);

struct QuadratureOptions {
    int order = 32;
    // Relative change allowed when the order is doubled.
    double tolerance = 1e-8;
    bool check_convergence = true;
    // Allowed V-derivative of the integrand at the spot checks, relative to max(1, |f|).
    double invariance = 1e-6;
};

struct QuadratureResult {
    double value = 0.0;
    double change = 0.0;  // relative change from order to 2 * order
    int order = 0;
};

// h_ab = g(P e_a, P e_b), P the projection orthogonal to V.
Mat2 reduced_metric(const GeometryBundle& b, const ReductionChart& chart, const Vec2& s);
double area_density(const GeometryBundle& b, const ReductionChart& chart, const Vec2& s);

ReductionChart reduction_chart(const GeometryBundle& b, double z);

// Integral over the chart box of integrand(s, embed(s)) * sqrt(det h).
QuadratureResult integrate_chart(const GeometryBundle& b, double z,
                                 const std::function<double(const Vec2&, const Point&)>& integrand,
                                 const QuadratureOptions& opt = {});

// Integral over M2_z of a V-invariant function; invariance is spot-checked.
QuadratureResult integrate_reduced(const GeometryBundle& b, double z, const ScalarField& f,
                                   const QuadratureOptions& opt = {});

// Integral over M3_z through the Integration Lemma: period * int |V| f dVol2.
QuadratureResult integrate_level_set(const GeometryBundle& b, double z, const ScalarField& f,
                                     const QuadratureOptions& opt = {});

double gauss_curvature(const GeometryBundle& b, const ReductionChart& chart, const Vec2& s);

double reduced_area(const GeometryBundle& b, double z, const QuadratureOptions& opt = {});
// (1/2pi) int K dVol2
double chi_g(const GeometryBundle& b, double z, const QuadratureOptions& opt = {});
// (1/4pi^2) int_{M3} |V|^-4 V_flat ^ dV_flat, reduced to M2_z.
double e_g(const GeometryBundle& b, double z, const QuadratureOptions& opt = {});

// Pointwise Chern-Simons density (V_flat ^ dV_flat)/dVol3 on the level set.
double chern_simons_density(const GeometryBundle& b, const ReductionChart& chart, const Vec2& s);

}  // namespace sfk
