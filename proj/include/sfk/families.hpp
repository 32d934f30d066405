// Catalog of scalar-flat Kähler metrics with a Killing field.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sfk/curvature.hpp"
#include "sfk/forms.hpp"

namespace sfk {

struct FamilyError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnsupportedFamily : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A transversal section of the level set M3_z, parameterized over a box.
struct ReductionChart {
    double z = 0.0;
    Vec2 lo{}, hi{};
    std::function<Point(const Vec2&)> embed;
    // Exact pushforwards of d/ds1 and d/ds2.
    std::function<std::array<Vec4, 2>(const Vec2&)> tangents;
    std::string topology;
};

// Isothermal coordinates (x, y) on the reduction, constant along the
// gradient of the momentum.
struct IsothermalChart {
    std::function<Vec2(const Point&)> xy;
    // Exact differentials dx, dy as covectors.
    std::function<std::array<Vec4, 2>(const Point&)> dxy;
    // A point with the given (x, y, z) on a fixed section of the circle action.
    std::function<Point(double, double, double)> locate;
};

// Exact values supplied by closed forms; empty entries are unknown.
struct DeclaredValues {
    std::optional<double> chi_g;
    std::function<double(double)> e_g;
    std::function<double(double)> lap_z;  // only where constant on M2_z
    std::function<double(double)> vol2;
    std::function<double(double)> int_lap;
    std::function<double(double)> int_lap_sq;
    std::function<double(double)> int_ric_sq;
    std::function<double(double)> int_v_sq;
};

struct ZInterval {
    double lo = 0.0, hi = 0.0;
    bool contains(double z) const { return z >= lo && z <= hi; }
};

struct GeometryBundle {
    std::string name;
    std::map<std::string, double> params;
    std::string tag;

    MetricField metric;
    // (J v)^i = J[i][k] v^k on tangent vectors.
    std::function<Mat4(const Point&)> J;
    VectorField V;
    // dV[k][i] = d_k V^i, exact.
    std::function<Mat4(const Point&)> dV;
    ScalarField z;
    // Exact differential of the momentum.
    std::function<Vec4(const Point&)> dz;
    int orientation = 1;

    // Closed intervals of regular momentum values (with safety margins)
    // where level sets are compact and reductions are available.
    std::vector<ZInterval> regular;
    std::function<ReductionChart(double)> reduction;
    // Quotient map p -> (z(p), chart parameters of its orbit).
    std::function<std::pair<double, Vec2>(const Point&)> project;
    std::optional<IsothermalChart> isothermal;
    DeclaredValues declared;
    // Random regular point away from zeros of V and chart edges.
    std::function<Point(std::mt19937_64&)> sample;

    double orbit_period = 0.0;
    int fiber_multiplicity = 1;
    // Length scale for finite-difference steps in the chart.
    double scale = 1.0;

    const Domain& domain() const { return metric.domain; }
    const std::string& chart() const { return metric.chart; }
    bool has_reduction() const { return static_cast<bool>(reduction); }
    bool z_is_regular(double zv) const;
    const ZInterval& interval_for(double zv) const;
};

GeometryBundle flat_c2(double alpha, double beta);
GeometryBundle lebrun_instanton(int k, double m);

enum class S2H2Case { Elliptic, Parabolic, Hyperbolic };
enum class S2H2Field { Sphere, Hyperbolic, Combined };
GeometryBundle s2_h2(S2H2Case c, S2H2Field field = S2H2Field::Hyperbolic);

// Data (u, w, alpha) in coordinates (x, y, z); alpha = a_x dx + a_y dy + a_z dz.
struct LebrunData {
    std::function<double(const std::array<double, 3>&)> u;
    std::function<double(const std::array<double, 3>&)> w;
    std::function<std::array<double, 3>(const std::array<double, 3>&)> alpha;
    std::array<double, 3> lo{-1.0, -1.0, -1.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
};
GeometryBundle from_lebrun_data(const LebrunData& data);

// Product of two unit round spheres: Kähler with s = 4. Used to exercise
// the curvature block conventions on a metric that is not scalar-flat.
GeometryBundle s2_s2();

// Short identifier such as lebrun_instanton(k=3,m=1) for reports.
std::string family_label(const GeometryBundle& b);

std::string to_string(S2H2Case c);
std::string to_string(S2H2Field f);

// Kähler form w_ij = g(J d_i, d_j).
Mat4 kahler_form(const GeometryBundle& b, const Point& p);

// Named construction used by the command-line driver.
GeometryBundle make_family(const std::string& name, const std::map<std::string, std::string>& params);
std::vector<std::string> family_names();

}  // namespace sfk
