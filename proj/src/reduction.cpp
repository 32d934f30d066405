#include "sfk/reduction.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <numbers>

#include "sfk/curvature.hpp"
#include "sfk/kahler_killing.hpp"
#include "sfk/parallel.hpp"

namespace sfk {

namespace {

constexpr double kPi = std::numbers::pi;

bool periodic_direction(const ReductionChart& c, int a) { return c.hi[a] - c.lo[a] >= 2.0 * kPi - 1e-12; }

// The Vec2 nodes of a rule together with a per-node value, reduced in
// node order.
double weighted_sum(const QuadratureRule& rule, const std::vector<double>& values) {
    std::vector<double> terms(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) terms[i] = rule.weights[i] * values[i];
    return pairwise_sum(terms);
}

double directional_fd(const ScalarField& f, const Point& p, const Vec4& v, const Domain& dom) {
    double big = 0.0;
    for (double c : v) big = std::max(big, std::abs(c));
    if (big == 0.0) return 0.0;
    double xmax = 1.0;
    for (double c : p.x) xmax = std::max(xmax, std::abs(c));
    const double h = 1e-4 * xmax / big;
    auto at = [&](double s) {
        Point q = p;
        for (int i = 0; i < 4; ++i) q.x[i] += s * v[i];
        if (!dom.contains(q.x)) throw ChartBoundaryError("invariance probe leaves the chart");
        return f(q);
    };
    return (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h);
}

Mat2 stencil2(const Mat2& m2, const Mat2& m1, const Mat2& p1, const Mat2& p2, double h) {
    Mat2 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = (m2[i][j] - 8.0 * m1[i][j] + 8.0 * p1[i][j] - p2[i][j]) / (12.0 * h);
    return r;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
    // Boost returns the non-negative roots in increasing order.
    const std::vector<double> half = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> x;
    x.reserve(n);
    for (auto it = half.rbegin(); it != half.rend(); ++it)
        if (*it != 0.0) x.push_back(-*it);
    for (double r : half) x.push_back(r);
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dp = boost::math::legendre_p_prime(n, x[i]);
        w[i] = 2.0 / ((1.0 - x[i] * x[i]) * dp * dp);
    }
    return {x, w};
}

QuadratureRule tensor_rule(const Vec2& lo, const Vec2& hi, int order) {
    const auto [x, w] = gauss_legendre(order);
    QuadratureRule r;
    r.order = order;
    const double c0 = 0.5 * (hi[0] + lo[0]), r0 = 0.5 * (hi[0] - lo[0]);
    const double c1 = 0.5 * (hi[1] + lo[1]), r1 = 0.5 * (hi[1] - lo[1]);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
            r.nodes.push_back({c0 + r0 * x[i], c1 + r1 * x[j]});
            r.weights.push_back(r0 * r1 * w[i] * w[j]);
        }
    return r;
}

ReductionChart reduction_chart(const GeometryBundle& b, double z) {
    if (!b.has_reduction()) throw ReductionError(b.name + " (" + b.tag + ") has no compact reductions");
    return b.reduction(z);
}

Mat2 reduced_metric(const GeometryBundle& b, const ReductionChart& chart, const Vec2& s) {
    const Point p = chart.embed(s);
    const Mat4 g = b.metric(p);
    const Vec4 V = b.V(p);
    const double vv = inner(g, V, V);
    if (!(vv > kSingularCutoff * kSingularCutoff)) throw SingularLocusError("V vanishes on the level set");
    auto e = chart.tangents(s);
    for (auto& t : e) {
        const double c = inner(g, t, V) / vv;
        for (int i = 0; i < 4; ++i) t[i] -= c * V[i];
    }
    Mat2 h{};
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) h[a][c] = inner(g, e[a], e[c]);
    const double det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if (!(det > 0.0) || !(h[0][0] > 0.0))
        throw ReductionError("reduction chart is tangent to V (degenerate quotient metric)");
    return h;
}

double area_density(const GeometryBundle& b, const ReductionChart& chart, const Vec2& s) {
    const Mat2 h = reduced_metric(b, chart, s);
    return std::sqrt(h[0][0] * h[1][1] - h[0][1] * h[1][0]);
}

QuadratureResult integrate_chart(const GeometryBundle& b, double z,
                                 const std::function<double(const Vec2&, const Point&)>& integrand,
                                 const QuadratureOptions& opt) {
    const ReductionChart chart = reduction_chart(b, z);
    auto run = [&](int order, double* abs_integral) {
        const QuadratureRule rule = tensor_rule(chart.lo, chart.hi, order);
        const auto values = parallel_map<double>(rule.nodes.size(), [&](std::size_t i) {
            const Vec2& s = rule.nodes[i];
            return integrand(s, chart.embed(s)) * area_density(b, chart, s);
        });
        if (abs_integral) {
            std::vector<double> mags(values.size());
            for (std::size_t i = 0; i < values.size(); ++i) mags[i] = std::abs(values[i]);
            *abs_integral = weighted_sum(rule, mags);
        }
        return weighted_sum(rule, values);
    };
    QuadratureResult r;
    r.order = opt.order;
    if (!opt.check_convergence) {
        r.value = run(opt.order, nullptr);
        return r;
    }
    const double coarse = run(opt.order, nullptr);
    double mag = 0.0;
    const double fine = run(2 * opt.order, &mag);
    const double box = (chart.hi[0] - chart.lo[0]) * (chart.hi[1] - chart.lo[1]);
    const double scale = std::max({std::abs(fine), mag, 1e-6 * box});
    r.value = fine;
    r.order = 2 * opt.order;
    r.change = std::abs(fine - coarse) / scale;
    if (r.change > opt.tolerance)
        throw QuadratureError("quadrature on " + b.name + " at z = " + std::to_string(z) +
                              " did not converge: relative change " + std::to_string(r.change));
    return r;
}

QuadratureResult integrate_reduced(const GeometryBundle& b, double z, const ScalarField& f,
                                   const QuadratureOptions& opt) {
    const ReductionChart chart = reduction_chart(b, z);
    // Spot-check invariance along V at three interior parameters.
    for (const double t : {0.23, 0.51, 0.77}) {
        const Vec2 s{chart.lo[0] + t * (chart.hi[0] - chart.lo[0]), chart.lo[1] + (1.0 - t) * (chart.hi[1] - chart.lo[1])};
        const Point p = chart.embed(s);
        const double rate = directional_fd(f, p, b.V(p), b.domain());
        if (std::abs(rate) > opt.invariance * std::max(1.0, std::abs(f(p))))
            throw ReductionError("integrand is not invariant under V (derivative " + std::to_string(rate) + ")");
    }
    return integrate_chart(b, z, [&f](const Vec2&, const Point& p) { return f(p); }, opt);
}

QuadratureResult integrate_level_set(const GeometryBundle& b, double z, const ScalarField& f,
                                     const QuadratureOptions& opt) {
    auto weighted = [&b, &f](const Point& p) {
        const Vec4 V = b.V(p);
        return std::sqrt(inner(b.metric(p), V, V)) * f(p);
    };
    QuadratureResult r = integrate_reduced(b, z, weighted, opt);
    r.value *= b.orbit_period;
    return r;
}

namespace {

// Local coordinates (u, v) around a reduction parameter, with the
// chart parameters and their Jacobian as functions of (u, v).
struct LocalChart {
    std::function<Vec2(const Vec2&)> to_s;
    std::function<Mat2(const Vec2&)> jac;  // jac[a][i] = d s_a / d u_i
    Vec2 centre{};
    std::array<double, 2> step{};
};

// Near a pole of a sphere chart the parameter s1 behaves like a momentum
// and (s1, s2) are polar-type coordinates; Cartesian coordinates centred on
// the pole keep the quotient metric smooth there.
LocalChart local_chart(const ReductionChart& chart, const Vec2& s) {
    LocalChart lc;
    const double lo = chart.lo[0], hi = chart.hi[0];
    const double quarter = 0.25 * (hi - lo);
    const bool sphere = chart.topology == "sphere" && periodic_direction(chart, 1);
    if (sphere && (s[0] > hi - quarter || s[0] < lo + quarter)) {
        const double sign = s[0] > hi - quarter ? -1.0 : 1.0;  // s1 = pole + sign * rho^2 / 2
        const double pole = sign < 0 ? hi : lo;
        const double s2c = s[1];
        lc.to_s = [=](const Vec2& u) {
            return Vec2{pole + sign * 0.5 * (u[0] * u[0] + u[1] * u[1]), s2c + std::atan2(u[1], u[0])};
        };
        lc.jac = [=](const Vec2& u) {
            const double r2 = u[0] * u[0] + u[1] * u[1];
            Mat2 J{};
            J[0][0] = sign * u[0];
            J[0][1] = sign * u[1];
            J[1][0] = -u[1] / r2;
            J[1][1] = u[0] / r2;
            return J;
        };
        const double rho = std::sqrt(2.0 * std::abs(s[0] - pole));
        lc.centre = {rho, 0.0};
        const double h = std::min(1e-3, 0.1 * rho);
        lc.step = {h, h};
        return lc;
    }
    lc.to_s = [](const Vec2& u) { return u; };
    lc.jac = [](const Vec2&) { return Mat2{{{1.0, 0.0}, {0.0, 1.0}}}; };
    lc.centre = s;
    for (int a = 0; a < 2; ++a) {
        double m = 1.0;
        if (!periodic_direction(chart, a)) m = std::min({1.0, s[a] - chart.lo[a], chart.hi[a] - s[a]});
        if (!(m > 0.0)) throw ChartBoundaryError("Gauss curvature requested on the chart edge");
        lc.step[a] = sphere ? 1e-3 * m : 0.01 * m;
    }
    return lc;
}

}  // namespace

double gauss_curvature(const GeometryBundle& b, const ReductionChart& chart, const Vec2& s) {
    const LocalChart lc = local_chart(chart, s);
    const auto& h = lc.step;
    auto at = [&](double d0, double d1) {
        const Vec2 u{lc.centre[0] + d0, lc.centre[1] + d1};
        const Mat2 hs = reduced_metric(b, chart, lc.to_s(u));
        const Mat2 J = lc.jac(u);
        Mat2 out{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int a = 0; a < 2; ++a)
                    for (int c = 0; c < 2; ++c) out[i][j] += J[a][i] * hs[a][c] * J[c][j];
        return out;
    };
    auto shift = [](int a, double v) { return a == 0 ? std::array<double, 2>{v, 0.0} : std::array<double, 2>{0.0, v}; };

    MetricDerivsN<2> m;
    m.g = at(0.0, 0.0);
    for (int k = 0; k < 2; ++k) {
        auto ev = [&](double v) {
            const auto d = shift(k, v);
            return at(d[0], d[1]);
        };
        m.dg[k] = stencil2(ev(-2 * h[k]), ev(-h[k]), ev(h[k]), ev(2 * h[k]), h[k]);
    }
    for (int k = 0; k < 2; ++k)
        for (int l = k; l < 2; ++l) {
            auto dk_at = [&](double sl) {
                auto ev = [&](double v) {
                    const auto d = shift(k, v);
                    const auto e = shift(l, sl);
                    return at(d[0] + e[0], d[1] + e[1]);
                };
                return stencil2(ev(-2 * h[k]), ev(-h[k]), ev(h[k]), ev(2 * h[k]), h[k]);
            };
            m.d2g[k][l] = stencil2(dk_at(-2 * h[l]), dk_at(-h[l]), dk_at(h[l]), dk_at(2 * h[l]), h[l]);
            m.d2g[l][k] = m.d2g[k][l];
        }
    const double det = m.g[0][0] * m.g[1][1] - m.g[0][1] * m.g[1][0];
    MatN<2> inv{};
    inv[0][0] = m.g[1][1] / det;
    inv[1][1] = m.g[0][0] / det;
    inv[0][1] = inv[1][0] = -m.g[0][1] / det;
    const auto rm = riemann_from<2>(m, inv);
    return rm[0][1][1][0] / det;
}

double reduced_area(const GeometryBundle& b, double z, const QuadratureOptions& opt) {
    return integrate_chart(b, z, [](const Vec2&, const Point&) { return 1.0; }, opt).value;
}

double chi_g(const GeometryBundle& b, double z, const QuadratureOptions& opt) {
    const ReductionChart chart = reduction_chart(b, z);
    const double total =
        integrate_chart(b, z, [&](const Vec2& s, const Point&) { return gauss_curvature(b, chart, s); }, opt).value;
    return total / (2.0 * kPi);
}

double chern_simons_density(const GeometryBundle& b, const ReductionChart& chart, const Vec2& s) {
    const Point p = chart.embed(s);
    const auto e = chart.tangents(s);
    const PointData d = point_data(b, p);
    auto eval3 = [&](const FormValue& a) { return interior(d.V, interior(e[1], interior(e[0], a))).value(); };
    const double top = eval3(wedge(d.v_flat, d.dv_flat));
    const double vol = eval3(dvol3_at(b, p));
    if (!(std::abs(vol) > 0.0)) throw ReductionError("reduction chart is tangent to V");
    return top / vol;
}

double e_g(const GeometryBundle& b, double z, const QuadratureOptions& opt) {
    const ReductionChart chart = reduction_chart(b, z);
    auto integrand = [&](const Vec2& s, const Point& p) {
        const Vec4 V = b.V(p);
        const double vv = inner(b.metric(p), V, V);
        return chern_simons_density(b, chart, s) / (vv * std::sqrt(vv));
    };
    const double total = integrate_chart(b, z, integrand, opt).value;
    return b.orbit_period * total / (4.0 * kPi * kPi);
}

}  // namespace sfk
