#include "sfk/families.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>

#include "sfk/jet.hpp"

namespace sfk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
using Vec4T = std::array<T, 4>;
template <class T>
using Mat4T = std::array<std::array<T, 4>, 4>;

Vec4T<Jet<4>> jet_point(const Vec4& x) {
    Vec4T<Jet<4>> v;
    for (int i = 0; i < 4; ++i) v[i] = Jet<4>::variable(x[i], i);
    return v;
}

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    return a < 0.0 ? a + 2.0 * kPi : a;
}

// Fills the metric, Killing field and momentum of a bundle from a model with
// templated members metric<T>, killing<T> and momentum<T>.
template <class Model>
void attach_model(GeometryBundle& b, std::shared_ptr<const Model> m) {
    b.metric.evaluator = [m](const Point& p) { return m->template metric<double>(p.x); };
    b.metric.analytic = [m](const Point& p) {
        const auto G = m->template metric<Jet<4>>(jet_point(p.x));
        MetricDerivs d;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                d.g[i][j] = G[i][j].v;
                for (int k = 0; k < 4; ++k) {
                    d.dg[k][i][j] = G[i][j].d[k];
                    for (int l = 0; l < 4; ++l) d.d2g[k][l][i][j] = G[i][j].h[k][l];
                }
            }
        return d;
    };
    b.V = [m](const Point& p) { return m->template killing<double>(p.x); };
    b.dV = [m](const Point& p) {
        const auto v = m->template killing<Jet<4>>(jet_point(p.x));
        Mat4 d{};
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i) d[k][i] = v[i].d[k];
        return d;
    };
    b.z = [m](const Point& p) { return m->template momentum<double>(p.x); };
    b.dz = [m](const Point& p) {
        const auto z = m->template momentum<Jet<4>>(jet_point(p.x));
        return Vec4{z.d[0], z.d[1], z.d[2], z.d[3]};
    };
    b.J = [m](const Point& p) { return m->complex_structure(p.x); };
}

// Chart whose embedding is a generic callable (s1, s2) -> coordinates.
template <class Embed>
ReductionChart make_chart(double z, Vec2 lo, Vec2 hi, const std::string& chart, std::string topology,
                          Embed embed) {
    ReductionChart c;
    c.z = z;
    c.lo = lo;
    c.hi = hi;
    c.topology = std::move(topology);
    c.embed = [embed, chart](const Vec2& s) {
        const auto x = embed(s[0], s[1]);
        return Point{chart, {x[0], x[1], x[2], x[3]}};
    };
    c.tangents = [embed](const Vec2& s) {
        const auto x = embed(Jet<2>::variable(s[0], 0), Jet<2>::variable(s[1], 1));
        std::array<Vec4, 2> t{};
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < 4; ++i) t[a][i] = x[i].d[a];
        return t;
    };
    return c;
}

template <class XY>
IsothermalChart make_isothermal(XY xy, std::function<Point(double, double, double)> locate) {
    IsothermalChart c;
    c.xy = [xy](const Point& p) {
        const auto v = xy(p.x);
        return Vec2{v[0], v[1]};
    };
    c.dxy = [xy](const Point& p) {
        const auto v = xy(jet_point(p.x));
        std::array<Vec4, 2> d{};
        for (int a = 0; a < 2; ++a)
            for (int i = 0; i < 4; ++i) d[a][i] = v[a].d[i];
        return d;
    };
    c.locate = std::move(locate);
    return c;
}

int orientation_of(const GeometryBundle& b, const Point& p) {
    const FormValue w = FormValue::two_form(kahler_form(b, p));
    return wedge(w, w).value() > 0.0 ? 1 : -1;
}

// ---------------------------------------------------------------- flat C^2

struct FlatModel {
    double alpha, beta;

    template <class T>
    Mat4T<T> metric(const Vec4T<T>&) const {
        Mat4T<T> g{};
        for (int i = 0; i < 4; ++i) g[i][i] = T(1.0);
        return g;
    }
    template <class T>
    Vec4T<T> killing(const Vec4T<T>& x) const {
        return {alpha * x[1], -alpha * x[0], beta * x[3], -beta * x[2]};
    }
    template <class T>
    T momentum(const Vec4T<T>& x) const {
        return -0.5 * alpha * (x[0] * x[0] + x[1] * x[1]) - 0.5 * beta * (x[2] * x[2] + x[3] * x[3]);
    }
    Mat4 complex_structure(const Vec4&) const {
        Mat4 J{};
        J[1][0] = 1.0;
        J[0][1] = -1.0;
        J[3][2] = 1.0;
        J[2][3] = -1.0;
        return J;
    }
};

// ------------------------------------------------------- LeBrun instanton

struct LebrunModel {
    int k;
    double m;

    template <class T>
    T conformal(const T& w) const {
        using std::exp;
        return exp(-w);
    }
    template <class T>
    T profile(const T& w) const {
        using std::exp;
        const double m2 = m * m;
        return 1.0 + m2 * (k - 2) * exp(w) - m2 * m2 * (k - 1) * exp(2.0 * w);
    }
    // Rows: dw, eta1, eta2, eta3 in coordinates (w, psi, theta, phi).
    template <class T>
    Mat4T<T> coframe(const Vec4T<T>& x) const {
        using std::cos;
        using std::sin;
        const T &psi = x[1], &th = x[2];
        Mat4T<T> E{};
        E[0][0] = T(1.0);
        E[1][1] = T(0.5);
        E[1][3] = 0.5 * cos(th);
        E[2][2] = 0.5 * sin(psi);
        E[2][3] = -0.5 * cos(psi) * sin(th);
        E[3][2] = 0.5 * cos(psi);
        E[3][3] = 0.5 * sin(psi) * sin(th);
        return E;
    }
    template <class T>
    Mat4T<T> metric(const Vec4T<T>& x) const {
        using std::exp;
        const T C = conformal(x[0]);
        const T F = profile(x[0]);
        const std::array<T, 4> c = {C / (4.0 * F), C * F, C, C};
        const auto E = coframe(x);
        Mat4T<T> g{};
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                T s(0.0);
                for (int a = 0; a < 4; ++a) s = s + c[a] * E[a][i] * E[a][j];
                g[i][j] = s;
                g[j][i] = s;
            }
        return g;
    }
    template <class T>
    Vec4T<T> killing(const Vec4T<T>&) const {
        return {T(0.0), T(2.0 / k), T(0.0), T(0.0)};
    }
    template <class T>
    T momentum(const Vec4T<T>& x) const {
        using std::exp;
        return -(1.0 / (2.0 * k)) * (exp(-x[0]) - m * m);
    }
    double w_of_z(double z) const { return -std::log(m * m - 2.0 * k * z); }
    Mat4 complex_structure(const Vec4& x) const {
        const double F = profile(x[0]);
        const Mat4 E = coframe<double>(x);
        // eta o J = A eta on the coframe, so J = E^{-1} A E on vectors.
        Eigen::Matrix4d A = Eigen::Matrix4d::Zero(), Em;
        A(0, 1) = -2.0 * F;
        A(1, 0) = 1.0 / (2.0 * F);
        A(2, 3) = -1.0;
        A(3, 2) = 1.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) Em(i, j) = E[i][j];
        const Eigen::Matrix4d Jm = Em.inverse() * A * Em;
        Mat4 J{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) J[i][j] = Jm(i, j);
        return J;
    }
};

// ---------------------------------------------------------- S^2 x H^2

struct S2H2Model {
    S2H2Case kind;
    double a, b;  // V = a d/dtheta1 + b d/dtheta2

    template <class T>
    T warp(const T& r) const {
        using std::cosh;
        using std::exp;
        using std::sinh;
        switch (kind) {
            case S2H2Case::Elliptic:
                return sinh(r);
            case S2H2Case::Parabolic:
                return exp(r);
            default:
                return cosh(r);
        }
    }
    template <class T>
    T hyperbolic_momentum(const T& r) const {
        using std::cosh;
        using std::exp;
        using std::sinh;
        switch (kind) {
            case S2H2Case::Elliptic:
                return cosh(r);
            case S2H2Case::Parabolic:
                return exp(r);
            default:
                return sinh(r);
        }
    }
    double radius_of(double z2) const {
        switch (kind) {
            case S2H2Case::Elliptic:
                return std::acosh(z2);
            case S2H2Case::Parabolic:
                return std::log(z2);
            default:
                return std::asinh(z2);
        }
    }
    template <class T>
    Mat4T<T> metric(const Vec4T<T>& x) const {
        using std::sin;
        Mat4T<T> g{};
        const T s1 = sin(x[0]);
        const T f = warp(x[2]);
        g[0][0] = T(1.0);
        g[1][1] = s1 * s1;
        g[2][2] = T(1.0);
        g[3][3] = f * f;
        return g;
    }
    template <class T>
    Vec4T<T> killing(const Vec4T<T>&) const {
        return {T(0.0), T(a), T(0.0), T(b)};
    }
    template <class T>
    T momentum(const Vec4T<T>& x) const {
        using std::cos;
        return -a * cos(x[0]) + b * hyperbolic_momentum(x[2]);
    }
    Mat4 complex_structure(const Vec4& x) const {
        const double s1 = std::sin(x[0]);
        const double f = warp(x[2]);
        Mat4 J{};
        J[1][0] = 1.0 / s1;
        J[0][1] = -s1;
        J[3][2] = 1.0 / f;
        J[2][3] = -f;
        return J;
    }
};

struct S2S2Model {
    template <class T>
    Mat4T<T> metric(const Vec4T<T>& x) const {
        using std::sin;
        Mat4T<T> g{};
        const T s1 = sin(x[0]), s2 = sin(x[2]);
        g[0][0] = T(1.0);
        g[1][1] = s1 * s1;
        g[2][2] = T(1.0);
        g[3][3] = s2 * s2;
        return g;
    }
    template <class T>
    Vec4T<T> killing(const Vec4T<T>&) const {
        return {T(0.0), T(0.0), T(0.0), T(1.0)};
    }
    template <class T>
    T momentum(const Vec4T<T>& x) const {
        using std::cos;
        return -cos(x[2]);
    }
    Mat4 complex_structure(const Vec4& x) const {
        const double s1 = std::sin(x[0]), s2 = std::sin(x[2]);
        Mat4 J{};
        J[1][0] = 1.0 / s1;
        J[0][1] = -s1;
        J[3][2] = 1.0 / s2;
        J[2][3] = -s2;
        return J;
    }
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

bool GeometryBundle::z_is_regular(double zv) const {
    for (const auto& r : regular)
        if (r.contains(zv)) return true;
    return false;
}

const ZInterval& GeometryBundle::interval_for(double zv) const {
    for (const auto& r : regular)
        if (r.contains(zv)) return r;
    throw FamilyError("momentum value " + std::to_string(zv) + " is outside the regular range of " + name);
}

Mat4 kahler_form(const GeometryBundle& b, const Point& p) {
    const Mat4 g = b.metric(p);
    const Mat4 J = b.J(p);
    Mat4 w{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) w[i][j] += g[k][j] * J[k][i];
    return w;
}

GeometryBundle flat_c2(double alpha, double beta) {
    if (alpha == 0.0 && beta == 0.0) throw FamilyError("flat_c2 needs (alpha, beta) != (0, 0)");
    GeometryBundle b;
    b.name = "flat_c2";
    b.params = {{"alpha", alpha}, {"beta", beta}};
    b.metric.chart = "euclidean";
    auto model = std::make_shared<const FlatModel>(FlatModel{alpha, beta});
    attach_model(b, model);
    b.orbit_period = 2.0 * kPi / std::max(std::abs(alpha), std::abs(beta));

    if (alpha * beta > 0.0)
        b.tag = "compact level sets (sphere)";
    else if (alpha * beta == 0.0)
        b.tag = "non-compact level sets (circle x plane)";
    else
        b.tag = "non-compact level sets (hyperboloid of revolution)";

    const bool hopf = (alpha == 1.0 && beta == 1.0);
    if (hopf) {
        b.regular = {{-50.0, -0.05}};
        b.reduction = [](double z) {
            if (!(z < 0.0)) throw FamilyError("flat_c2 level sets need z < 0");
            const double R = std::sqrt(-2.0 * z);
            return make_chart(z, {-1.0, 0.0}, {1.0, 2.0 * kPi}, "euclidean", "sphere", [R](auto s1, auto s2) {
                using std::cos;
                using std::sin;
                using std::sqrt;
                const auto c = sqrt(0.5 * (1.0 + s1));
                const auto s = sqrt(0.5 * (1.0 - s1));
                using T = decltype(c);
                return std::array<T, 4>{R * c, T(0.0), R * s * cos(s2), R * s * sin(s2)};
            });
        };
        b.project = [model](const Point& p) {
            const auto& x = p.x;
            const double r1 = x[0] * x[0] + x[1] * x[1], r2 = x[2] * x[2] + x[3] * x[3];
            const double s2 = wrap_angle(std::atan2(x[3], x[2]) - std::atan2(x[1], x[0]));
            return std::make_pair(model->momentum<double>(x), Vec2{(r1 - r2) / (r1 + r2), s2});
        };
        b.declared.chi_g = 2.0;
        b.declared.e_g = [](double) { return -1.0; };
        b.declared.lap_z = [](double) { return -4.0; };
        b.declared.vol2 = [](double z) { return -2.0 * kPi * z; };
        b.declared.int_lap = [](double z) { return 8.0 * kPi * z; };
        b.declared.int_lap_sq = [](double z) { return -32.0 * kPi * z; };
        b.declared.int_ric_sq = [](double) { return 0.0; };
        b.declared.int_v_sq = [](double z) { return 4.0 * kPi * z * z; };
        b.sample = [](std::mt19937_64& rng) {
            const double z = uniform(rng, -3.0, -0.2);
            std::normal_distribution<double> n(0.0, 1.0);
            Vec4 v{n(rng), n(rng), n(rng), n(rng)};
            const double len = std::sqrt(dot(v, v));
            const double R = std::sqrt(-2.0 * z);
            for (double& c : v) c *= R / len;
            return Point{"euclidean", v};
        };
    } else {
        b.sample = [alpha, beta](std::mt19937_64& rng) {
            for (;;) {
                Vec4 v{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
                const double vv = alpha * alpha * (v[0] * v[0] + v[1] * v[1]) +
                                  beta * beta * (v[2] * v[2] + v[3] * v[3]);
                if (vv > 0.04) return Point{"euclidean", v};
            }
        };
    }

    // Holomorphic V-invariant functions give the isothermal chart.
    if (hopf) {
        b.isothermal = make_isothermal(
            [](const auto& x) {
                // z2 / z1
                const auto n = x[0] * x[0] + x[1] * x[1];
                using T = std::decay_t<decltype(n)>;
                return std::array<T, 2>{(x[2] * x[0] + x[3] * x[1]) / n, (x[3] * x[0] - x[2] * x[1]) / n};
            },
            [](double x, double y, double z) {
                const double a = std::sqrt(-2.0 * z / (1.0 + x * x + y * y));
                return Point{"euclidean", {a, 0.0, a * x, a * y}};
            });
    } else if (beta == 0.0) {
        const double al = alpha;
        b.isothermal = make_isothermal(
            [](const auto& x) {
                using T = std::decay_t<decltype(x[0])>;
                return std::array<T, 2>{x[2], x[3]};
            },
            [al](double x, double y, double z) {
                return Point{"euclidean", {std::sqrt(-2.0 * z / al), 0.0, x, y}};
            });
    } else if (alpha == 0.0) {
        const double be = beta;
        b.isothermal = make_isothermal(
            [](const auto& x) {
                using T = std::decay_t<decltype(x[0])>;
                return std::array<T, 2>{x[0], x[1]};
            },
            [be](double x, double y, double z) {
                return Point{"euclidean", {x, y, std::sqrt(-2.0 * z / be), 0.0}};
            });
    }
    b.orientation = orientation_of(b, Point{"euclidean", {0.3, 0.2, 0.1, 0.4}});
    return b;
}

GeometryBundle lebrun_instanton(int k, double m) {
    if (k < 1) throw FamilyError("lebrun_instanton needs k >= 1");
    if (!(m > 0.0)) throw FamilyError("lebrun_instanton needs m > 0");
    GeometryBundle b;
    b.name = "lebrun_instanton";
    b.params = {{"k", static_cast<double>(k)}, {"m", m}};
    b.tag = "Type IIa; level sets L(k,1), reductions 2-spheres";
    b.metric.chart = "euler";
    b.metric.domain.lo = {-kInf, -kInf, 0.0, -kInf};
    b.metric.domain.hi = {-std::log(m * m), kInf, kPi, kInf};
    auto model = std::make_shared<const LebrunModel>(LebrunModel{k, m});
    // F must stay positive on the chart; its only root is the bolt.
    for (double w = -12.0; w < -std::log(m * m) - 1e-9; w += 0.01)
        if (model->profile(w) <= 0.0) throw FamilyError("lebrun_instanton profile is not positive");
    attach_model(b, model);
    // psi has period 4 pi / k on the lens quotient, so V = (2/k) d/dpsi has period 2 pi.
    b.orbit_period = 2.0 * kPi;
    b.fiber_multiplicity = 1;
    const double m2 = m * m;
    b.regular = {{-1000.0, -0.05 * m2}};
    b.reduction = [model](double z) {
        if (!(z < 0.0)) throw FamilyError("lebrun_instanton level sets need z < 0");
        const double w = model->w_of_z(z);
        return make_chart(z, {-1.0, 0.0}, {1.0, 2.0 * kPi}, "euler", "sphere", [w](auto s1, auto s2) {
            using std::acos;
            using T = decltype(s1);
            return std::array<T, 4>{T(w), T(0.0), acos(s1), s2};
        });
    };
    b.project = [model](const Point& p) {
        return std::make_pair(model->momentum<double>(p.x), Vec2{std::cos(p.x[2]), wrap_angle(p.x[3])});
    };
    b.isothermal = make_isothermal(
        [](const auto& x) {
            using std::cos;
            using std::sin;
            using T = std::decay_t<decltype(x[0])>;
            const T t = sin(x[2]) / (1.0 + cos(x[2]));  // tan(theta / 2)
            return std::array<T, 2>{t * cos(x[3]), t * sin(x[3])};
        },
        [model](double x, double y, double z) {
            return Point{"euler", {model->w_of_z(z), 0.0, 2.0 * std::atan(std::hypot(x, y)), std::atan2(y, x)}};
        });

    const double kk = k;
    b.declared.chi_g = 2.0;
    b.declared.e_g = [kk](double) { return -kk; };
    b.declared.lap_z = [kk, m2](double z) { return -2.0 * (-4.0 * z + m2) / (-2.0 * kk * z + m2); };
    b.declared.vol2 = [kk, m2](double z) { return kPi * (-2.0 * kk * z + m2); };
    b.declared.int_lap = [m2](double z) { return 2.0 * kPi * (4.0 * z - m2); };
    b.declared.int_lap_sq = [kk, m2](double z) {
        const double q = -4.0 * z + m2;
        return 4.0 * kPi * q * q / (-2.0 * kk * z + m2);
    };
    b.declared.int_ric_sq = [kk, m2](double z) {
        const double P = -2.0 * kk * z + m2;
        return 16.0 * kPi * m2 * m2 * (kk - 2.0) * (kk - 2.0) / (P * P * P);
    };
    b.declared.int_v_sq = [kk, m2](double z) {
        const double P = -2.0 * kk * z + m2;
        return kPi * (P * P + m2 * (kk - 2.0) * P - m2 * m2 * (kk - 1.0)) / (kk * kk);
    };
    b.sample = [k, m2](std::mt19937_64& rng) {
        const double z = uniform(rng, -3.0, -0.1 * m2);
        const double w = -std::log(m2 - 2.0 * k * z);
        return Point{"euler", {w, uniform(rng, 0.0, 4.0 * kPi / k), uniform(rng, 0.15, kPi - 0.15),
                               uniform(rng, 0.0, 2.0 * kPi)}};
    };
    b.orientation = orientation_of(b, Point{"euler", {model->w_of_z(-1.0), 0.3, 1.0, 0.5}});
    return b;
}

std::string to_string(S2H2Case c) {
    switch (c) {
        case S2H2Case::Elliptic:
            return "elliptic";
        case S2H2Case::Parabolic:
            return "parabolic";
        default:
            return "hyperbolic";
    }
}

std::string to_string(S2H2Field f) {
    switch (f) {
        case S2H2Field::Sphere:
            return "sphere";
        case S2H2Field::Hyperbolic:
            return "hyperbolic";
        default:
            return "combined";
    }
}

GeometryBundle s2_h2(S2H2Case c, S2H2Field field) {
    if (field == S2H2Field::Combined && c != S2H2Case::Elliptic)
        throw FamilyError("the combined field is only catalogued for the elliptic case");
    GeometryBundle b;
    b.name = "s2_h2";
    b.params = {{"case", static_cast<double>(static_cast<int>(c))},
                {"field", static_cast<double>(static_cast<int>(field))}};
    b.metric.chart = "product";
    b.metric.domain.lo = {0.0, -kInf, c == S2H2Case::Elliptic ? 0.0 : -kInf, -kInf};
    b.metric.domain.hi = {kPi, kInf, kInf, kInf};
    const double a = (field == S2H2Field::Hyperbolic) ? 0.0 : 1.0;
    const double bb = (field == S2H2Field::Sphere) ? 0.0 : 1.0;
    auto model = std::make_shared<const S2H2Model>(S2H2Model{c, a, bb});
    attach_model(b, model);
    b.orbit_period = 2.0 * kPi;
    b.tag = to_string(c) + " case, field " + to_string(field);
    if (c == S2H2Case::Parabolic) b.tag += "; Type III (cusp end, |V| -> 0 as z -> 0)";

    const double r2lo = (c == S2H2Case::Elliptic) ? 0.3 : -2.0;
    const double r2hi = (c == S2H2Case::Elliptic) ? 2.5 : 2.0;
    b.sample = [r2lo, r2hi](std::mt19937_64& rng) {
        return Point{"product", {uniform(rng, 0.15, kPi - 0.15), uniform(rng, 0.0, 2.0 * kPi),
                                 uniform(rng, r2lo, r2hi), uniform(rng, 0.0, 2.0 * kPi)}};
    };

    if (field == S2H2Field::Hyperbolic) {
        switch (c) {
            case S2H2Case::Elliptic:
                b.regular = {{1.05, 50.0}};
                break;
            case S2H2Case::Parabolic:
                b.regular = {{0.05, 50.0}};
                break;
            default:
                b.regular = {{-50.0, 50.0}};
        }
        b.reduction = [model](double z) {
            const double r2 = model->radius_of(z);
            return make_chart(z, {-1.0, 0.0}, {1.0, 2.0 * kPi}, "product", "sphere", [r2](auto s1, auto s2) {
                using std::acos;
                using T = decltype(s1);
                return std::array<T, 4>{acos(s1), s2, T(r2), T(0.0)};
            });
        };
        b.project = [model](const Point& p) {
            return std::make_pair(model->momentum<double>(p.x), Vec2{std::cos(p.x[0]), wrap_angle(p.x[1])});
        };
        b.isothermal = make_isothermal(
            [](const auto& x) {
                using std::cos;
                using std::sin;
                using T = std::decay_t<decltype(x[0])>;
                const T t = sin(x[0]) / (1.0 + cos(x[0]));
                return std::array<T, 2>{t * cos(x[1]), t * sin(x[1])};
            },
            [model](double x, double y, double z) {
                return Point{"product",
                             {2.0 * std::atan(std::hypot(x, y)), std::atan2(y, x), model->radius_of(z), 0.0}};
            });
        const double shift = (c == S2H2Case::Elliptic) ? -1.0 : (c == S2H2Case::Parabolic ? 0.0 : 1.0);
        b.declared.chi_g = 2.0;
        b.declared.e_g = [](double) { return 0.0; };
        b.declared.lap_z = [](double z) { return 2.0 * z; };
        b.declared.vol2 = [](double) { return 4.0 * kPi; };
        b.declared.int_lap = [](double z) { return 8.0 * kPi * z; };
        b.declared.int_lap_sq = [](double z) { return 16.0 * kPi * z * z; };
        b.declared.int_ric_sq = [](double) { return 16.0 * kPi; };
        b.declared.int_v_sq = [shift](double z) { return 4.0 * kPi * (z * z + shift); };
    } else if (field == S2H2Field::Combined) {
        // z = -cos r1 + cosh r2; V vanishes at z = 0 and z = 2.
        b.regular = {{0.05, 1.95}, {2.05, 50.0}};
        b.reduction = [](double z) {
            if (!(z > 0.0) || z == 2.0) throw FamilyError("combined field level set is singular");
            const double top = std::min(1.0, z - 1.0);
            return make_chart(z, {-1.0, 0.0}, {top, 2.0 * kPi}, "product", "sphere", [z](auto s1, auto s2) {
                using std::acos;
                using std::acosh;
                using T = decltype(s1);
                return std::array<T, 4>{acos(-s1), s2, acosh(z - s1), T(0.0)};
            });
        };
        b.project = [model](const Point& p) {
            return std::make_pair(model->momentum<double>(p.x),
                                  Vec2{-std::cos(p.x[0]), wrap_angle(p.x[1] - p.x[3])});
        };
        b.declared.chi_g = 2.0;
        b.declared.e_g = [](double z) { return z < 2.0 ? 1.0 : 0.0; };
        b.declared.vol2 = [](double z) { return z < 2.0 ? 2.0 * kPi * z : 4.0 * kPi; };
        b.declared.int_lap = [](double z) { return 8.0 * kPi * z; };
        b.declared.int_v_sq = [](double z) {
            const double t = std::min(1.0, z - 1.0);
            return 2.0 * kPi * (z * z * t - z * t * t + z * z + z);
        };
        b.declared.int_ric_sq = [](double z) { return 4.0 * (z < 2.0 ? 2.0 * kPi * z : 4.0 * kPi); };
    } else {
        b.tag += "; level sets circle x hyperbolic plane (non-compact)";
    }
    b.orientation = orientation_of(b, Point{"product", {1.0, 0.2, 0.7, 0.3}});
    return b;
}

GeometryBundle s2_s2() {
    GeometryBundle b;
    b.name = "s2_s2";
    b.tag = "product of unit spheres (s = 4, not scalar-flat)";
    b.metric.chart = "product";
    b.metric.domain.lo = {0.0, -kInf, 0.0, -kInf};
    b.metric.domain.hi = {kPi, kInf, kPi, kInf};
    attach_model(b, std::make_shared<const S2S2Model>());
    b.orbit_period = 2.0 * kPi;
    b.sample = [](std::mt19937_64& rng) {
        return Point{"product", {uniform(rng, 0.15, kPi - 0.15), uniform(rng, 0.0, 2.0 * kPi),
                                 uniform(rng, 0.15, kPi - 0.15), uniform(rng, 0.0, 2.0 * kPi)}};
    };
    b.orientation = orientation_of(b, Point{"product", {1.0, 0.2, 0.7, 0.3}});
    return b;
}

GeometryBundle from_lebrun_data(const LebrunData& data) {
    if (!data.u || !data.w) throw FamilyError("from_lebrun_data needs u and w");
    GeometryBundle b;
    b.name = "lebrun_data";
    b.tag = "local LeBrun-form metric (Kähler condition not assumed)";
    b.metric.chart = "lebrun";
    b.metric.domain.lo = {data.lo[0], data.lo[1], data.lo[2], -kInf};
    b.metric.domain.hi = {data.hi[0], data.hi[1], data.hi[2], kInf};
    auto alpha = data.alpha ? data.alpha : [](const std::array<double, 3>&) { return std::array<double, 3>{}; };
    auto uf = data.u, wf = data.w;
    auto beta = [alpha](const Vec4& x) {
        const auto a = alpha({x[0], x[1], x[2]});
        return Vec4{a[0], a[1], a[2], 1.0};
    };
    auto weight = [wf](const Vec4& x) {
        const double w = wf({x[0], x[1], x[2]});
        if (!(w > 0.0)) throw FamilyError("LeBrun data needs w > 0");
        return w;
    };
    b.metric.evaluator = [uf, weight, beta](const Point& p) {
        const double w = weight(p.x);
        const double eu = std::exp(uf({p.x[0], p.x[1], p.x[2]}));
        const Vec4 bt = beta(p.x);
        Mat4 g{};
        g[0][0] = g[1][1] = w * eu;
        g[2][2] = w;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) g[i][j] += bt[i] * bt[j] / w;
        return g;
    };
    // w e^u dx^dy + dz ^ (dt + alpha), with J = -g^{-1} w.
    auto omega = [uf, weight, beta](const Vec4& x) {
        const double w = weight(x);
        const double eu = std::exp(uf({x[0], x[1], x[2]}));
        const Vec4 bt = beta(x);
        Mat4 o{};
        o[0][1] = w * eu;
        o[1][0] = -w * eu;
        for (int j = 0; j < 4; ++j) {
            o[2][j] += bt[j];
            o[j][2] -= bt[j];
        }
        return o;
    };
    const MetricField metric = b.metric;
    b.J = [metric, omega](const Point& p) {
        const Mat4 gi = inverse_spd(metric(p));
        const Mat4 o = omega(p.x);
        Mat4 J{};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k)
                for (int j = 0; j < 4; ++j) J[i][k] -= gi[i][j] * o[j][k];
        return J;
    };
    b.V = [](const Point&) { return Vec4{0.0, 0.0, 0.0, 1.0}; };
    b.dV = [](const Point&) { return Mat4{}; };
    b.z = [](const Point& p) { return p.x[2]; };
    b.dz = [](const Point&) { return Vec4{0.0, 0.0, 1.0, 0.0}; };
    b.orbit_period = 2.0 * kPi;
    IsothermalChart iso;
    iso.xy = [](const Point& p) { return Vec2{p.x[0], p.x[1]}; };
    iso.dxy = [](const Point&) { return std::array<Vec4, 2>{Vec4{1, 0, 0, 0}, Vec4{0, 1, 0, 0}}; };
    iso.locate = [](double x, double y, double z) { return Point{"lebrun", {x, y, z, 0.0}}; };
    b.isothermal = iso;
    const auto lo = data.lo, hi = data.hi;
    b.sample = [lo, hi](std::mt19937_64& rng) {
        Vec4 x{};
        for (int i = 0; i < 3; ++i) {
            const double pad = 0.1 * (hi[i] - lo[i]);
            x[i] = uniform(rng, lo[i] + pad, hi[i] - pad);
        }
        x[3] = uniform(rng, -1.0, 1.0);
        return Point{"lebrun", x};
    };
    b.scale = 0.1 * std::min({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
    b.metric.scale = std::min(1.0, b.scale);
    Point mid{"lebrun", {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2]), 0.0}};
    b.orientation = orientation_of(b, mid);
    return b;
}

std::vector<std::string> family_names() {
    return {"flat_c2", "lebrun_instanton", "eguchi_hanson", "s2_h2", "lebrun_flat"};
}

std::string family_label(const GeometryBundle& b) {
    std::string out = b.name + "(";
    bool first = true;
    for (const auto& [key, v] : b.params) {
        std::string val;
        if (b.name == "s2_h2" && key == "case")
            val = to_string(static_cast<S2H2Case>(static_cast<int>(v)));
        else if (b.name == "s2_h2" && key == "field")
            val = to_string(static_cast<S2H2Field>(static_cast<int>(v)));
        else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", v);
            val = buf;
        }
        out += (first ? "" : ",") + key + "=" + val;
        first = false;
    }
    return out + ")";
}

GeometryBundle make_family(const std::string& name, const std::map<std::string, std::string>& params) {
    auto num = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        if (it == params.end()) return fallback;
        try {
            size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument(key);
            return v;
        } catch (const std::exception&) {
            throw FamilyError("parameter '" + key + "' is not a number: " + it->second);
        }
    };
    auto str = [&](const std::string& key, const std::string& fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "flat_c2") return flat_c2(num("alpha", 1.0), num("beta", 1.0));
    if (name == "lebrun_instanton") {
        const double kd = num("k", 3.0);
        if (kd != std::floor(kd)) throw FamilyError("k must be an integer");
        return lebrun_instanton(static_cast<int>(kd), num("m", 1.0));
    }
    if (name == "eguchi_hanson") return lebrun_instanton(2, num("m", 1.0));
    if (name == "s2_h2") {
        const std::string c = str("case", "hyperbolic"), f = str("field", "hyperbolic");
        S2H2Case cc;
        if (c == "elliptic")
            cc = S2H2Case::Elliptic;
        else if (c == "parabolic")
            cc = S2H2Case::Parabolic;
        else if (c == "hyperbolic")
            cc = S2H2Case::Hyperbolic;
        else
            throw FamilyError("unknown s2_h2 case: " + c);
        S2H2Field ff;
        if (f == "sphere")
            ff = S2H2Field::Sphere;
        else if (f == "hyperbolic")
            ff = S2H2Field::Hyperbolic;
        else if (f == "combined")
            ff = S2H2Field::Combined;
        else
            throw FamilyError("unknown s2_h2 field: " + f);
        return s2_h2(cc, ff);
    }
    if (name == "lebrun_flat") {
        LebrunData d;
        d.u = [](const std::array<double, 3>&) { return 0.0; };
        d.w = [](const std::array<double, 3>&) { return 1.0; };
        return from_lebrun_data(d);
    }
    throw FamilyError("unknown family: " + name);
}

}  // namespace sfk
