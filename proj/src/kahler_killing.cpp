#include "sfk/kahler_killing.hpp"

#include <cmath>

namespace sfk {

namespace {

double tensor2_norm(const Mat4& t, const Mat4& ginv) {
    double s = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) s += ginv[a][c] * ginv[b][d] * t[a][b] * t[c][d];
    return std::sqrt(std::max(0.0, s));
}

double covector_norm(const Vec4& a, const Mat4& ginv) { return std::sqrt(std::max(0.0, inner(ginv, a, a))); }

void require_regular(double v_sq, const Point& p) {
    if (!(std::sqrt(v_sq) >= kSingularCutoff))
        throw SingularLocusError("|V| below cutoff at (" + std::to_string(p.x[0]) + ", " + std::to_string(p.x[1]) +
                                 ", " + std::to_string(p.x[2]) + ", " + std::to_string(p.x[3]) + ")");
}

// d(|V|^2) from exact derivatives of g and V.
Vec4 d_v_sq(const GeometryBundle& b, const Point& p, const MetricDerivs& md) {
    const Vec4 V = b.V(p);
    const Mat4 dV = b.dV(p);
    Vec4 out{};
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) s += md.dg[i][j][k] * V[j] * V[k] + 2.0 * md.g[j][k] * dV[i][j] * V[k];
        out[i] = s;
    }
    return out;
}

FormValue dv_flat_from(const GeometryBundle& b, const Point& p, const MetricDerivs& md) {
    const Vec4 V = b.V(p);
    const Mat4 dV = b.dV(p);
    // D[i][j] = d_i (g_jk V^k)
    Mat4 D{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += md.dg[i][j][k] * V[k] + md.g[j][k] * dV[i][k];
            D[i][j] = s;
        }
    Mat4 m{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = D[i][j] - D[j][i];
    return FormValue::two_form(m);
}

MetricDerivs first_derivs(const GeometryBundle& b, const Point& p) {
    return metric_derivatives(b.metric, p, DerivativeMode::Automatic);
}

FormValue lebrun_dt(const GeometryBundle& b, const Point& p) {
    // In LeBrun coordinates dt is a coordinate form; elsewhere the
    // connection form stands in for it.
    if (b.chart() == "lebrun") return FormValue::coordinate(3);
    return connection_at(b, p);
}

const IsothermalChart& require_isothermal(const GeometryBundle& b) {
    if (!b.isothermal) throw UnsupportedFamily(b.name + " has no isothermal chart");
    return *b.isothermal;
}

}  // namespace

double form_residual(const FormValue& a, const FormValue& b, const Mat4& g) {
    const double na = form_norm(a, g), nb = form_norm(b, g);
    return form_norm(a - b, g) / std::max({na, nb, 1.0});
}

double scalar_residual(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

FormValue apply_j(const Mat4& J, const FormValue& a) {
    if (a.degree() != 1) throw FormError("apply_j expects a 1-form");
    Vec4 out{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) out[i] += a.at({k}) * J[k][i];
    return FormValue::one_form(out);
}

PointData point_data(const GeometryBundle& b, const Point& p, bool regular) {
    PointData d;
    d.p = p;
    const MetricDerivs md = first_derivs(b, p);
    d.g = md.g;
    d.ginv = inverse_spd(d.g);
    d.J = b.J(p);
    d.V = b.V(p);
    d.v_sq = inner(d.g, d.V, d.V);
    if (regular) require_regular(d.v_sq, p);
    d.omega = FormValue::two_form(kahler_form(b, p));
    d.v_flat = flat(d.V, d.g);
    d.dz = FormValue::one_form(b.dz(p));
    d.grad_z = sharp(d.dz, d.g);
    d.dv_flat = dv_flat_from(b, p, md);
    d.lap_z = hodge(wedge(d.dv_flat, d.omega), d.g, b.orientation).value();
    return d;
}

Vec4 v_sq_differential(const GeometryBundle& b, const Point& p) { return d_v_sq(b, p, first_derivs(b, p)); }

FormValue omega_at(const GeometryBundle& b, const Point& p) { return FormValue::two_form(kahler_form(b, p)); }

FormValue v_flat_at(const GeometryBundle& b, const Point& p) { return flat(b.V(p), b.metric(p)); }

FormValue dv_flat_at(const GeometryBundle& b, const Point& p) { return dv_flat_from(b, p, first_derivs(b, p)); }

FormValue star_dvol2_at(const GeometryBundle& b, const Point& p) {
    const Mat4 g = b.metric(p);
    const Vec4 V = b.V(p);
    const double vv = inner(g, V, V);
    require_regular(vv, p);
    return (1.0 / vv) * wedge(FormValue::one_form(b.dz(p)), flat(V, g));
}

FormValue dvol2_at(const GeometryBundle& b, const Point& p) { return omega_at(b, p) - star_dvol2_at(b, p); }

FormValue dvol4_at(const GeometryBundle& b, const Point& p) { return volume_form(b.metric(p), b.orientation); }

FormValue dvol3_at(const GeometryBundle& b, const Point& p) {
    const Mat4 g = b.metric(p);
    const FormValue dz = FormValue::one_form(b.dz(p));
    Vec4 n = sharp(dz, g);
    const double len = std::sqrt(inner(g, n, n));
    require_regular(len * len, p);
    for (double& c : n) c /= len;
    return interior(n, volume_form(g, b.orientation));
}

FormValue connection_at(const GeometryBundle& b, const Point& p) {
    const Mat4 g = b.metric(p);
    const Vec4 V = b.V(p);
    const double vv = inner(g, V, V);
    require_regular(vv, p);
    return (1.0 / vv) * flat(V, g);
}

Vec4 d_dz_at(const GeometryBundle& b, const Point& p) {
    const Mat4 g = b.metric(p);
    Vec4 gz = sharp(FormValue::one_form(b.dz(p)), g);
    const double n2 = inner(g, gz, gz);
    require_regular(n2, p);
    for (double& c : gz) c /= n2;
    return gz;
}

namespace {
FormField field_of(const GeometryBundle& b, int deg, FormValue (*f)(const GeometryBundle&, const Point&)) {
    // The bundle is captured by value so the field outlives the caller.
    return FormField(deg, [b, f](const Point& p) { return f(b, p); }, b.domain());
}
}  // namespace

FormField omega_field(const GeometryBundle& b) { return field_of(b, 2, omega_at); }
FormField v_flat_field(const GeometryBundle& b) { return field_of(b, 1, v_flat_at); }
FormField dv_flat_field(const GeometryBundle& b) { return field_of(b, 2, dv_flat_at); }
FormField dvol2_field(const GeometryBundle& b) { return field_of(b, 2, dvol2_at); }
FormField star_dvol2_field(const GeometryBundle& b) { return field_of(b, 2, star_dvol2_at); }
FormField dvol3_field(const GeometryBundle& b) { return field_of(b, 3, dvol3_at); }
FormField dvol4_field(const GeometryBundle& b) { return field_of(b, 4, dvol4_at); }

KillingData killing_data(const GeometryBundle& b) {
    KillingData k;
    k.V = b.V;
    k.V_flat = v_flat_field(b);
    k.z = b.z;
    k.grad_z = [b](const Point& p) { return sharp(FormValue::one_form(b.dz(p)), b.metric(p)); };
    k.lap_z = [b](const Point& p) { return laplacian_z(b, p); };
    k.dV_flat = dv_flat_field(b);
    if (b.isothermal) {
        k.u = [b](const Point& p) { return lebrun_uw(b, p).u; };
        k.w = [b](const Point& p) {
            const Mat4 g = b.metric(p);
            const Vec4 gz = sharp(FormValue::one_form(b.dz(p)), g);
            return 1.0 / inner(g, gz, gz);
        };
    }
    return k;
}

double killing_residual(const MetricField& g, const VectorField& V, const Point& p) {
    const MetricDerivs md = metric_derivatives(g, p, DerivativeMode::Automatic);
    const Vec4 v = V(p);
    // dv[i][k] = d_i V^k
    Mat4 dv{};
    for (int k = 0; k < 4; ++k) {
        const Vec4 grad = gradient_fd([&V, k](const Point& q) { return V(q)[k]; }, p, g.domain);
        for (int i = 0; i < 4; ++i) dv[i][k] = grad[i];
    }
    Mat4 lie{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += v[k] * md.dg[k][i][j] + md.g[k][j] * dv[i][k] + md.g[i][k] * dv[j][k];
            lie[i][j] = s;
        }
    return 0.5 * tensor2_norm(lie, inverse_spd(md.g));
}

double laplacian_z(const GeometryBundle& b, const Point& p) {
    const MetricDerivs md = first_derivs(b, p);
    const FormValue w = omega_at(b, p);
    return hodge(wedge(dv_flat_from(b, p, md), w), md.g, b.orientation).value();
}

Mat4 hessian_z(const GeometryBundle& b, const Point& p) {
    const Christoffel G = christoffel(b.metric, p);
    const Vec4 dz = b.dz(p);
    Mat4 H{};
    for (int j = 0; j < 4; ++j) {
        const Vec4 grad = gradient_fd([&b, j](const Point& q) { return b.dz(q)[j]; }, p, b.domain());
        for (int i = 0; i < 4; ++i) H[i][j] = grad[i];
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) H[i][j] -= G[k][i][j] * dz[k];
    // Symmetrize away the finite-difference asymmetry.
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) H[i][j] = H[j][i] = 0.5 * (H[i][j] + H[j][i]);
    return H;
}

double partial_z(const GeometryBundle& b, const ScalarField& f, const Point& p) {
    const Vec4 dir = d_dz_at(b, p);
    double big = 0.0;
    for (double c : dir) big = std::max(big, std::abs(c));
    double xmax = 1.0;
    for (double c : p.x) xmax = std::max(xmax, std::abs(c));
    const double h = 1e-3 * std::min(1.0, b.scale) * xmax / big;
    auto at = [&](double s) {
        Point q = p;
        for (int i = 0; i < 4; ++i) q.x[i] += s * dir[i];
        if (!b.domain().contains(q.x)) throw ChartBoundaryError("d/dz stencil leaves the chart");
        return f(q);
    };
    return (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h);
}

double grad_x_sq(const GeometryBundle& b, const Point& p) {
    const auto& iso = require_isothermal(b);
    const Vec4 dx = iso.dxy(p)[0];
    return inner(inverse_spd(b.metric(p)), dx, dx);
}

FormValue dv_flat_closed_form(const GeometryBundle& b, const Point& p) {
    require_isothermal(b);
    const PointData d = point_data(b, p);
    const MetricDerivs md = first_derivs(b, p);
    Vec4 dlog = d_v_sq(b, p, md);
    for (double& c : dlog) c /= d.v_sq;
    const FormValue dlogf = FormValue::one_form(dlog);
    const Vec4 ddz = d_dz_at(b, p);
    const double dz_log_gradz = dot(dlog, ddz);
    const double dz_log_gradx = partial_z(b, [&b](const Point& q) { return std::log(grad_x_sq(b, q)); }, p);
    const FormValue dvol2 = d.omega - (1.0 / d.v_sq) * wedge(d.dz, d.v_flat);

    FormValue out = -dz_log_gradz * wedge(d.dz, d.v_flat);
    out -= wedge(d.dz, apply_j(d.J, dlogf));
    out -= wedge(d.v_flat, dlogf);
    out -= d.v_sq * dz_log_gradx * dvol2;
    return out;
}

FormComparison v_wedge_dv(const GeometryBundle& b, const Point& p) {
    const PointData d = point_data(b, p);
    const MetricDerivs md = first_derivs(b, p);
    FormComparison c;
    c.lhs = wedge(d.v_flat, d.dv_flat);
    const FormValue one = -1.0 * FormValue::one_form(d_v_sq(b, p, md)) + d.lap_z * d.dz;
    c.rhs = hodge(one, d.g, b.orientation);
    c.residual = form_residual(c.lhs, c.rhs, d.g);
    return c;
}

BochnerResidual bochner_residual(const GeometryBundle& b, const Point& p, DerivativeMode mode) {
    const PointData d = point_data(b, p, false);
    const CurvatureData c = curvature_at(b.metric, p, b.orientation, mode);
    const Vec4 dlap = gradient_fd([&b](const Point& q) { return laplacian_z(b, q); }, p, b.domain());
    Vec4 ric{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ric[i] += 2.0 * c.ricci[i][j] * d.grad_z[j];
    Vec4 sum{};
    for (int i = 0; i < 4; ++i) sum[i] = dlap[i] + ric[i];
    BochnerResidual r;
    r.d_lap_norm = covector_norm(dlap, d.ginv);
    r.ric_term_norm = covector_norm(ric, d.ginv);
    r.residual = covector_norm(sum, d.ginv) / std::max({r.d_lap_norm, r.ric_term_norm, 1.0});
    return r;
}

HessResidual hess_invariance_residual(const GeometryBundle& b, const Point& p) {
    const PointData d = point_data(b, p, false);
    const Mat4 H = hessian_z(b, p);
    const Mat4 JT = transpose(d.J);
    const Mat4 HJJ = matmul(JT, matmul(H, d.J));
    const Mat4 HJ = matmul(JT, H);
    const Mat4 half_dv = d.dv_flat.as_matrix();
    Mat4 e1{}, e2{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            e1[i][j] = HJJ[i][j] - H[i][j];
            e2[i][j] = HJ[i][j] - 0.5 * half_dv[i][j];
        }
    const double scale = std::max(1.0, tensor2_norm(H, d.ginv));
    return {tensor2_norm(e1, d.ginv) / scale, tensor2_norm(e2, d.ginv) / scale};
}

LebrunUW lebrun_uw(const GeometryBundle& b, const Point& p) {
    require_isothermal(b);
    auto u_at = [&b](const Point& q) {
        const Mat4 gi = inverse_spd(b.metric(q));
        const Vec4 dz = b.dz(q);
        return std::log(inner(gi, dz, dz)) - std::log(grad_x_sq(b, q));
    };
    const Mat4 gi = inverse_spd(b.metric(p));
    const Vec4 dz = b.dz(p);
    const double gz2 = inner(gi, dz, dz);
    require_regular(gz2, p);
    LebrunUW r;
    r.u = u_at(p);
    r.w = 1.0 / gz2;
    r.lap_z = laplacian_z(b, p);
    r.lap_from_u = gz2 * partial_z(b, u_at, p);
    return r;
}

MixedFrame mixed_frame(const GeometryBundle& b, const Point& p) {
    const auto& iso = require_isothermal(b);
    const Mat4 g = b.metric(p);
    const auto dxy = iso.dxy(p);
    MixedFrame f;
    f.grad_x = sharp(FormValue::one_form(dxy[0]), g);
    f.grad_y = sharp(FormValue::one_form(dxy[1]), g);
    f.grad_z = sharp(FormValue::one_form(b.dz(p)), g);
    f.d_t = b.V(p);
    f.d_z = d_dz_at(b, p);
    return f;
}

double mixed_frame_defect(const MixedFrame& f, const Mat4& g) {
    const std::array<Vec4, 4> e = {f.grad_x, f.grad_y, f.grad_z, f.d_t};
    double worst = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int c = a + 1; c < 4; ++c) {
            const double n = std::sqrt(inner(g, e[a], e[a]) * inner(g, e[c], e[c]));
            worst = std::max(worst, std::abs(inner(g, e[a], e[c])) / n);
        }
    const double nx = std::sqrt(inner(g, f.grad_x, f.grad_x));
    const double ny = std::sqrt(inner(g, f.grad_y, f.grad_y));
    worst = std::max(worst, std::abs(nx - ny) / std::max(nx, ny));
    worst = std::max(worst, std::abs(inner(g, f.d_z, f.grad_z) - 1.0));
    return worst;
}

double symplectic_residual(const GeometryBundle& b, const Point& p) {
    FormField iv(1, [&b](const Point& q) { return interior(b.V(q), omega_at(b, q)); }, b.domain());
    const FormValue d = exterior_derivative(iv, p);
    return form_norm(d, b.metric(p));
}

double momentum_residual(const GeometryBundle& b, const Point& p) {
    const PointData d = point_data(b, p, false);
    const FormValue iv = interior(d.V, d.omega);
    const double r1 = form_residual(d.dz, -1.0 * iv, d.g);
    const double r2 = form_residual(d.dz, apply_j(d.J, d.v_flat), d.g);
    return std::max(r1, r2);
}

double v_flat_omega_residual(const GeometryBundle& b, const Point& p) {
    const PointData d = point_data(b, p, false);
    return form_residual(d.v_flat, interior(d.grad_z, d.omega), d.g);
}

double dvol2_derivative_residual(const GeometryBundle& b, const Point& p) {
    require_isothermal(b);
    const Mat4 g = b.metric(p);
    const double rate = partial_z(b, [&b](const Point& q) { return std::log(grad_x_sq(b, q)); }, p);
    const FormValue dz = FormValue::one_form(b.dz(p));
    const FormValue expect = -rate * wedge(dz, dvol2_at(b, p));
    const FormValue got = exterior_derivative(dvol2_field(b), p);
    const FormValue got_star = exterior_derivative(star_dvol2_field(b), p);
    return std::max(form_residual(got, expect, g), form_residual(got_star, -1.0 * expect, g));
}

double dvol3_residual(const GeometryBundle& b, const Point& p) {
    const Mat4 g = b.metric(p);
    const Vec4 V = b.V(p);
    FormValue area = dvol2_at(b, p);
    double r = 0.0;
    if (b.isothermal) {
        // Independent path through the isothermal chart.
        const auto dxy = b.isothermal->dxy(p);
        const FormValue alt =
            (1.0 / grad_x_sq(b, p)) * wedge(FormValue::one_form(dxy[0]), FormValue::one_form(dxy[1]));
        r = form_residual(area, alt, g);
        area = alt;
    }
    const FormValue rhs = std::sqrt(inner(g, V, V)) * wedge(lebrun_dt(b, p), area);
    return std::max(r, form_residual(dvol3_at(b, p), rhs, g));
}

double dvol4_residual(const GeometryBundle& b, const Point& p) {
    const Mat4 g = b.metric(p);
    const FormValue dz = FormValue::one_form(b.dz(p));
    const FormValue rhs = wedge(dz, wedge(lebrun_dt(b, p), dvol2_at(b, p)));
    return form_residual(dvol4_at(b, p), rhs, g);
}

double lie_ladder_residual(const GeometryBundle& b, const Point& p) {
    const Mat4 g = b.metric(p);
    VectorField ddz = [b](const Point& q) { return d_dz_at(b, q); };
    FormField weighted(2,
                       [b](const Point& q) {
                           const Vec4 V = b.V(q);
                           return inner(b.metric(q), V, V) * dvol2_at(b, q);
                       },
                       b.domain());
    const double lap = laplacian_z(b, p);
    const double r1 = form_residual(lie_derivative(ddz, weighted, p), lap * dvol2_at(b, p), g);

    FormField vd(3, [b](const Point& q) { return wedge(v_flat_at(b, q), dvol2_at(b, q)); }, b.domain());
    const Vec4 V = b.V(p);
    const double vn = std::sqrt(inner(g, V, V));
    const double r2 = form_residual(lie_derivative(ddz, vd, p), (lap / vn) * dvol3_at(b, p), g);
    return std::max(r1, r2);
}

double dv_plus_residual(const GeometryBundle& b, const Point& p) {
    const PointData d = point_data(b, p);
    const FormValue plus = 0.5 * (d.dv_flat + hodge(d.dv_flat, d.g, b.orientation));
    return form_residual(plus, 0.5 * d.lap_z * d.omega, d.g);
}

}  // namespace sfk
