// The Killing field, its momentum and the objects built from them:
// V_flat, dV_flat, the Laplacian of the momentum, the Hessian, the mixed
// frame, the volume forms of the reduction and the LeBrun functions.
//
// J acts on 1-forms by precomposition, (J a)(X) = a(JX). With this choice
// J(V_flat) = -(JV)_flat and dz = J V_flat.
#pragma once

#include <optional>
#include <stdexcept>

#include "sfk/curvature.hpp"
#include "sfk/families.hpp"
#include "sfk/forms.hpp"

namespace sfk {

// Raised at points where |V| is below the singular-locus cutoff.
struct SingularLocusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kSingularCutoff = 1e-8;

// |a - b| / max(|a|, |b|, 1) in the metric norm on forms.
double form_residual(const FormValue& a, const FormValue& b, const Mat4& g);
double scalar_residual(double a, double b);

FormValue apply_j(const Mat4& J, const FormValue& a);

// Everything pointwise that the identities need, evaluated once.
struct PointData {
    Point p;
    Mat4 g{}, ginv{}, J{};
    Vec4 V{}, grad_z{};
    FormValue omega{2}, v_flat{1}, dz{1}, dv_flat{2};
    double v_sq = 0.0;
    double lap_z = 0.0;
};

PointData point_data(const GeometryBundle& b, const Point& p, bool require_regular = true);

// d|V|^2 from exact derivatives of g and V.
Vec4 v_sq_differential(const GeometryBundle& b, const Point& p);

// Pointwise forms. All refuse points on the singular locus of V.
FormValue omega_at(const GeometryBundle& b, const Point& p);
FormValue v_flat_at(const GeometryBundle& b, const Point& p);
FormValue dv_flat_at(const GeometryBundle& b, const Point& p);
FormValue dvol2_at(const GeometryBundle& b, const Point& p);
FormValue star_dvol2_at(const GeometryBundle& b, const Point& p);
FormValue dvol3_at(const GeometryBundle& b, const Point& p);
FormValue dvol4_at(const GeometryBundle& b, const Point& p);
// The connection form |V|^-2 V_flat, which agrees with dt on M3_z.
FormValue connection_at(const GeometryBundle& b, const Point& p);
// d/dz = |grad z|^-2 grad z.
Vec4 d_dz_at(const GeometryBundle& b, const Point& p);

FormField omega_field(const GeometryBundle& b);
FormField v_flat_field(const GeometryBundle& b);
FormField dv_flat_field(const GeometryBundle& b);
FormField dvol2_field(const GeometryBundle& b);
FormField star_dvol2_field(const GeometryBundle& b);
FormField dvol3_field(const GeometryBundle& b);
FormField dvol4_field(const GeometryBundle& b);

struct KillingData {
    VectorField V;
    FormField V_flat;
    ScalarField z;
    VectorField grad_z;
    ScalarField lap_z;
    FormField dV_flat;
    // Empty when the family has no isothermal chart.
    ScalarField u, w;
};

KillingData killing_data(const GeometryBundle& b);

// Norm of the symmetrized covariant derivative of V_flat, i.e. |L_V g|/2.
double killing_residual(const MetricField& g, const VectorField& V, const Point& p);

// *(dV_flat ^ w).
double laplacian_z(const GeometryBundle& b, const Point& p);

// Covariant Hessian of the momentum.
Mat4 hessian_z(const GeometryBundle& b, const Point& p);

// Derivative of a scalar along d/dz by a 4-point stencil.
double partial_z(const GeometryBundle& b, const ScalarField& f, const Point& p);

// |grad x|^2 for the isothermal coordinate x.
double grad_x_sq(const GeometryBundle& b, const Point& p);

// The four-term expression for dV_flat in terms of log|grad z|^2 and the
// d/dz derivative of log|grad x|^2.
FormValue dv_flat_closed_form(const GeometryBundle& b, const Point& p);

struct FormComparison {
    FormValue lhs, rhs;
    double residual = 0.0;
};

// V_flat ^ dV_flat against *(-d|V|^2 + lap_z dz).
FormComparison v_wedge_dv(const GeometryBundle& b, const Point& p);

// |d(lap_z) + 2 Ric(grad z, .)| and the sizes of the two terms.
struct BochnerResidual {
    double residual = 0.0;
    double d_lap_norm = 0.0;
    double ric_term_norm = 0.0;
};
BochnerResidual bochner_residual(const GeometryBundle& b, const Point& p,
                                 DerivativeMode mode = DerivativeMode::Automatic);

struct HessResidual {
    double j_invariance = 0.0;  // Hess(J., J.) - Hess
    double dv_relation = 0.0;   // Hess(J., .) - dV_flat / 2
};
HessResidual hess_invariance_residual(const GeometryBundle& b, const Point& p);

struct LebrunUW {
    double u = 0.0, w = 0.0;
    double lap_z = 0.0;        // *(dV_flat ^ w)
    double lap_from_u = 0.0;   // |grad z|^2 du/dz
};
LebrunUW lebrun_uw(const GeometryBundle& b, const Point& p);

struct MixedFrame {
    Vec4 grad_x{}, grad_y{}, grad_z{}, d_t{};
    Vec4 d_z{};
};
MixedFrame mixed_frame(const GeometryBundle& b, const Point& p);
// Largest normalized inner product among the frame vectors, and
// the defects of |grad x| = |grad y| and <d/dz, grad z> = 1.
double mixed_frame_defect(const MixedFrame& f, const Mat4& g);

// Pointwise form identities, each reported as a residual.
double symplectic_residual(const GeometryBundle& b, const Point& p);   // d(i_V w)
double momentum_residual(const GeometryBundle& b, const Point& p);     // dz + i_V w, dz - J V_flat
double v_flat_omega_residual(const GeometryBundle& b, const Point& p); // V_flat - i_{grad z} w
double dvol2_derivative_residual(const GeometryBundle& b, const Point& p);
double dvol3_residual(const GeometryBundle& b, const Point& p);  // dVol3 = |V| dt ^ dVol2
double dvol4_residual(const GeometryBundle& b, const Point& p);  // dVol4 = dz ^ dt ^ dVol2
double lie_ladder_residual(const GeometryBundle& b, const Point& p);
double dv_plus_residual(const GeometryBundle& b, const Point& p);  // (dV_flat)^+ = lap_z w / 2

}  // namespace sfk
