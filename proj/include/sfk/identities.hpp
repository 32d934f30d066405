// The verification suite. Each check compares two independently computed
// sides of an identity and records the residual against a tolerance.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sfk/families.hpp"
#include "sfk/kahler_killing.hpp"
#include "sfk/reduction.hpp"

namespace sfk {

enum class CheckKind { PointwiseForm, IntegralEvolution, Inequality, ClosedForm };

std::string to_string(CheckKind k);
CheckKind check_kind_from(const std::string& s);

struct IdentityCheck {
    std::string name;
    CheckKind kind = CheckKind::PointwiseForm;
    std::string family;
    // "z=<value>" or "p=(x0,x1,x2,x3)".
    std::string location;
    double lhs = 0.0, rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string provenance;
    std::string note;

    bool operator==(const IdentityCheck&) const = default;
};

// Fills residual-dependent fields; passed iff residual <= tolerance.
IdentityCheck make_check(std::string name, CheckKind kind, const GeometryBundle& b, std::string location,
                         double lhs, double rhs, double residual, double tolerance, std::string provenance);

std::string z_location(double z);
std::string point_location(const Point& p);

struct Tolerances {
    double closed_form = 1e-6;
    double richardson = 1e-4;
    double pointwise = 1e-5;
    // Exterior derivative of a transgression assembled from derivatives.
    double transgression_d = 1e-4;
    // Below this relative gap an inequality is reported as an equality.
    double equality = 1e-8;

    bool operator==(const Tolerances&) const = default;
};

// Central differences in z with Richardson extrapolation.
struct ZDerivativeEstimator {
    double base_step = 3e-3;
    int levels = 2;

    double first(const std::function<double(double)>& f, double z) const;
    double second(const std::function<double(double)>& f, double z) const;

    // Observed order of the plain central difference, from steps h, h/2, h/4.
    static double observed_order(const std::function<double(double)>& f, double z, double h, int derivative);
};

struct CheckSettings {
    Tolerances tol;
    // Base derivative step as a fraction of the z-range of the run.
    double z_range = 3.0;
    double step_fraction = 1e-3;
    int richardson_levels = 2;
    QuadratureOptions quad{32, 1e-6, true};
    // Relative step for exterior derivatives of assembled transgression forms.
    double outer_step = 1e-3;
};

// Estimator for z, with the step shrunk to keep the stencil regular.
ZDerivativeEstimator estimator_at(const GeometryBundle& b, double z, const CheckSettings& s);

// Reduced integrals used by the evolution checks.
double int_lap(const GeometryBundle& b, double z, const QuadratureOptions& opt = {});
double int_lap_sq(const GeometryBundle& b, double z, const QuadratureOptions& opt = {});
double int_v_sq(const GeometryBundle& b, double z, const QuadratureOptions& opt = {});
double int_ric_sq(const GeometryBundle& b, double z, const QuadratureOptions& opt = {},
                  DerivativeMode mode = DerivativeMode::Automatic);

IdentityCheck check_area_growth(const GeometryBundle& b, double z, const CheckSettings& s = {});
// d/dz int lap_z and d2/dz2 int |V|^2 against 4 pi chi_g.
std::vector<IdentityCheck> check_chi_evolution(const GeometryBundle& b, double z, const CheckSettings& s = {});
IdentityCheck check_cgb_evolution(const GeometryBundle& b, double z, const CheckSettings& s = {});
// d2/dz2 Vol2 = 0, the integrated second LeBrun equation.
IdentityCheck check_area_linearity(const GeometryBundle& b, double z, const CheckSettings& s = {});

// Quadratures against the family's declared closed forms.
std::vector<IdentityCheck> check_closed_forms(const GeometryBundle& b, double z, const CheckSettings& s = {});

// 2K dVol4 = d[-J dlog|V|^2 ^ *dVol2 + (lap_z/|V|) dVol3].
IdentityCheck check_toda_global(const GeometryBundle& b, const Point& p, const CheckSettings& s = {});

// The three assemblies of the Ricci transgression 3-form.
struct TransgressionForms {
    FormValue first{3}, second{3}, third{3};
};
TransgressionForms transgression_forms(const GeometryBundle& b, const Point& p);
// The Lie-derivative assembly alone, as a field.
FormField transgression_field(const GeometryBundle& b);

IdentityCheck check_transgression_steps(const GeometryBundle& b, const Point& p, const CheckSettings& s = {});
// (|Ric|^2 - s^2/2) dVol4 = d of the transgression.
IdentityCheck check_p_ric(const GeometryBundle& b, const Point& p, const CheckSettings& s = {});

// u_xx + u_yy + (e^u)_zz and w_xx + w_yy + (w e^u)_zz at each point,
// differentiated in the isothermal chart. Reports the maximum over points.
std::vector<IdentityCheck> check_lebrun_pde(const GeometryBundle& b, const std::vector<Point>& points,
                                            const CheckSettings& s = {});

// Pointwise lemmas at one point: Bochner, Hessian J-invariance, the
// dV_flat closed form, V_flat ^ dV_flat duality, the volume-form splits.
std::vector<IdentityCheck> check_pointwise_lemmas(const GeometryBundle& b, const Point& p,
                                                  const CheckSettings& s = {});

// Hölder bound (int lap_z)^2 <= Vol2 * int lap_z^2 and the end sign
// constraints on chi_g and e_g, at each z.
std::vector<IdentityCheck> scan_basic_inequalities(const GeometryBundle& b, const std::vector<double>& zs,
                                                   const CheckSettings& s = {});

// Ricci-flat families: 2 e_g lap_z = chi_g.
IdentityCheck check_ricci_flat_relation(const GeometryBundle& b, double z, const CheckSettings& s = {});

}  // namespace sfk
