#include <cmath>
#include <random>

#include "doctest.h"
#include "sfk/kahler_killing.hpp"

using namespace sfk;

namespace {

std::vector<GeometryBundle> with_isothermal() {
    return {flat_c2(1.0, 1.0), lebrun_instanton(1, 1.0), lebrun_instanton(2, 1.0), lebrun_instanton(3, 1.0),
            lebrun_instanton(3, 0.5), s2_h2(S2H2Case::Elliptic), s2_h2(S2H2Case::Parabolic),
            s2_h2(S2H2Case::Hyperbolic)};
}

}  // namespace

TEST_CASE("pointwise lemma residuals") {
    for (const auto& b : with_isothermal()) {
        CAPTURE(b.name);
        CAPTURE(b.params.begin()->second);
        std::mt19937_64 rng(17);
        for (int n = 0; n < 20; ++n) {
            const Point p = b.sample(rng);
            CAPTURE(p.x[0]);
            CAPTURE(p.x[2]);
            const Mat4 g = b.metric(p);
            CHECK(killing_residual(b.metric, b.V, p) < 1e-7);
            CHECK(symplectic_residual(b, p) < 1e-8);
            CHECK(momentum_residual(b, p) < 1e-8);
            CHECK(v_flat_omega_residual(b, p) < 1e-8);
            CHECK(form_residual(dv_flat_closed_form(b, p), dv_flat_at(b, p), g) < 1e-6);
            CHECK(v_wedge_dv(b, p).residual < 1e-6);
            CHECK(bochner_residual(b, p).residual < 1e-5);
            const auto h = hess_invariance_residual(b, p);
            CHECK(h.j_invariance < 1e-5);
            CHECK(h.dv_relation < 1e-5);
            const auto uw = lebrun_uw(b, p);
            CHECK(uw.lap_from_u == doctest::Approx(uw.lap_z).epsilon(1e-6).scale(1.0));
            CHECK(mixed_frame_defect(mixed_frame(b, p), g) < 1e-8);
            CHECK(dvol2_derivative_residual(b, p) < 1e-6);
            CHECK(dvol3_residual(b, p) < 1e-8);
            CHECK(dvol4_residual(b, p) < 1e-8);
            CHECK(lie_ladder_residual(b, p) < 1e-6);
            CHECK(dv_plus_residual(b, p) < 1e-8);
        }
    }
}
