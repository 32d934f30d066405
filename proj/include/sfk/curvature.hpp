// Levi-Civita connection and curvature of a metric given in coordinates.
//
// Sign convention: R(X,Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z and
// Rm(a,b,c,d) = g(R(e_a,e_b)e_c, e_d), so sec(e_i,e_j) = Rm_ijji.
// Norms are tensor norms, |W|^2 = W_ijkl W^ijkl.
#pragma once

#include <array>
#include <functional>
#include <string>

#include "sfk/forms.hpp"
#include "sfk/linalg.hpp"

namespace sfk {

template <int N>
using MatN = std::array<std::array<double, N>, N>;

template <int N>
struct MetricDerivsN {
    MatN<N> g{};
    std::array<MatN<N>, N> dg{};                 // dg[k][i][j] = d_k g_ij
    std::array<std::array<MatN<N>, N>, N> d2g{};  // d2g[k][l][i][j]
};
using MetricDerivs = MetricDerivsN<4>;

template <int N>
using ChristoffelN = std::array<std::array<std::array<double, N>, N>, N>;  // G[i][j][k] = Gamma^i_jk
template <int N>
using Tensor4N = std::array<ChristoffelN<N>, N>;
using Christoffel = ChristoffelN<4>;
using Tensor4 = Tensor4N<4>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct MetricField {
    std::string chart;
    Domain domain;
    std::function<Mat4(const Point&)> evaluator;
    // Exact derivatives; empty when the family only supplies values.
    std::function<MetricDerivs(const Point&)> analytic;
    // Coordinate length scale for finite-difference steps.
    double scale = 1.0;

    Mat4 operator()(const Point& p) const { return evaluator(p); }
    bool has_analytic() const { return static_cast<bool>(analytic); }
};

enum class DerivativeMode { Automatic, Analytic, FiniteDifference };

// Relative step for metric finite differences.
inline constexpr double kMetricStep = 1e-4;

MetricDerivs metric_derivatives(const MetricField& g, const Point& p,
                                DerivativeMode mode = DerivativeMode::Automatic, double step = kMetricStep);

template <int N>
ChristoffelN<N> christoffel_from(const MetricDerivsN<N>& m, const MatN<N>& ginv);
// Lowered curvature Rm_abcd in the convention above.
template <int N>
Tensor4N<N> riemann_from(const MetricDerivsN<N>& m, const MatN<N>& ginv);

Christoffel christoffel(const MetricField& g, const Point& p, DerivativeMode mode = DerivativeMode::Automatic);

struct CurvatureData {
    Tensor4 riemann{};  // coordinate components Rm_abcd
    Mat4 ricci{};
    double scalar = 0.0;
    double ric_norm_sq = 0.0;
    double traceless_ric_norm_sq = 0.0;
    double rm_norm_sq = 0.0;
    // Operator blocks on an orthonormal basis of self-dual (+) and
    // anti-self-dual (-) 2-forms, with T(z)_ij = 1/2 T_ijst z^ts.
    Mat3 block_pp{}, block_pm{}, block_mp{}, block_mm{};
    double weyl_plus_norm_sq = 0.0;
    double weyl_minus_norm_sq = 0.0;
};

CurvatureData curvature_at(const MetricField& g, const Point& p, int orientation,
                           DerivativeMode mode = DerivativeMode::Automatic);
CurvatureData curvature_from(const MetricDerivs& m, int orientation);

// Largest |Rm_abcd + Rm_bacd|, |Rm_abcd + Rm_abdc|, |Rm_abcd - Rm_cdab|.
double pair_symmetry_defect(const Tensor4& rm);
double bianchi_defect(const Tensor4& rm);
// |s^2/6 + 2|Ric0|^2 + |W+|^2 + |W-|^2 - |Rm|^2|.
double decomposition_defect(const CurvatureData& c);
// Largest entry of the reassembled operator minus the coordinate one.
double block_reassembly_defect(const CurvatureData& c, const Mat4& g, int orientation);

struct KahlerCurvatureResidual {
    double rm_pp_vs_omega = 0.0;  // |Rm^{++} + (s/8) w (x) w|
    double rm_pp_norm = 0.0;      // ||Rm^{++}|^2 - s^2/4|
    double scalar = 0.0;
};

KahlerCurvatureResidual kahler_curvature_checks(const MetricField& g,
                                                const std::function<Mat4(const Point&)>& J,
                                                const Point& p, int orientation,
                                                DerivativeMode mode = DerivativeMode::Automatic);

}  // namespace sfk
