#include "sfk/curvature.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace sfk {

namespace {

template <class T>
T stencil(const T& m2, const T& m1, const T& p1, const T& p2, double h);

template <>
Mat4 stencil(const Mat4& m2, const Mat4& m1, const Mat4& p1, const Mat4& p2, double h) {
    Mat4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            r[i][j] = (m2[i][j] - 8.0 * m1[i][j] + 8.0 * p1[i][j] - p2[i][j]) / (12.0 * h);
    return r;
}

Mat4 shifted_eval(const MetricField& g, const Point& p, int k, double dk, int l = -1, double dl = 0.0) {
    Point q = p;
    q.x[k] += dk;
    if (l >= 0) q.x[l] += dl;
    return g(q);
}

// Frame vectors E[a] (columns) of a g-orthonormal frame with the requested
// orientation relative to the coordinate basis.
Mat4 orthonormal_frame(const Mat4& g, int orientation) {
    Eigen::Matrix4d G;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) G(i, j) = g[i][j];
    Eigen::LLT<Eigen::Matrix4d> llt(G);
    if (llt.info() != Eigen::Success) throw MetricError("metric value is not positive definite");
    // g = L L^T; columns of L^{-T} are orthonormal and positively oriented.
    Eigen::Matrix4d E = Eigen::Matrix4d(llt.matrixL()).transpose().inverse();
    Mat4 out{};
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 4; ++i) out[a][i] = E(i, a);
    if (orientation < 0)
        for (int i = 0; i < 4; ++i) out[3][i] = -out[3][i];
    return out;
}

Tensor4 to_frame(const Tensor4& r, const Mat4& E) {
    // Contract one index at a time to keep the cost at 4 * 4^5.
    Tensor4 t1{}, t2{}, t3{}, t4{};
    for (int a = 0; a < 4; ++a)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    double s = 0.0;
                    for (int i = 0; i < 4; ++i) s += E[a][i] * r[i][j][k][l];
                    t1[a][j][k][l] = s;
                }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    double s = 0.0;
                    for (int j = 0; j < 4; ++j) s += E[b][j] * t1[a][j][k][l];
                    t2[a][b][k][l] = s;
                }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int l = 0; l < 4; ++l) {
                    double s = 0.0;
                    for (int k = 0; k < 4; ++k) s += E[c][k] * t2[a][b][k][l];
                    t3[a][b][c][l] = s;
                }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double s = 0.0;
                    for (int l = 0; l < 4; ++l) s += E[d][l] * t3[a][b][c][l];
                    t4[a][b][c][d] = s;
                }
    return t4;
}

// Orthonormal self-dual (first three) and anti-self-dual 2-forms in an
// oriented orthonormal frame.
std::array<Mat4, 6> two_form_basis() {
    std::array<Mat4, 6> out{};
    const double r = 1.0 / std::sqrt(2.0);
    const int pairs[3][4] = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
    for (int A = 0; A < 3; ++A)
        for (int s = 0; s < 2; ++s) {
            Mat4 m{};
            const auto* q = pairs[A];
            const double sign = (s == 0) ? 1.0 : -1.0;
            m[q[0]][q[1]] = r;
            m[q[1]][q[0]] = -r;
            m[q[2]][q[3]] = sign * r;
            m[q[3]][q[2]] = -sign * r;
            out[3 * s + A] = m;
        }
    return out;
}

std::array<std::array<double, 6>, 6> operator_matrix(const Tensor4& rf) {
    static const auto basis = two_form_basis();
    std::array<std::array<double, 6>, 6> O{};
    for (int A = 0; A < 6; ++A)
        for (int B = 0; B < 6; ++B) {
            double s = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    if (basis[A][i][j] == 0.0) continue;
                    for (int k = 0; k < 4; ++k)
                        for (int l = 0; l < 4; ++l) s += rf[i][j][k][l] * basis[A][i][j] * basis[B][k][l];
                }
            O[A][B] = -0.25 * s;
        }
    return O;
}

Mat3 sub_block(const std::array<std::array<double, 6>, 6>& O, int r0, int c0) {
    Mat3 b{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = O[r0 + i][c0 + j];
    return b;
}

double frob_sq(const Mat3& m) {
    double s = 0.0;
    for (const auto& row : m)
        for (double x : row) s += x * x;
    return s;
}

}  // namespace

MetricDerivs metric_derivatives(const MetricField& g, const Point& p, DerivativeMode mode, double step) {
    if (mode == DerivativeMode::Analytic && !g.has_analytic())
        throw std::invalid_argument("metric field has no analytic derivatives");
    if (mode != DerivativeMode::FiniteDifference && g.has_analytic()) return g.analytic(p);

    MetricDerivs m;
    m.g = g(p);
    std::array<double, 4> h{};
    for (int k = 0; k < 4; ++k) {
        h[k] = step * g.scale * std::max(1.0, std::abs(p.x[k]) / g.scale);
        if (g.domain.margin(p.x, k) <= 4.0 * h[k])
            throw ChartBoundaryError("point too close to the chart boundary for curvature stencils");
    }
    for (int k = 0; k < 4; ++k)
        m.dg[k] = stencil(shifted_eval(g, p, k, -2 * h[k]), shifted_eval(g, p, k, -h[k]),
                          shifted_eval(g, p, k, h[k]), shifted_eval(g, p, k, 2 * h[k]), h[k]);
    // Nested central differences: d_l of the d_k stencil.
    for (int k = 0; k < 4; ++k)
        for (int l = k; l < 4; ++l) {
            auto dk_at = [&](double sl) {
                return stencil(shifted_eval(g, p, k, -2 * h[k], l, sl), shifted_eval(g, p, k, -h[k], l, sl),
                               shifted_eval(g, p, k, h[k], l, sl), shifted_eval(g, p, k, 2 * h[k], l, sl), h[k]);
            };
            m.d2g[k][l] = stencil(dk_at(-2 * h[l]), dk_at(-h[l]), dk_at(h[l]), dk_at(2 * h[l]), h[l]);
            m.d2g[l][k] = m.d2g[k][l];
        }
    return m;
}

template <int N>
ChristoffelN<N> christoffel_from(const MetricDerivsN<N>& m, const MatN<N>& ginv) {
    ChristoffelN<N> G{};
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = j; k < N; ++k) {
                double s = 0.0;
                for (int a = 0; a < N; ++a) s += ginv[i][a] * (m.dg[j][a][k] + m.dg[k][a][j] - m.dg[a][j][k]);
                G[i][j][k] = G[i][k][j] = 0.5 * s;
            }
    return G;
}

template <int N>
Tensor4N<N> riemann_from(const MetricDerivsN<N>& m, const MatN<N>& ginv) {
    const auto G = christoffel_from<N>(m, ginv);
    // First-kind symbols and their derivatives: Gamma_a,jk and d_l Gamma_a,jk.
    ChristoffelN<N> G1{};
    Tensor4N<N> dG1{};
    for (int a = 0; a < N; ++a)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k) {
                G1[a][j][k] = 0.5 * (m.dg[j][a][k] + m.dg[k][a][j] - m.dg[a][j][k]);
                for (int l = 0; l < N; ++l)
                    dG1[l][a][j][k] = 0.5 * (m.d2g[l][j][a][k] + m.d2g[l][k][a][j] - m.d2g[l][a][j][k]);
            }
    // d_l Gamma^i_jk = g^ia (d_l Gamma_a,jk) - g^ia (d_l g_ab) Gamma^b_jk
    Tensor4N<N> dG{};  // dG[l][i][j][k]
    for (int l = 0; l < N; ++l)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k) {
                    double s = 0.0;
                    for (int a = 0; a < N; ++a) {
                        double t = dG1[l][a][j][k];
                        for (int b = 0; b < N; ++b) t -= m.dg[l][a][b] * G[b][j][k];
                        s += ginv[i][a] * t;
                    }
                    dG[l][i][j][k] = s;
                }
    // R^i_jkl = d_k G^i_lj - d_l G^i_kj + G^i_km G^m_lj - G^i_lm G^m_kj
    Tensor4N<N> R{};  // R[i][j][k][l]
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    double s = dG[k][i][l][j] - dG[l][i][k][j];
                    for (int q = 0; q < N; ++q) s += G[i][k][q] * G[q][l][j] - G[i][l][q] * G[q][k][j];
                    R[i][j][k][l] = s;
                }
    // Rm_abcd = g(R(e_a,e_b)e_c, e_d) = g_dm R^m_cab
    Tensor4N<N> Rm{};
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c)
                for (int d = 0; d < N; ++d) {
                    double s = 0.0;
                    for (int q = 0; q < N; ++q) s += m.g[d][q] * R[q][c][a][b];
                    Rm[a][b][c][d] = s;
                }
    return Rm;
}

template ChristoffelN<2> christoffel_from<2>(const MetricDerivsN<2>&, const MatN<2>&);
template ChristoffelN<4> christoffel_from<4>(const MetricDerivsN<4>&, const MatN<4>&);
template Tensor4N<2> riemann_from<2>(const MetricDerivsN<2>&, const MatN<2>&);
template Tensor4N<4> riemann_from<4>(const MetricDerivsN<4>&, const MatN<4>&);

Christoffel christoffel(const MetricField& g, const Point& p, DerivativeMode mode) {
    const auto m = metric_derivatives(g, p, mode);
    return christoffel_from<4>(m, inverse_spd(m.g));
}

CurvatureData curvature_from(const MetricDerivs& m, int orientation) {
    CurvatureData c;
    const Mat4 ginv = inverse_spd(m.g);
    c.riemann = riemann_from<4>(m, ginv);
    for (int b = 0; b < 4; ++b)
        for (int cc = 0; cc < 4; ++cc) {
            double s = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int d = 0; d < 4; ++d) s += ginv[a][d] * c.riemann[a][b][cc][d];
            c.ricci[b][cc] = s;
        }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c.scalar += ginv[i][j] * c.ricci[i][j];
    const Mat4 up = matmul(matmul(ginv, c.ricci), ginv);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c.ric_norm_sq += up[i][j] * c.ricci[i][j];
    c.traceless_ric_norm_sq = c.ric_norm_sq - c.scalar * c.scalar / 4.0;

    const Mat4 E = orthonormal_frame(m.g, orientation);
    const Tensor4 rf = to_frame(c.riemann, E);
    for (const auto& a : rf)
        for (const auto& b : a)
            for (const auto& cc : b)
                for (double x : cc) c.rm_norm_sq += x * x;
    const auto O = operator_matrix(rf);
    c.block_pp = sub_block(O, 0, 0);
    c.block_pm = sub_block(O, 0, 3);
    c.block_mp = sub_block(O, 3, 0);
    c.block_mm = sub_block(O, 3, 3);
    Mat3 wp = c.block_pp, wm = c.block_mm;
    for (int i = 0; i < 3; ++i) {
        wp[i][i] -= c.scalar / 12.0;
        wm[i][i] -= c.scalar / 12.0;
    }
    // Operator entries convert to tensor norms with a factor of 4.
    c.weyl_plus_norm_sq = 4.0 * frob_sq(wp);
    c.weyl_minus_norm_sq = 4.0 * frob_sq(wm);
    return c;
}

CurvatureData curvature_at(const MetricField& g, const Point& p, int orientation, DerivativeMode mode) {
    return curvature_from(metric_derivatives(g, p, mode), orientation);
}

double pair_symmetry_defect(const Tensor4& r) {
    double worst = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    worst = std::max(worst, std::abs(r[a][b][c][d] + r[b][a][c][d]));
                    worst = std::max(worst, std::abs(r[a][b][c][d] + r[a][b][d][c]));
                    worst = std::max(worst, std::abs(r[a][b][c][d] - r[c][d][a][b]));
                }
    return worst;
}

double bianchi_defect(const Tensor4& r) {
    double worst = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d)
                    worst = std::max(worst, std::abs(r[a][b][c][d] + r[b][c][a][d] + r[c][a][b][d]));
    return worst;
}

double decomposition_defect(const CurvatureData& c) {
    const double rhs = c.scalar * c.scalar / 6.0 + 2.0 * c.traceless_ric_norm_sq + c.weyl_plus_norm_sq +
                       c.weyl_minus_norm_sq;
    return std::abs(rhs - c.rm_norm_sq);
}

double block_reassembly_defect(const CurvatureData& c, const Mat4& g, int orientation) {
    static const auto basis = two_form_basis();
    const Mat4 E = orthonormal_frame(g, orientation);
    const Tensor4 rf = to_frame(c.riemann, E);
    std::array<std::array<double, 6>, 6> O{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            O[i][j] = c.block_pp[i][j];
            O[i][3 + j] = c.block_pm[i][j];
            O[3 + i][j] = c.block_mp[i][j];
            O[3 + i][3 + j] = c.block_mm[i][j];
        }
    double worst = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int cc = 0; cc < 4; ++cc)
                for (int d = 0; d < 4; ++d) {
                    // Tensor coefficient of phi_A (x) phi_B is -O_AB (|phi|_tensor^2 = 2).
                    double s = 0.0;
                    for (int A = 0; A < 6; ++A)
                        for (int B = 0; B < 6; ++B) s -= O[A][B] * basis[A][a][b] * basis[B][cc][d];
                    worst = std::max(worst, std::abs(s - rf[a][b][cc][d]));
                }
    return worst;
}

KahlerCurvatureResidual kahler_curvature_checks(const MetricField& g, const std::function<Mat4(const Point&)>& J,
                                                const Point& p, int orientation, DerivativeMode mode) {
    static const auto basis = two_form_basis();
    const auto m = metric_derivatives(g, p, mode);
    const CurvatureData c = curvature_from(m, orientation);
    const Mat4 Jp = J(p);
    // w_ij = g(J d_i, d_j) = g_kj J^k_i
    Mat4 omega{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) omega[i][j] += m.g[k][j] * Jp[k][i];
    const Mat4 E = orthonormal_frame(m.g, orientation);
    Mat4 wf{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) wf[a][b] += omega[i][j] * E[a][i] * E[b][j];

    KahlerCurvatureResidual r;
    r.scalar = c.scalar;
    double diff_sq = 0.0, pp_sq = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int cc = 0; cc < 4; ++cc)
                for (int d = 0; d < 4; ++d) {
                    double t = 0.0;
                    for (int A = 0; A < 3; ++A)
                        for (int B = 0; B < 3; ++B) t -= c.block_pp[A][B] * basis[A][a][b] * basis[B][cc][d];
                    pp_sq += t * t;
                    const double e = t + c.scalar / 8.0 * wf[a][b] * wf[cc][d];
                    diff_sq += e * e;
                }
    r.rm_pp_vs_omega = std::sqrt(diff_sq);
    r.rm_pp_norm = std::abs(pp_sq - c.scalar * c.scalar / 4.0);
    return r;
}

}  // namespace sfk
