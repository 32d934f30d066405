#include "sfk/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace sfk {

namespace {

Eigen::Matrix4d to_eigen(const Mat4& a) {
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = a[i][j];
    return m;
}

Mat4 from_eigen(const Eigen::Matrix4d& m) {
    Mat4 a{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a[i][j] = m(i, j);
    return a;
}

void check_symmetric(const Mat4& g) {
    const double scale = std::max(max_abs(g), 1e-300);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(g[i][j] - g[j][i]) > 1e-10 * scale)
                throw MetricError("metric value is not symmetric");
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (!std::isfinite(g[i][j])) throw MetricError("metric value is not finite");
}

}  // namespace

Mat4 zero_mat4() { return Mat4{}; }

Mat4 identity4() {
    Mat4 a{};
    for (int i = 0; i < 4; ++i) a[i][i] = 1.0;
    return a;
}

Mat4 transpose(const Mat4& a) {
    Mat4 t{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[i][j] = a[j][i];
    return t;
}

Mat4 matmul(const Mat4& a, const Mat4& b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

Vec4 matvec(const Mat4& a, const Vec4& v) {
    Vec4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += a[i][j] * v[j];
    return r;
}

double dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double det4(const Mat4& a) { return to_eigen(a).determinant(); }

double inner(const Mat4& g, const Vec4& u, const Vec4& v) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += g[i][j] * u[i] * v[j];
    return s;
}

void require_spd(const Mat4& g) {
    check_symmetric(g);
    Eigen::LLT<Eigen::Matrix4d> llt(to_eigen(g));
    if (llt.info() != Eigen::Success) throw MetricError("metric value is not positive definite");
}

double condition_number_spd(const Mat4& g) {
    check_symmetric(g);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(to_eigen(g), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (ev(0) <= 0.0) throw MetricError("metric value is not positive definite");
    return ev(3) / ev(0);
}

Mat4 inverse_spd(const Mat4& g, double max_condition) {
    const double cond = condition_number_spd(g);
    if (cond > max_condition)
        throw MetricError("metric value is near-degenerate (condition number " +
                          std::to_string(cond) + ")");
    Eigen::LLT<Eigen::Matrix4d> llt(to_eigen(g));
    Mat4 inv = from_eigen(llt.solve(Eigen::Matrix4d::Identity()));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) inv[i][j] = inv[j][i] = 0.5 * (inv[i][j] + inv[j][i]);
    return inv;
}

double minor_det(const Mat4& a, const int* r, const int* c, int k) {
    switch (k) {
        case 0:
            return 1.0;
        case 1:
            return a[r[0]][c[0]];
        case 2:
            return a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]];
        case 3:
            return a[r[0]][c[0]] * (a[r[1]][c[1]] * a[r[2]][c[2]] - a[r[1]][c[2]] * a[r[2]][c[1]]) -
                   a[r[0]][c[1]] * (a[r[1]][c[0]] * a[r[2]][c[2]] - a[r[1]][c[2]] * a[r[2]][c[0]]) +
                   a[r[0]][c[2]] * (a[r[1]][c[0]] * a[r[2]][c[1]] - a[r[1]][c[1]] * a[r[2]][c[0]]);
        default: {
            Mat4 s{};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) s[i][j] = a[r[i]][c[j]];
            return det4(s);
        }
    }
}

double max_abs(const Mat4& a) {
    double m = 0.0;
    for (const auto& row : a)
        for (double x : row) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace sfk
