// Fixed-size 4x4 linear algebra used by every module.
#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace sfk {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;
using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

// Raised when a metric value is not symmetric positive definite.
struct MetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Mat4 zero_mat4();
Mat4 identity4();
Mat4 transpose(const Mat4& a);
Mat4 matmul(const Mat4& a, const Mat4& b);
Vec4 matvec(const Mat4& a, const Vec4& v);
double dot(const Vec4& a, const Vec4& b);
double det4(const Mat4& a);

// g(u, v) for a metric value g.
double inner(const Mat4& g, const Vec4& u, const Vec4& v);

// Throws MetricError unless g is symmetric positive definite.
void require_spd(const Mat4& g);

// Inverse of an SPD metric; throws MetricError when the condition number
// exceeds max_condition.
Mat4 inverse_spd(const Mat4& g, double max_condition = 1e12);

double condition_number_spd(const Mat4& g);

// Determinant of the k x k submatrix with the given rows and columns.
double minor_det(const Mat4& a, const int* rows, const int* cols, int k);

double max_abs(const Mat4& a);

}  // namespace sfk
