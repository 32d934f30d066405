// Exterior algebra over a 4-dimensional coordinate chart.
//
// A k-form is stored densely as its fully antisymmetric component array
// a_{i1...ik}, so that a = (1/k!) a_{i1...ik} dx^i1 ^ ... ^ dx^ik and
// dx^0 ^ dx^1 has components a_01 = 1, a_10 = -1.
#pragma once

#include <array>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfk/linalg.hpp"

namespace sfk {

// Raised for operations whose preconditions the caller violated.
struct FormError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a finite-difference stencil would leave the chart.
struct ChartBoundaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Open coordinate box of a chart. Infinite bounds mark unbounded or
// periodic coordinates.
struct Domain {
    Vec4 lo{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    Vec4 hi{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};

    bool contains(const Vec4& x) const;
    // Distance to the nearest face along coordinate i.
    double margin(const Vec4& x, int i) const;
};

struct Point {
    std::string chart;
    Vec4 x{};
};

using VectorValue = Vec4;

class FormValue {
public:
    explicit FormValue(int degree = 0);

    static FormValue scalar(double v);
    // The coordinate 1-form dx^i.
    static FormValue coordinate(int i);
    static FormValue one_form(const Vec4& components);
    // The 2-form with the given antisymmetric component matrix.
    static FormValue two_form(const Mat4& components);

    int degree() const { return degree_; }
    int size() const { return size_; }

    // Component with the given (not necessarily sorted) indices.
    double at(std::initializer_list<int> idx) const;
    double operator[](int flat) const { return c_[flat]; }
    double& operator[](int flat) { return c_[flat]; }
    // Component of a strictly increasing multi-index given as an array.
    double sorted(const int* idx) const;
    // Assign the component for the multi-index and every permutation of it.
    void set(std::initializer_list<int> idx, double v);
    void set_sorted(const int* idx, double v);

    // For degree 0 and 4, the single independent component.
    double value() const;

    Mat4 as_matrix() const;  // degree 2 only
    Vec4 as_vector() const;  // degree 1 only

    FormValue& operator+=(const FormValue& o);
    FormValue& operator-=(const FormValue& o);
    FormValue& operator*=(double s);

    // Largest violation of exact antisymmetry over all transpositions.
    double antisymmetry_defect() const;
    double max_abs() const;

private:
    int degree_;
    int size_;
    std::array<double, 256> c_{};
};

FormValue operator+(FormValue a, const FormValue& b);
FormValue operator-(FormValue a, const FormValue& b);
FormValue operator-(FormValue a);
FormValue operator*(double s, FormValue a);
FormValue operator*(FormValue a, double s);

// Strictly increasing multi-indices of length k over {0,1,2,3}.
const std::vector<std::array<int, 4>>& sorted_indices(int k);

FormValue wedge(const FormValue& a, const FormValue& b);
// Contraction of v into the first slot.
FormValue interior(const VectorValue& v, const FormValue& a);

// Metric inner product with |dx^0 ^ dx^1| = 1 for an orthonormal chart.
double form_inner(const FormValue& a, const FormValue& b, const Mat4& g);
double form_norm(const FormValue& a, const Mat4& g);

// Metric Hodge dual. orientation = +1 when the coordinate basis is
// positively oriented, -1 otherwise.
FormValue hodge(const FormValue& a, const Mat4& g, int orientation);
// The Riemannian volume form sqrt(det g) dx^0123 times orientation.
FormValue volume_form(const Mat4& g, int orientation);

VectorValue sharp(const FormValue& a, const Mat4& g);
FormValue flat(const VectorValue& v, const Mat4& g);

struct FormField {
    int degree = 0;
    std::function<FormValue(const Point&)> evaluator;
    Domain domain;

    FormField() = default;
    FormField(int deg, std::function<FormValue(const Point&)> f, Domain dom = {});
    // Evaluates and checks the declared degree.
    FormValue operator()(const Point& p) const;
};

using VectorField = std::function<VectorValue(const Point&)>;
using ScalarField = std::function<double(const Point&)>;

FormField scalar_field(const ScalarField& f, Domain dom = {});

// Default stencil step along coordinate i at x.
double default_step(const Vec4& x, int i);

// Exterior derivative by fourth-order central differences (5-point stencil
// without the centre). step <= 0 selects default_step per coordinate;
// otherwise step is relative: h_i = step * max(1, |x_i|).
FormValue exterior_derivative(const FormField& f, const Point& p, double step = 0.0);

// Partial derivatives of a scalar by the same stencil.
Vec4 gradient_fd(const ScalarField& f, const Point& p, const Domain& dom, double step = 0.0);

// Lie derivative by the Cartan formula d(i_X a) + i_X(da).
FormValue lie_derivative(const VectorField& X, const FormField& a, const Point& p,
                         double step = 0.0);

}  // namespace sfk
