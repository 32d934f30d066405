// Second-order forward-mode jets: value, gradient and Hessian in N variables.
#pragma once

#include <array>
#include <cmath>

namespace sfk {

template <int N>
struct Jet {
    double v = 0.0;
    std::array<double, N> d{};
    std::array<std::array<double, N>, N> h{};

    Jet() = default;
    Jet(double c) : v(c) {}  // NOLINT: implicit constants are the point

    static Jet variable(double value, int k) {
        Jet j(value);
        j.d[k] = 1.0;
        return j;
    }
};

namespace jet_detail {

// Chain rule for a scalar function with f, f', f'' at x.v.
template <int N>
Jet<N> apply(const Jet<N>& x, double f, double f1, double f2) {
    Jet<N> r;
    r.v = f;
    for (int i = 0; i < N; ++i) r.d[i] = f1 * x.d[i];
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) r.h[i][j] = f1 * x.h[i][j] + f2 * x.d[i] * x.d[j];
    return r;
}

}  // namespace jet_detail

template <int N>
Jet<N> operator+(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> r;
    r.v = a.v + b.v;
    for (int i = 0; i < N; ++i) {
        r.d[i] = a.d[i] + b.d[i];
        for (int j = 0; j < N; ++j) r.h[i][j] = a.h[i][j] + b.h[i][j];
    }
    return r;
}

template <int N>
Jet<N> operator-(const Jet<N>& a) {
    Jet<N> r;
    r.v = -a.v;
    for (int i = 0; i < N; ++i) {
        r.d[i] = -a.d[i];
        for (int j = 0; j < N; ++j) r.h[i][j] = -a.h[i][j];
    }
    return r;
}

template <int N>
Jet<N> operator-(const Jet<N>& a, const Jet<N>& b) {
    return a + (-b);
}

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> r;
    r.v = a.v * b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            r.h[i][j] = a.h[i][j] * b.v + a.v * b.h[i][j] + a.d[i] * b.d[j] + a.d[j] * b.d[i];
    return r;
}

template <int N>
Jet<N> operator*(double c, const Jet<N>& a) {
    Jet<N> r;
    r.v = c * a.v;
    for (int i = 0; i < N; ++i) {
        r.d[i] = c * a.d[i];
        for (int j = 0; j < N; ++j) r.h[i][j] = c * a.h[i][j];
    }
    return r;
}

template <int N>
Jet<N> operator*(const Jet<N>& a, double c) {
    return c * a;
}

template <int N>
Jet<N> operator+(const Jet<N>& a, double c) {
    Jet<N> r = a;
    r.v += c;
    return r;
}

template <int N>
Jet<N> operator+(double c, const Jet<N>& a) {
    return a + c;
}

template <int N>
Jet<N> operator-(const Jet<N>& a, double c) {
    return a + (-c);
}

template <int N>
Jet<N> operator-(double c, const Jet<N>& a) {
    return (-a) + c;
}

template <int N>
Jet<N> inv(const Jet<N>& a) {
    const double iv = 1.0 / a.v;
    return jet_detail::apply(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
    return a * inv(b);
}

template <int N>
Jet<N> operator/(const Jet<N>& a, double c) {
    return (1.0 / c) * a;
}

template <int N>
Jet<N> operator/(double c, const Jet<N>& a) {
    return c * inv(a);
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
    const double e = std::exp(a.v);
    return jet_detail::apply(a, e, e, e);
}

template <int N>
Jet<N> log(const Jet<N>& a) {
    return jet_detail::apply(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
    const double s = std::sqrt(a.v);
    return jet_detail::apply(a, s, 0.5 / s, -0.25 / (s * a.v));
}

template <int N>
Jet<N> sin(const Jet<N>& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return jet_detail::apply(a, s, c, -s);
}

template <int N>
Jet<N> cos(const Jet<N>& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return jet_detail::apply(a, c, -s, -c);
}

template <int N>
Jet<N> sinh(const Jet<N>& a) {
    const double s = std::sinh(a.v), c = std::cosh(a.v);
    return jet_detail::apply(a, s, c, s);
}

template <int N>
Jet<N> cosh(const Jet<N>& a) {
    const double s = std::sinh(a.v), c = std::cosh(a.v);
    return jet_detail::apply(a, c, s, c);
}

template <int N>
Jet<N> atan(const Jet<N>& a) {
    const double q = 1.0 / (1.0 + a.v * a.v);
    return jet_detail::apply(a, std::atan(a.v), q, -2.0 * a.v * q * q);
}

template <int N>
Jet<N> acos(const Jet<N>& a) {
    const double q = 1.0 / std::sqrt(1.0 - a.v * a.v);
    return jet_detail::apply(a, std::acos(a.v), -q, -a.v * q * q * q);
}

template <int N>
Jet<N> acosh(const Jet<N>& a) {
    const double q = 1.0 / std::sqrt(a.v * a.v - 1.0);
    return jet_detail::apply(a, std::acosh(a.v), q, -a.v * q * q * q);
}

template <int N>
Jet<N> asinh(const Jet<N>& a) {
    const double q = 1.0 / std::sqrt(a.v * a.v + 1.0);
    return jet_detail::apply(a, std::asinh(a.v), q, -a.v * q * q * q);
}

// Plain doubles pass through the same templated model code.
inline double value_of(double x) { return x; }
template <int N>
double value_of(const Jet<N>& x) {
    return x.v;
}

}  // namespace sfk
