#include "sfk/forms.hpp"

#include <algorithm>
#include <cmath>

namespace sfk {

namespace {

constexpr int kPow4[5] = {1, 4, 16, 64, 256};

struct Perm {
    std::array<int, 4> p;
    int sign;
};

std::vector<Perm> make_perms(int k) {
    std::vector<Perm> out;
    std::array<int, 4> p{0, 1, 2, 3};
    do {
        int inv = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (p[i] > p[j]) ++inv;
        out.push_back({p, (inv % 2 == 0) ? 1 : -1});
    } while (std::next_permutation(p.begin(), p.begin() + k));
    return out;
}

const std::vector<Perm>& perms(int k) {
    static const std::array<std::vector<Perm>, 5> table = {make_perms(0), make_perms(1), make_perms(2),
                                                           make_perms(3), make_perms(4)};
    return table[k];
}

int flat_index(const int* idx, int k) {
    int f = 0;
    for (int i = 0; i < k; ++i) f = 4 * f + idx[i];
    return f;
}

// Sign of the permutation sorting the concatenation, 0 on a repeat.
int sort_sign(std::array<int, 4> seq, int n) {
    int sign = 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (seq[i] == seq[j]) return 0;
            if (seq[i] > seq[j]) sign = -sign;
        }
    return sign;
}

std::vector<std::array<int, 4>> make_sorted(int k) {
    std::vector<std::array<int, 4>> out;
    for (int mask = 0; mask < 16; ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        std::array<int, 4> idx{};
        int n = 0;
        for (int b = 0; b < 4; ++b)
            if (mask & (1 << b)) idx[n++] = b;
        out.push_back(idx);
    }
    std::sort(out.begin(), out.end(), [k](const auto& a, const auto& b) {
        return std::lexicographical_compare(a.begin(), a.begin() + k, b.begin(), b.begin() + k);
    });
    return out;
}

std::array<int, 4> complement(const std::array<int, 4>& idx, int k) {
    std::array<int, 4> out{};
    int n = 0;
    for (int b = 0; b < 4; ++b)
        if (std::find(idx.begin(), idx.begin() + k, b) == idx.begin() + k) out[n++] = b;
    return out;
}

// Raised components a^I for sorted I.
std::vector<double> raise_sorted(const FormValue& a, const Mat4& ginv) {
    const int k = a.degree();
    const auto& S = sorted_indices(k);
    std::vector<double> up(S.size(), 0.0);
    for (size_t I = 0; I < S.size(); ++I)
        for (size_t J = 0; J < S.size(); ++J)
            up[I] += minor_det(ginv, S[I].data(), S[J].data(), k) * a.sorted(S[J].data());
    return up;
}

}  // namespace

bool Domain::contains(const Vec4& x) const {
    for (int i = 0; i < 4; ++i)
        if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
    return true;
}

double Domain::margin(const Vec4& x, int i) const { return std::min(x[i] - lo[i], hi[i] - x[i]); }

const std::vector<std::array<int, 4>>& sorted_indices(int k) {
    static const std::array<std::vector<std::array<int, 4>>, 5> table = {
        make_sorted(0), make_sorted(1), make_sorted(2), make_sorted(3), make_sorted(4)};
    if (k < 0 || k > 4) throw FormError("form degree out of range");
    return table[k];
}

FormValue::FormValue(int degree) : degree_(degree) {
    if (degree < 0 || degree > 4) throw FormError("form degree must lie in 0..4");
    size_ = kPow4[degree];
}

FormValue FormValue::scalar(double v) {
    FormValue f(0);
    f.c_[0] = v;
    return f;
}

FormValue FormValue::coordinate(int i) {
    FormValue f(1);
    f.c_[i] = 1.0;
    return f;
}

FormValue FormValue::one_form(const Vec4& comps) {
    FormValue f(1);
    for (int i = 0; i < 4; ++i) f.c_[i] = comps[i];
    return f;
}

FormValue FormValue::two_form(const Mat4& m) {
    FormValue f(2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) f.c_[4 * i + j] = 0.5 * (m[i][j] - m[j][i]);
    return f;
}

double FormValue::at(std::initializer_list<int> idx) const {
    if (static_cast<int>(idx.size()) != degree_) throw FormError("index count does not match degree");
    return c_[flat_index(idx.begin(), degree_)];
}

double FormValue::sorted(const int* idx) const { return c_[flat_index(idx, degree_)]; }

void FormValue::set(std::initializer_list<int> idx, double v) {
    if (static_cast<int>(idx.size()) != degree_) throw FormError("index count does not match degree");
    std::array<int, 4> s{};
    std::copy(idx.begin(), idx.end(), s.begin());
    const int sign = sort_sign(s, degree_);
    if (sign == 0) {
        if (v != 0.0) throw FormError("repeated index must carry a zero component");
        return;
    }
    std::sort(s.begin(), s.begin() + degree_);
    set_sorted(s.data(), sign * v);
}

void FormValue::set_sorted(const int* idx, double v) {
    for (const auto& pm : perms(degree_)) {
        int t[4];
        for (int i = 0; i < degree_; ++i) t[i] = idx[pm.p[i]];
        c_[flat_index(t, degree_)] = pm.sign * v;
    }
}

double FormValue::value() const {
    if (degree_ == 0) return c_[0];
    if (degree_ == 4) return c_[flat_index(sorted_indices(4)[0].data(), 4)];
    throw FormError("value() needs a degree-0 or degree-4 form");
}

Mat4 FormValue::as_matrix() const {
    if (degree_ != 2) throw FormError("as_matrix() needs a 2-form");
    Mat4 m{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = c_[4 * i + j];
    return m;
}

Vec4 FormValue::as_vector() const {
    if (degree_ != 1) throw FormError("as_vector() needs a 1-form");
    return {c_[0], c_[1], c_[2], c_[3]};
}

FormValue& FormValue::operator+=(const FormValue& o) {
    if (o.degree_ != degree_) throw FormError("adding forms of different degree");
    for (int i = 0; i < size_; ++i) c_[i] += o.c_[i];
    return *this;
}

FormValue& FormValue::operator-=(const FormValue& o) {
    if (o.degree_ != degree_) throw FormError("subtracting forms of different degree");
    for (int i = 0; i < size_; ++i) c_[i] -= o.c_[i];
    return *this;
}

FormValue& FormValue::operator*=(double s) {
    for (int i = 0; i < size_; ++i) c_[i] *= s;
    return *this;
}

double FormValue::antisymmetry_defect() const {
    double worst = 0.0;
    for (int f = 0; f < size_; ++f) {
        int idx[4];
        int r = f;
        for (int i = degree_ - 1; i >= 0; --i) {
            idx[i] = r % 4;
            r /= 4;
        }
        for (int a = 0; a < degree_; ++a)
            for (int b = a + 1; b < degree_; ++b) {
                int t[4];
                std::copy(idx, idx + degree_, t);
                std::swap(t[a], t[b]);
                worst = std::max(worst, std::abs(c_[f] + c_[flat_index(t, degree_)]));
            }
    }
    return worst;
}

double FormValue::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < size_; ++i) m = std::max(m, std::abs(c_[i]));
    return m;
}

FormValue operator+(FormValue a, const FormValue& b) { return a += b; }
FormValue operator-(FormValue a, const FormValue& b) { return a -= b; }
FormValue operator-(FormValue a) { return a *= -1.0; }
FormValue operator*(double s, FormValue a) { return a *= s; }
FormValue operator*(FormValue a, double s) { return a *= s; }

FormValue wedge(const FormValue& a, const FormValue& b) {
    const int k = a.degree(), l = b.degree(), p = k + l;
    if (p > 4) throw FormError("wedge product degree exceeds 4");
    FormValue out(p);
    for (const auto& I : sorted_indices(p)) {
        double acc = 0.0;
        for (int mask = 0; mask < (1 << p); ++mask) {
            if (__builtin_popcount(mask) != k) continue;
            std::array<int, 4> S{}, T{}, seq{};
            int ns = 0, nt = 0;
            for (int q = 0; q < p; ++q) {
                if (mask & (1 << q))
                    S[ns++] = I[q];
                else
                    T[nt++] = I[q];
            }
            for (int q = 0; q < k; ++q) seq[q] = S[q];
            for (int q = 0; q < l; ++q) seq[k + q] = T[q];
            acc += sort_sign(seq, p) * a.sorted(S.data()) * b.sorted(T.data());
        }
        out.set_sorted(I.data(), acc);
    }
    return out;
}

FormValue interior(const VectorValue& v, const FormValue& a) {
    const int k = a.degree();
    if (k == 0) throw FormError("interior product of a 0-form");
    FormValue out(k - 1);
    const int stride = kPow4[k - 1];
    for (int f = 0; f < stride; ++f) {
        double acc = 0.0;
        for (int i = 0; i < 4; ++i) acc += v[i] * a[i * stride + f];
        out[f] = acc;
    }
    return out;
}

double form_inner(const FormValue& a, const FormValue& b, const Mat4& g) {
    if (a.degree() != b.degree()) throw FormError("inner product of forms of different degree");
    const Mat4 ginv = inverse_spd(g);
    const auto up = raise_sorted(a, ginv);
    const auto& S = sorted_indices(a.degree());
    double acc = 0.0;
    for (size_t I = 0; I < S.size(); ++I) acc += up[I] * b.sorted(S[I].data());
    return acc;
}

double form_norm(const FormValue& a, const Mat4& g) { return std::sqrt(std::max(0.0, form_inner(a, a, g))); }

FormValue hodge(const FormValue& a, const Mat4& g, int orientation) {
    if (orientation != 1 && orientation != -1) throw FormError("orientation must be +1 or -1");
    require_spd(g);
    const Mat4 ginv = inverse_spd(g);
    const double vol = orientation * std::sqrt(det4(g));
    const int k = a.degree();
    const auto up = raise_sorted(a, ginv);
    const auto& SI = sorted_indices(k);
    FormValue out(4 - k);
    for (const auto& K : sorted_indices(4 - k)) {
        const auto I = complement(K, 4 - k);
        std::array<int, 4> seq{};
        for (int q = 0; q < k; ++q) seq[q] = I[q];
        for (int q = 0; q < 4 - k; ++q) seq[k + q] = K[q];
        const auto pos = std::find_if(SI.begin(), SI.end(), [&](const auto& s) {
            return std::equal(s.begin(), s.begin() + k, I.begin());
        });
        out.set_sorted(K.data(), vol * sort_sign(seq, 4) * up[pos - SI.begin()]);
    }
    return out;
}

FormValue volume_form(const Mat4& g, int orientation) { return hodge(FormValue::scalar(1.0), g, orientation); }

VectorValue sharp(const FormValue& a, const Mat4& g) {
    if (a.degree() != 1) throw FormError("sharp needs a 1-form");
    require_spd(g);
    return matvec(inverse_spd(g), a.as_vector());
}

FormValue flat(const VectorValue& v, const Mat4& g) {
    require_spd(g);
    return FormValue::one_form(matvec(g, v));
}

FormField::FormField(int deg, std::function<FormValue(const Point&)> f, Domain dom)
    : degree(deg), evaluator(std::move(f)), domain(dom) {}

FormValue FormField::operator()(const Point& p) const {
    FormValue v = evaluator(p);
    if (v.degree() != degree) throw FormError("form field returned the wrong degree");
    return v;
}

FormField scalar_field(const ScalarField& f, Domain dom) {
    return FormField(0, [f](const Point& p) { return FormValue::scalar(f(p)); }, dom);
}

double default_step(const Vec4& x, int i) { return 1e-5 * std::max(1.0, std::abs(x[i])); }

namespace {

double step_for(const Vec4& x, int i, double step) {
    return step > 0.0 ? step * std::max(1.0, std::abs(x[i])) : default_step(x, i);
}

}  // namespace

FormValue exterior_derivative(const FormField& f, const Point& p, double step) {
    const int k = f.degree;
    if (k >= 4) return FormValue(4);  // d of a top form vanishes
    std::array<FormValue, 4> partial{FormValue(k), FormValue(k), FormValue(k), FormValue(k)};
    for (int i = 0; i < 4; ++i) {
        const double h = step_for(p.x, i, step);
        if (f.domain.margin(p.x, i) <= 2.0 * h)
            throw ChartBoundaryError("point too close to the chart boundary for the stencil");
        auto at = [&](double s) {
            Point q = p;
            q.x[i] += s * h;
            return f(q);
        };
        partial[i] = (1.0 / (12.0 * h)) * (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0));
    }
    FormValue out(k + 1);
    for (const auto& I : sorted_indices(k + 1)) {
        double acc = 0.0;
        for (int j = 0; j <= k; ++j) {
            int rest[4];
            int n = 0;
            for (int q = 0; q <= k; ++q)
                if (q != j) rest[n++] = I[q];
            acc += ((j % 2 == 0) ? 1.0 : -1.0) * partial[I[j]].sorted(rest);
        }
        out.set_sorted(I.data(), acc);
    }
    return out;
}

Vec4 gradient_fd(const ScalarField& f, const Point& p, const Domain& dom, double step) {
    return exterior_derivative(scalar_field(f, dom), p, step).as_vector();
}

FormValue lie_derivative(const VectorField& X, const FormField& a, const Point& p, double step) {
    const Vec4 x = X(p);
    FormValue da_part = interior(x, exterior_derivative(a, p, step));
    if (a.degree == 0) return da_part;
    FormField contracted(a.degree - 1, [&](const Point& q) { return interior(X(q), a(q)); }, a.domain);
    return exterior_derivative(contracted, p, step) + da_part;
}

}  // namespace sfk
