#include "hopflyap/multilinear.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hopflyap {

using linalg::Complex;

namespace {

using RVec4 = std::array<double, 4>;

RVec4 re(const CVec4& v) { return {v[0].real(), v[1].real(), v[2].real(), v[3].real()}; }
RVec4 im(const CVec4& v) { return {v[0].imag(), v[1].imag(), v[2].imag(), v[3].imag()}; }

double base_scale(const StateVec& base) {
    double m = 0.0;
    for (double v : base) m = std::max(m, std::abs(v));
    return 1.0 + m;
}

StateVec offset(const StateVec& base, double a, const RVec4& x, double b, const RVec4& y,
                double c = 0.0, const RVec4& z = {}) {
    StateVec s = base;
    for (int i = 0; i < 4; ++i) s[i] += a * x[i] + b * y[i] + c * z[i];
    return s;
}

RVec4 fd_bilinear_real(const FieldFn& f, const StateVec& base, const RVec4& x, const RVec4& y,
                       double h) {
    const StateVec pp = f(offset(base, h, x, h, y));
    const StateVec pm = f(offset(base, h, x, -h, y));
    const StateVec mp = f(offset(base, -h, x, h, y));
    const StateVec mm = f(offset(base, -h, x, -h, y));
    RVec4 r{};
    for (int i = 0; i < 4; ++i) r[i] = (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h * h);
    return r;
}

RVec4 fd_trilinear_real(const FieldFn& f, const StateVec& base, const RVec4& x, const RVec4& y,
                        const RVec4& z, double h) {
    RVec4 r{};
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1}) {
                const StateVec v = f(offset(base, sx * h, x, sy * h, y, sz * h, z));
                const double sign = sx * sy * sz;
                for (int i = 0; i < 4; ++i) r[i] += sign * v[i];
            }
    for (auto& v : r) v /= 8.0 * h * h * h;
    return r;
}

}  // namespace

CVec4 bilinear_B(const DerivativeBundle& bundle, const CVec4& x, const CVec4& y) {
    CVec4 out{};
    for (int i = 0; i < 4; ++i) {
        const Mat4& h = bundle.hessians[i];
        Complex s = 0.0;
        // paired off-diagonal terms keep B(x, y) == B(y, x) bit for bit
        for (int j = 0; j < 4; ++j) {
            if (h[j][j] != 0.0) s += h[j][j] * (x[j] * y[j]);
            for (int k = j + 1; k < 4; ++k)
                if (h[j][k] != 0.0) s += h[j][k] * (x[j] * y[k] + x[k] * y[j]);
        }
        out[i] = s;
    }
    return out;
}

CVec4 trilinear_C(const DerivativeBundle& bundle, const CVec4& x, const CVec4& y,
                  const CVec4& z) {
    CVec4 out{};
    for (const auto& e : bundle.third) {
        std::array<int, 3> idx{e.j, e.k, e.l};
        // Distinct orderings of the canonical (sorted) index triple.
        Complex s = 0.0;
        do {
            s += x[idx[0]] * y[idx[1]] * z[idx[2]];
        } while (std::next_permutation(idx.begin(), idx.end()));
        out[e.component] += e.value * s;
    }
    return out;
}

CVec4 fd_bilinear(const FieldFn& field, const StateVec& base, const CVec4& x, const CVec4& y,
                  double step_rel) {
    const double h = step_rel * base_scale(base);
    const RVec4 xr = re(x), xi = im(x), yr = re(y), yi = im(y);
    const RVec4 rr = fd_bilinear_real(field, base, xr, yr, h);
    const RVec4 ii = fd_bilinear_real(field, base, xi, yi, h);
    const RVec4 ri = fd_bilinear_real(field, base, xr, yi, h);
    const RVec4 ir = fd_bilinear_real(field, base, xi, yr, h);
    CVec4 out{};
    for (int i = 0; i < 4; ++i) out[i] = Complex(rr[i] - ii[i], ri[i] + ir[i]);
    return out;
}

CVec4 fd_trilinear(const FieldFn& field, const StateVec& base, const CVec4& x, const CVec4& y,
                   const CVec4& z, double step_rel) {
    const double h = step_rel * base_scale(base);
    // Expand over real and imaginary parts of each argument.
    const std::array<RVec4, 2> xs{re(x), im(x)}, ys{re(y), im(y)}, zs{re(z), im(z)};
    const std::array<Complex, 2> unit{Complex(1.0), Complex(0.0, 1.0)};
    CVec4 out{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                const RVec4 part = fd_trilinear_real(field, base, xs[a], ys[b], zs[c], h);
                const Complex w = unit[a] * unit[b] * unit[c];
                for (int i = 0; i < 4; ++i) out[i] += w * part[i];
            }
    return out;
}

}  // namespace hopflyap
