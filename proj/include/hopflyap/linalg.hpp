#pragma once

// Dense complex linear algebra for the small fixed dimensions used by the
// Hopf pipeline (n = 3 and n = 4). Matrices are plain row-major arrays.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hopflyap/errors.hpp"

namespace hopflyap::linalg {

using Complex = std::complex<double>;

template <std::size_t N>
using CVec = std::array<Complex, N>;

template <std::size_t N>
using CMat = std::array<std::array<Complex, N>, N>;

template <std::size_t N>
using RMat = std::array<std::array<double, N>, N>;

// Monic polynomial x^n + coeffs[0] x^(n-1) + ... + coeffs[n-1].
struct PolyCoeffs {
    std::vector<Complex> coeffs;
    std::size_t degree() const { return coeffs.size(); }
    Complex eval(Complex x) const;
};

inline constexpr double kSingularPivotRel = 1e-13;

template <std::size_t N>
CMat<N> to_complex(const RMat<N>& m) {
    CMat<N> c{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) c[i][j] = m[i][j];
    return c;
}

template <std::size_t N>
CMat<N> identity() {
    CMat<N> m{};
    for (std::size_t i = 0; i < N; ++i) m[i][i] = 1.0;
    return m;
}

template <std::size_t N>
CMat<N> transpose(const CMat<N>& m) {
    CMat<N> t{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) t[i][j] = m[j][i];
    return t;
}

// m + shift * I
template <std::size_t N>
CMat<N> shifted(const CMat<N>& m, Complex shift) {
    CMat<N> s = m;
    for (std::size_t i = 0; i < N; ++i) s[i][i] += shift;
    return s;
}

template <std::size_t N>
CMat<N> matmul(const CMat<N>& a, const CMat<N>& b) {
    CMat<N> c{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t j = 0; j < N; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

template <std::size_t N>
CVec<N> matvec(const CMat<N>& a, const CVec<N>& x) {
    CVec<N> y{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) y[i] += a[i][j] * x[j];
    return y;
}

template <std::size_t N>
double norm_inf(const CVec<N>& v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

// Max absolute row sum.
template <std::size_t N>
double norm_inf(const CMat<N>& m) {
    double best = 0.0;
    for (const auto& row : m) {
        double s = 0.0;
        for (const auto& c : row) s += std::abs(c);
        best = std::max(best, s);
    }
    return best;
}

template <std::size_t N>
double norm2(const CVec<N>& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

// <u, v> = sum conj(u_i) v_i
template <std::size_t N>
Complex inner(const CVec<N>& u, const CVec<N>& v) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::conj(u[i]) * v[i];
    return s;
}

template <std::size_t N>
CVec<N> conj(const CVec<N>& v) {
    CVec<N> c{};
    for (std::size_t i = 0; i < N; ++i) c[i] = std::conj(v[i]);
    return c;
}

template <std::size_t N>
CVec<N> scaled(const CVec<N>& v, Complex s) {
    CVec<N> c{};
    for (std::size_t i = 0; i < N; ++i) c[i] = v[i] * s;
    return c;
}

// Characteristic polynomial det(xI - m) by the Faddeev-LeVerrier recurrence.
template <std::size_t N>
PolyCoeffs char_poly(const CMat<N>& m) {
    PolyCoeffs p;
    p.coeffs.resize(N);
    CMat<N> mk{};
    Complex c = 1.0;
    for (std::size_t k = 1; k <= N; ++k) {
        mk = shifted(matmul(m, mk), c);
        const CMat<N> amk = matmul(m, mk);
        Complex tr = 0.0;
        for (std::size_t i = 0; i < N; ++i) tr += amk[i][i];
        c = -tr / static_cast<double>(k);
        p.coeffs[k - 1] = c;
    }
    return p;
}

// All roots of a monic polynomial (Durand-Kerner). Throws ConvergenceError.
std::vector<Complex> poly_roots(const PolyCoeffs& p);

template <std::size_t N>
struct LU {
    CMat<N> lu{};
    std::array<std::size_t, N> perm{};
    int sign = 1;
    double min_pivot = 0.0;
};

// Partial-pivoting LU; never throws, singular pivots are left in place.
template <std::size_t N>
LU<N> lu_factor(const CMat<N>& m) {
    LU<N> f;
    f.lu = m;
    for (std::size_t i = 0; i < N; ++i) f.perm[i] = i;
    f.min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r) {
            if (std::abs(f.lu[r][col]) > std::abs(f.lu[piv][col])) piv = r;
        }
        if (piv != col) {
            std::swap(f.lu[piv], f.lu[col]);
            std::swap(f.perm[piv], f.perm[col]);
            f.sign = -f.sign;
        }
        const Complex pv = f.lu[col][col];
        f.min_pivot = std::min(f.min_pivot, std::abs(pv));
        if (pv == Complex(0.0)) continue;
        for (std::size_t r = col + 1; r < N; ++r) {
            const Complex factor = f.lu[r][col] / pv;
            f.lu[r][col] = factor;
            if (factor == Complex(0.0)) continue;
            for (std::size_t c = col + 1; c < N; ++c) f.lu[r][c] -= factor * f.lu[col][c];
        }
    }
    return f;
}

template <std::size_t N>
Complex det(const CMat<N>& m) {
    const LU<N> f = lu_factor(m);
    Complex d = static_cast<double>(f.sign);
    for (std::size_t i = 0; i < N; ++i) d *= f.lu[i][i];
    return d;
}

// Solves m x = rhs. Throws SingularMatrixError when a pivot drops below
// 1e-13 * ||m||_inf.
template <std::size_t N>
CVec<N> lu_solve(const CMat<N>& m, const CVec<N>& rhs) {
    const LU<N> f = lu_factor(m);
    const double threshold = kSingularPivotRel * norm_inf(m);
    if (!(f.min_pivot > threshold)) {
        throw SingularMatrixError("lu_solve: pivot " + std::to_string(f.min_pivot) +
                                      " below threshold " + std::to_string(threshold),
                                  f.min_pivot);
    }
    CVec<N> x{};
    for (std::size_t i = 0; i < N; ++i) {
        Complex s = rhs[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu[i][j] * x[j];
        x[i] = s;
    }
    for (std::size_t i = N; i-- > 0;) {
        Complex s = x[i];
        for (std::size_t j = i + 1; j < N; ++j) s -= f.lu[i][j] * x[j];
        x[i] = s / f.lu[i][i];
    }
    return x;
}

// Explicit inverse, column by column. Diagnostics only.
template <std::size_t N>
CMat<N> inverse(const CMat<N>& m) {
    CMat<N> inv{};
    for (std::size_t c = 0; c < N; ++c) {
        CVec<N> e{};
        e[c] = 1.0;
        const CVec<N> col = lu_solve(m, e);
        for (std::size_t r = 0; r < N; ++r) inv[r][c] = col[r];
    }
    return inv;
}

// Unit-norm spanning vector of the kernel of a rank n-1 matrix, by complete
// pivoting elimination with the last (deficient) pivot freed. Throws
// StructureError when the numerical rank is not n-1.
template <std::size_t N>
CVec<N> null_vector(const CMat<N>& m) {
    static_assert(N >= 1);
    const double scale = norm_inf(m);
    if (scale == 0.0) {
        if constexpr (N == 1) {
            return CVec<N>{Complex(1.0)};
        } else {
            throw StructureError("null_vector: zero matrix has rank deficiency > 1");
        }
    }
    constexpr double kRankTol = 1e-8;
    CMat<N> a = m;
    std::array<std::size_t, N> colperm{};
    for (std::size_t i = 0; i < N; ++i) colperm[i] = i;

    for (std::size_t step = 0; step + 1 < N; ++step) {
        std::size_t pr = step, pc = step;
        double best = -1.0;
        for (std::size_t r = step; r < N; ++r)
            for (std::size_t c = step; c < N; ++c)
                if (std::abs(a[r][c]) > best) {
                    best = std::abs(a[r][c]);
                    pr = r;
                    pc = c;
                }
        if (best <= kRankTol * scale) {
            throw StructureError("null_vector: rank deficiency exceeds one");
        }
        std::swap(a[pr], a[step]);
        if (pc != step) {
            for (auto& row : a) std::swap(row[pc], row[step]);
            std::swap(colperm[pc], colperm[step]);
        }
        for (std::size_t r = step + 1; r < N; ++r) {
            const Complex factor = a[r][step] / a[step][step];
            if (factor == Complex(0.0)) continue;
            a[r][step] = 0.0;
            for (std::size_t c = step + 1; c < N; ++c) a[r][c] -= factor * a[step][c];
        }
    }
    if (std::abs(a[N - 1][N - 1]) > kRankTol * scale) {
        throw StructureError("null_vector: matrix is numerically nonsingular");
    }

    CVec<N> y{};
    y[N - 1] = 1.0;
    for (std::size_t i = N - 1; i-- > 0;) {
        Complex s = 0.0;
        for (std::size_t j = i + 1; j < N; ++j) s -= a[i][j] * y[j];
        y[i] = s / a[i][i];
    }
    CVec<N> v{};
    for (std::size_t i = 0; i < N; ++i) v[colperm[i]] = y[i];
    const double nrm = norm2(v);
    for (auto& c : v) c /= nrm;
    return v;
}

// Drops row and column `skip`.
template <std::size_t N>
CMat<N - 1> remove_index(const CMat<N>& m, std::size_t skip) {
    CMat<N - 1> r{};
    for (std::size_t i = 0, ri = 0; i < N; ++i) {
        if (i == skip) continue;
        for (std::size_t j = 0, rj = 0; j < N; ++j) {
            if (j == skip) continue;
            r[ri][rj++] = m[i][j];
        }
        ++ri;
    }
    return r;
}

template <std::size_t N>
CVec<N - 1> remove_index(const CVec<N>& v, std::size_t skip) {
    CVec<N - 1> r{};
    for (std::size_t i = 0, ri = 0; i < N; ++i)
        if (i != skip) r[ri++] = v[i];
    return r;
}

template <std::size_t N>
CVec<N + 1> insert_zero(const CVec<N>& v, std::size_t at) {
    CVec<N + 1> r{};
    for (std::size_t i = 0, vi = 0; i < N + 1; ++i) r[i] = (i == at) ? Complex(0.0) : v[vi++];
    return r;
}

}  // namespace hopflyap::linalg

namespace hopflyap::linalg {

// True when row `r` has no off-diagonal entries (exactly).
template <std::size_t N>
bool row_is_diagonal(const CMat<N>& m, std::size_t r) {
    for (std::size_t j = 0; j < N; ++j)
        if (j != r && m[r][j] != Complex(0.0)) return false;
    return true;
}

// Kernel vector that exploits exactly decoupled coordinates: a row holding
// only a nonzero diagonal entry forces that coordinate to zero, and the
// remaining block is handled one dimension down.
template <std::size_t N>
CVec<N> null_vector_decoupled(const CMat<N>& m) {
    if constexpr (N > 1) {
        for (std::size_t c = 0; c < N; ++c) {
            if (row_is_diagonal(m, c) && m[c][c] != Complex(0.0)) {
                return insert_zero(null_vector_decoupled(remove_index(m, c)), c);
            }
        }
    }
    return null_vector(m);
}

// Solve that zeroes exactly decoupled coordinates: a row with no off-diagonal
// entries and a zero right-hand side yields x_c = 0 even when its diagonal is
// zero, and the rest is solved by LU one dimension down. Returns the number
// of coordinates removed through `reduced`.
template <std::size_t N>
CVec<N> solve_decoupled(const CMat<N>& m, const CVec<N>& rhs, int* reduced = nullptr) {
    if constexpr (N > 1) {
        for (std::size_t c = 0; c < N; ++c) {
            if (row_is_diagonal(m, c) && rhs[c] == Complex(0.0)) {
                if (reduced) ++*reduced;
                return insert_zero(solve_decoupled(remove_index(m, c), remove_index(rhs, c), reduced),
                                   c);
            }
        }
    }
    return lu_solve(m, rhs);
}

}  // namespace hopflyap::linalg
