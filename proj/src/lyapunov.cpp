#include "hopflyap/lyapunov.hpp"

#include <cmath>

#include "hopflyap/errors.hpp"

namespace hopflyap {

using linalg::Complex;

namespace {

double residual(const CMat4& m, const CVec4& v, Complex lambda) {
    const CVec4 mv = linalg::matvec(m, v);
    double r = 0.0;
    for (int i = 0; i < 4; ++i) r = std::max(r, std::abs(mv[i] - lambda * v[i]));
    return r;
}

CVec4 rescaled(const CVec4& v, Complex target, std::size_t idx) {
    if (v[idx] == Complex(0.0)) {
        throw StructureError("eigenvector gauge component is zero");
    }
    return linalg::scaled(v, target / v[idx]);
}

}  // namespace

CVec4 gauge_right(const CMat4& A, const CVec4& q) { return rescaled(q, 3.0 * A[1][0], 1); }

CVec4 gauge_left(const CMat4& A, const CVec4& p, Complex lambda) {
    return rescaled(p, 3.0 * (A[1][1] + lambda), 3);
}

EigenData eigen_data_from_vectors(const CMat4& A, Complex lambda, const CVec4& q,
                                  const CVec4& raw_p) {
    EigenData e;
    e.q = q;
    e.raw_p = raw_p;
    e.alpha = std::conj(linalg::inner(raw_p, q));
    if (e.alpha == Complex(0.0)) {
        throw StructureError("left and right eigenvectors are orthogonal");
    }
    for (int i = 0; i < 4; ++i) e.p[i] = raw_p[i] / e.alpha;
    e.residual_q = residual(A, e.q, lambda);
    e.residual_p = residual(linalg::transpose(A), e.p, std::conj(lambda));
    return e;
}

EigenData eigen_data(const CMat4& A, Complex lambda) {
    const CVec4 q = gauge_right(A, linalg::null_vector_decoupled(linalg::shifted(A, -lambda)));
    const CVec4 raw_p = gauge_left(
        A, linalg::null_vector(linalg::shifted(linalg::transpose(A), -std::conj(lambda))), lambda);
    return eigen_data_from_vectors(A, lambda, q, raw_p);
}

EigenData eigen_data(const Mat4& A, double omega0) {
    return eigen_data(linalg::to_complex(A), Complex(0.0, omega0));
}

LyapunovBreakdown lyapunov_from_eigen(const DerivativeBundle& bundle, Complex lambda,
                                      const EigenData& eigen, SolveStrategy strategy) {
    const CMat4 A = linalg::to_complex(bundle.jacobian);
    const CVec4& q = eigen.q;
    const CVec4& p = eigen.p;
    const CVec4 qbar = linalg::conj(q);

    LyapunovBreakdown r;
    r.eigen = eigen;
    r.omega0 = std::abs(lambda.imag());
    r.det_A = linalg::det(A);

    auto solve = [strategy](const CMat4& m, const CVec4& rhs, int* reduced) {
        return strategy == SolveStrategy::Decoupled ? linalg::solve_decoupled(m, rhs, reduced)
                                                    : linalg::lu_solve(m, rhs);
    };

    r.B_qqbar = bilinear_B(bundle, q, qbar);
    r.v = solve(A, r.B_qqbar, &r.reduced_v);
    r.B_qv = bilinear_B(bundle, q, r.v);

    r.B_qq = bilinear_B(bundle, q, q);
    CMat4 resolvent = A;
    for (auto& row : resolvent)
        for (auto& c : row) c = -c;
    resolvent = linalg::shifted(resolvent, 2.0 * lambda);
    r.w = solve(resolvent, r.B_qq, &r.reduced_w);
    r.B_qbarw = bilinear_B(bundle, qbar, r.w);

    r.C_qqqbar = trilinear_C(bundle, q, q, qbar);

    r.ip_C = linalg::inner(p, r.C_qqqbar);
    r.ip_Bv = linalg::inner(p, r.B_qv);
    r.ip_Bw = linalg::inner(p, r.B_qbarw);
    r.a = (r.ip_C - 2.0 * r.ip_Bv + r.ip_Bw).real() / (2.0 * r.omega0);
    const double qn = linalg::norm2(q);
    r.a_unit_norm = r.a / (qn * qn);
    return r;
}

LyapunovBreakdown first_lyapunov(const HopfPoint& hopf, const LyapunovOptions& options) {
    const ModelParams params = ModelParams::make(hopf.mu_h, hopf.epsilon, hopf.k);
    const StateVec P0 = equilibrium(hopf.mu_h, hopf.epsilon).point;
    const DerivativeBundle bundle = derivative_bundle(P0, params);
    const Complex lambda(0.0, options.conjugate_branch ? -hopf.omega0 : hopf.omega0);
    const EigenData eigen = eigen_data(linalg::to_complex(bundle.jacobian), lambda);
    return lyapunov_from_eigen(bundle, lambda, eigen, options.strategy);
}

std::vector<SweepRow> lyapunov_vs_eps(const std::vector<double>& eps_list, double k,
                                      double mu_guess) {
    std::vector<SweepRow> rows;
    rows.reserve(eps_list.size());
    for (double eps : eps_list) {
        SweepRow row;
        row.epsilon = eps;
        try {
            if (!(eps > 0.0 && eps <= 0.1)) throw DomainError("epsilon must lie in (0, 0.1]");
            const HopfPoint h = solve_hopf_mu(eps, mu_guess > 0.0 ? mu_guess : mu0_radical(), k);
            row.mu_h = h.mu_h;
            row.omega0 = h.omega0;
            row.a = first_lyapunov(h).a;
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double extrapolate_to_zero(double e1, double a1, double e2, double a2) {
    return (a1 * e2 - a2 * e1) / (e2 - e1);
}

}  // namespace hopflyap
