#pragma once

// First Lyapunov coefficient at a Hopf point,
//
//   a = 1/(2 w0) Re[ <p, C(q,q,qbar)> - 2 <p, B(q, A^-1 B(q,qbar))>
//                  + <p, B(qbar, (2 i w0 I - A)^-1 B(q,q))> ],
//
// with A q = i w0 q, A^T p = -i w0 p and <p, q> = 1.
//
// The value scales with |q|^2, so the eigenvector gauge is part of the
// result. q is fixed by q_2 = 3 A_21, which makes
//   q = (3(i w0 - A_22), 3 A_21, 0, (2 + i w0)(i w0 - A_22))
// and reproduces the closed-form expansion as eps -> 0. a_unit_norm is the
// same coefficient for a unit-norm q.

#include <complex>
#include <string>
#include <vector>

#include "hopflyap/hopf.hpp"
#include "hopflyap/multilinear.hpp"

namespace hopflyap {

using CMat4 = linalg::CMat<4>;

enum class SolveStrategy {
    Decoupled,  // zero the decoupled z coordinate, LU on the rest (works at eps = 0)
    FullLU,     // plain 4x4 LU; singular at eps = 0
};

struct EigenData {
    CVec4 q{};
    CVec4 p{};
    CVec4 raw_p{};
    std::complex<double> alpha{};  // p = raw_p / alpha
    double residual_q = 0.0;       // ||A q - lambda q||_inf
    double residual_p = 0.0;       // ||A^T p - conj(lambda) p||_inf
};

struct LyapunovBreakdown {
    EigenData eigen;
    CVec4 B_qqbar{}, v{}, B_qv{}, B_qq{}, w{}, B_qbarw{}, C_qqqbar{};
    std::complex<double> ip_C{}, ip_Bv{}, ip_Bw{};
    std::complex<double> det_A{};
    double omega0 = 0.0;
    double a = 0.0;
    double a_unit_norm = 0.0;
    // Coordinates removed by the decoupled solves for v and w.
    int reduced_v = 0;
    int reduced_w = 0;
};

// Scales q so that q_2 = 3 A_21.
CVec4 gauge_right(const CMat4& A, const CVec4& q);
// Scales a left vector so that p_4 = 3 (A_22 + lambda).
CVec4 gauge_left(const CMat4& A, const CVec4& p, std::complex<double> lambda);

// Eigen data for lambda = +-i w0 (pass the branch eigenvalue).
EigenData eigen_data(const CMat4& A, std::complex<double> lambda);
EigenData eigen_data(const Mat4& A, double omega0);

// Normalizes raw_p against q (<p, q> = 1) and records residuals.
EigenData eigen_data_from_vectors(const CMat4& A, std::complex<double> lambda, const CVec4& q,
                                  const CVec4& raw_p);

// Assembles the coefficient from explicit eigen data. The branch eigenvalue
// lambda = +-i w0 enters the w solve as 2 lambda; the prefactor uses |w0|.
LyapunovBreakdown lyapunov_from_eigen(const DerivativeBundle& bundle, std::complex<double> lambda,
                                      const EigenData& eigen,
                                      SolveStrategy strategy = SolveStrategy::Decoupled);

struct LyapunovOptions {
    SolveStrategy strategy = SolveStrategy::Decoupled;
    bool conjugate_branch = false;  // use -i w0, qbar, pbar
};

LyapunovBreakdown first_lyapunov(const HopfPoint& hopf, const LyapunovOptions& options = {});

struct SweepRow {
    double epsilon = 0.0;
    double mu_h = 0.0;
    double omega0 = 0.0;
    double a = 0.0;
    std::string error;  // empty on success
    bool ok() const { return error.empty(); }
};

// One independent row per epsilon; failures are recorded per row.
// mu_guess <= 0 starts Newton from the eps = 0 root.
std::vector<SweepRow> lyapunov_vs_eps(const std::vector<double>& eps_list, double k = 0.0,
                                      double mu_guess = 0.0);

// Value at eps = 0 of the line through (e1, a1) and (e2, a2).
double extrapolate_to_zero(double e1, double a1, double e2, double a2);

}  // namespace hopflyap
