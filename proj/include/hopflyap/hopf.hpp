#pragma once

#include <array>
#include <complex>

#include "hopflyap/model.hpp"

namespace hopflyap {

// p(x) = x^3 + a1 x^2 + a2 x + a3, the characteristic polynomial of the
// reduced Jacobian (the z row and column removed).
struct CubicCoeffs {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
};

struct HopfPoint {
    double epsilon = 0.0;
    double k = 0.0;
    double mu_h = 0.0;
    double omega0 = 0.0;
    double gap_residual = 0.0;
    int newton_iterations = 0;
    // Eigenvalues of the full 4x4 Jacobian, ordered by decreasing imaginary
    // part, ties by decreasing real part: spectrum[0] is +i omega0.
    std::array<std::complex<double>, 4> spectrum{};
};

// (-59 + sqrt(17481)) / 14, the positive root of 7 mu^2 + 59 mu - 500.
double mu0_radical();

// Jacobian of the field at P0(mu, eps).
Mat4 equilibrium_jacobian(double mu, double epsilon, double k = 0.0);

// Exact (not series-truncated) coefficients of the reduced cubic at P0.
CubicCoeffs reduced_cubic(double mu, double epsilon);

// a1 a2 - a3; vanishes exactly when the reduced cubic has roots +-i sqrt(a2).
double hurwitz_gap(double mu, double epsilon);

// Newton on hurwitz_gap in mu. Throws ConvergenceError after 50 iterations.
HopfPoint solve_hopf_mu(double epsilon, double guess, double k = 0.0);
HopfPoint solve_hopf_mu(double epsilon);

double omega0_from_cubic(const CubicCoeffs& c);
double omega0_of(double mu, double epsilon);

// Sorted spectrum of J(P0(mu, eps)); used to probe both sides of the curve.
std::array<std::complex<double>, 4> full_spectrum(double mu, double epsilon, double k = 0.0);

}  // namespace hopflyap
