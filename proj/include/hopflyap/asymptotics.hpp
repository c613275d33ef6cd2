#pragma once

// Closed-form small-eps expansions along the Hopf curve, ending in the
// leading-order first Lyapunov coefficient a0. All quantities are evaluated
// at mu0 = (-59 + sqrt(17481)) / 14 computed from the radical.

#include <array>
#include <complex>

namespace hopflyap::asymptotics {

struct BPolys {
    double b1 = 0.0, b2 = 0.0, b3 = 0.0;
};

// eps-coefficients of the reduced cubic: a1 = 7 + mu + b1 eps, a2 = 7 mu + b2 eps,
// a3 = 500 - 10 mu + b3 eps.
BPolys b_polys(double mu);

struct MuSeries {
    double mu0 = 0.0, mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;
};

// mu(eps) = mu0 + mu1 eps, a2 = 7 mu0 + mu2 eps, omega0 = sqrt(7 mu0) + mu3 eps.
// These do not depend on k; the argument is accepted for symmetry.
MuSeries mu_series(double k = 0.0);

struct BetaCoeffs {
    double alpha_T = 0.0, x_T = 0.0;
    double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0, beta4 = 0.0, beta5 = 0.0;
};

BetaCoeffs beta_coeffs(double k = 0.0);

struct NormalizationXY {
    double x = 0.0, y = 0.0;
};

// alpha = x + i y with <p/alpha, q> = 1 at leading order.
NormalizationXY normalization_xy();

struct DEF {
    std::complex<double> D{};
    double E = 0.0, F = 0.0;
};

DEF def_constants();

struct ReZ {
    double ell1 = 0.0, ell2 = 0.0, k1 = 0.0, k2 = 0.0;
    double via_components = 0.0;  // (ell1 ell2 + k1 k2) / (ell2^2 + k2^2)
    double via_rational = 0.0;    // expanded rational function of mu0
    double value = 0.0;
};

// Throws ConsistencyError when the two routes disagree beyond 1e-9 relative.
ReZ re_z();

// Expanded-rational route on its own. The constant of the y numerator is a
// parameter so a mistyped value can be shown to break the agreement.
double re_z_rational(double y_numerator_constant = 3125000.0);

// a0 is k-independent; the argument is accepted for interface symmetry.
double a0_closed_form(double k = 0.0);

// Everything above in one record.
struct AsymptoticCoeffs {
    double mu0 = 0.0, mu1 = 0.0, mu2 = 0.0, mu3 = 0.0;
    double b1 = 0.0, b2 = 0.0, b3 = 0.0;
    double d1_0 = 0.0, d2_0 = 0.0;
    double alpha_T = 0.0, x_T = 0.0;
    double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0, beta4 = 0.0, beta5 = 0.0;
    double x_norm = 0.0, y_norm = 0.0;
    std::complex<double> D{};
    double E = 0.0, F = 0.0;
    double ell1 = 0.0, ell2 = 0.0, k1 = 0.0, k2 = 0.0;
    double re_z = 0.0;
    double a0 = 0.0;
};

AsymptoticCoeffs compute_all(double k = 0.0);

}  // namespace hopflyap::asymptotics
