#include "hopflyap/asymptotics.hpp"

#include <cmath>
#include <string>

#include "hopflyap/errors.hpp"
#include "hopflyap/hopf.hpp"

namespace hopflyap::asymptotics {

namespace {

double root7mu0() { return std::sqrt(7.0 * mu0_radical()); }

}  // namespace

BPolys b_polys(double mu) {
    return {
        // constant terms are -250, as the eps-derivatives of the exact cubic give
        -3.0 / 25.0 * mu * (mu * mu - 45.0 * mu - 250.0),
        -6.0 / 25.0 * mu * (6.0 * mu * mu - 295.0 * mu - 250.0),
        6.0 / 5.0 * mu * (mu - 50.0) * (mu - 50.0),
    };
}

MuSeries mu_series(double /*k*/) {
    MuSeries s;
    s.mu0 = mu0_radical();
    const BPolys b = b_polys(s.mu0);
    s.mu1 = -(7.0 * s.mu0 * b.b1 + (7.0 + s.mu0) * b.b2 - b.b3) / (14.0 * s.mu0 + 59.0);
    s.mu2 = 7.0 * s.mu1 + b.b2;
    s.mu3 = s.mu2 / (2.0 * std::sqrt(7.0 * s.mu0));
    return s;
}

BetaCoeffs beta_coeffs(double k) {
    const MuSeries s = mu_series(k);
    const double m = s.mu0;
    const double r = root7mu0();
    BetaCoeffs c;
    c.x_T = 3.0 / 5.0 * m * (50.0 - m);
    c.alpha_T = (-1.0 + 2.0 / 3.0 * k * c.x_T) * c.x_T;
    c.beta1 = -2.0 / 5.0 * m * (50.0 - m);
    c.beta2 = -s.mu1 - 3.0 / 25.0 * m * m * (50.0 - m);
    c.beta3 = 3.0 / 5.0 * m * (50.0 - m);
    c.beta4 = 2.0 * s.mu3 * r - c.beta3 * m + 5.0 * c.beta2;
    c.beta5 = 5.0 * s.mu3 + m * s.mu3 + c.beta3 * r - c.beta2 * r;
    return c;
}

NormalizationXY normalization_xy() {
    const double m = mu0_radical();
    return {3.0 * (21.0 * m * m + 39.0 * m + 500.0), 6.0 * root7mu0() * m * m};
}

DEF def_constants() {
    const double m = mu0_radical();
    const double r = root7mu0();
    DEF d;
    d.D = {588.0 * m * m, 4.0 * r * (-14.0 * m * m - 103.0 * m + 250.0)};
    d.E = 7.0 * (-709.0 * m * m - 3485.0 * m + 12500.0);
    d.F = 88.0 * m * m - 1897.0 * m - 3500.0;
    return d;
}

double re_z_rational(double y_numerator_constant) {
    const double m = mu0_radical();
    const double r = root7mu0();
    const auto [x, y] = normalization_xy();
    const double m2 = m * m, m3 = m2 * m, m4 = m3 * m;
    const double den = 196.0 * m4 + 5971.0 * m3 + 3609.0 * m2 - 51500.0 * m + 62500.0;
    const double ny = 8078.0 * m4 + 161654.0 * m3 + 80205.0 * m2 - 2158750.0 * m + y_numerator_constant;
    const double nx = 1232.0 * m4 + 86729.0 * m3 + 245904.0 * m2 - 1723750.0 * m + 875000.0;
    return r * ny / (4.0 * m * den) * y - nx / (4.0 * den) * x;
}

ReZ re_z() {
    const double r = root7mu0();
    const auto [x, y] = normalization_xy();
    const DEF d = def_constants();
    ReZ z;
    z.ell1 = x * d.E - y * r * d.F;
    z.k1 = x * r * d.F + y * d.E;
    z.ell2 = d.D.real();
    z.k2 = d.D.imag();
    z.via_components = (z.ell1 * z.ell2 + z.k1 * z.k2) / (z.ell2 * z.ell2 + z.k2 * z.k2);
    z.via_rational = re_z_rational();
    const double diff = std::abs(z.via_components - z.via_rational);
    if (diff > 1e-9 * std::abs(z.via_components)) {
        throw ConsistencyError("re_z: component and rational routes disagree (" +
                               std::to_string(z.via_components) + " vs " +
                               std::to_string(z.via_rational) + ")");
    }
    z.value = z.via_components;
    return z;
}

double a0_closed_form(double /*k*/) {
    const double m = mu0_radical();
    const double r = root7mu0();
    const auto [x, y] = normalization_xy();
    const double n2 = x * x + y * y;
    const double bv_term =
        1500.0 / n2 * ((2.0 * m * m - 7.0 * m) * x - r * y * (4.0 * m - 50.0)) / (m * (m - 50.0));
    const double bw_term = 3000.0 * re_z().value / (n2 * m);
    return (bv_term + bw_term) / r;
}

AsymptoticCoeffs compute_all(double k) {
    AsymptoticCoeffs c;
    const MuSeries s = mu_series(k);
    c.mu0 = s.mu0;
    c.mu1 = s.mu1;
    c.mu2 = s.mu2;
    c.mu3 = s.mu3;
    const BPolys b = b_polys(s.mu0);
    c.b1 = b.b1;
    c.b2 = b.b2;
    c.b3 = b.b3;
    c.d1_0 = 2.0 / 5.0 * s.mu0 * (s.mu0 - 50.0);
    c.d2_0 = 3.0 / 25.0 * s.mu0 * s.mu0 * (s.mu0 - 50.0);
    const BetaCoeffs bc = beta_coeffs(k);
    c.alpha_T = bc.alpha_T;
    c.x_T = bc.x_T;
    c.beta1 = bc.beta1;
    c.beta2 = bc.beta2;
    c.beta3 = bc.beta3;
    c.beta4 = bc.beta4;
    c.beta5 = bc.beta5;
    const NormalizationXY xy = normalization_xy();
    c.x_norm = xy.x;
    c.y_norm = xy.y;
    const DEF d = def_constants();
    c.D = d.D;
    c.E = d.E;
    c.F = d.F;
    const ReZ z = re_z();
    c.ell1 = z.ell1;
    c.ell2 = z.ell2;
    c.k1 = z.k1;
    c.k2 = z.k2;
    c.re_z = z.value;
    c.a0 = a0_closed_form(k);
    return c;
}

}  // namespace hopflyap::asymptotics
