#include "hopflyap/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hopflyap/errors.hpp"
#include "hopflyap/linalg.hpp"

namespace hopflyap {

namespace {

constexpr int kNewtonCap = 50;

linalg::RMat<3> reduced_jacobian(double mu, double epsilon) {
    const Mat4 j = equilibrium_jacobian(mu, epsilon, 0.0);
    linalg::RMat<3> r{};
    constexpr std::array<int, 3> keep{0, 1, 3};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) r[a][b] = j[keep[a]][keep[b]];
    return r;
}

double gap_tolerance(const CubicCoeffs& c) { return 1e-12 * (1.0 + std::abs(c.a3)); }

}  // namespace

double mu0_radical() { return (-59.0 + std::sqrt(17481.0)) / 14.0; }

Mat4 equilibrium_jacobian(double mu, double epsilon, double k) {
    const ModelParams p = ModelParams::make(mu, epsilon, k);
    return jacobian(equilibrium(mu, epsilon).point, p);
}

CubicCoeffs reduced_cubic(double mu, double epsilon) {
    const auto poly = linalg::char_poly(linalg::to_complex(reduced_jacobian(mu, epsilon)));
    return {poly.coeffs[0].real(), poly.coeffs[1].real(), poly.coeffs[2].real()};
}

double hurwitz_gap(double mu, double epsilon) {
    const CubicCoeffs c = reduced_cubic(mu, epsilon);
    return c.a1 * c.a2 - c.a3;
}

double omega0_from_cubic(const CubicCoeffs& c) {
    if (!(c.a2 > 0.0)) {
        throw DomainError("omega0 requires a2 > 0, got a2 = " + std::to_string(c.a2));
    }
    return std::sqrt(c.a2);
}

double omega0_of(double mu, double epsilon) { return omega0_from_cubic(reduced_cubic(mu, epsilon)); }

std::array<std::complex<double>, 4> full_spectrum(double mu, double epsilon, double k) {
    const Mat4 j = equilibrium_jacobian(mu, epsilon, k);
    const auto roots = linalg::poly_roots(linalg::char_poly(linalg::to_complex(j)));
    std::array<std::complex<double>, 4> s{};
    std::copy(roots.begin(), roots.end(), s.begin());
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) {
        if (a.imag() != b.imag()) return a.imag() > b.imag();
        return a.real() > b.real();
    });
    return s;
}

HopfPoint solve_hopf_mu(double epsilon) { return solve_hopf_mu(epsilon, mu0_radical(), 0.0); }

HopfPoint solve_hopf_mu(double epsilon, double guess, double k) {
    if (!(epsilon >= 0.0 && epsilon <= 0.1)) {
        throw DomainError("solve_hopf_mu requires epsilon in [0, 0.1]");
    }
    double mu = guess;
    CubicCoeffs c = reduced_cubic(mu, epsilon);
    double gap = c.a1 * c.a2 - c.a3;
    int iter = 0;
    while (std::abs(gap) > gap_tolerance(c)) {
        if (iter == kNewtonCap) {
            throw ConvergenceError("solve_hopf_mu: Newton cap of 50 iterations reached", mu,
                                   gap);
        }
        const double h = 1e-7 * (1.0 + std::abs(mu));
        const double slope = (hurwitz_gap(mu + h, epsilon) - hurwitz_gap(mu - h, epsilon)) / (2.0 * h);
        mu -= gap / slope;
        if (!(mu > 0.0 && mu < 50.0)) {
            throw ConvergenceError("solve_hopf_mu: Newton left (0, 50)", mu, gap);
        }
        c = reduced_cubic(mu, epsilon);
        gap = c.a1 * c.a2 - c.a3;
        ++iter;
    }

    HopfPoint h;
    h.epsilon = epsilon;
    h.k = k;
    h.mu_h = mu;
    h.omega0 = omega0_from_cubic(c);
    h.gap_residual = gap;
    h.newton_iterations = iter;
    check_k_bound(ModelParams::make(mu, epsilon, k));
    h.spectrum = full_spectrum(mu, epsilon, k);

    const auto& top = h.spectrum[0];
    if (std::abs(top.real()) > 1e-10 * h.omega0 ||
        std::abs(top.imag() - h.omega0) > 1e-8 * h.omega0) {
        throw ConsistencyError("solve_hopf_mu: spectrum lacks the +i omega0 eigenvalue");
    }
    return h;
}

}  // namespace hopflyap
