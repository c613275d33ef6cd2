#include "hopflyap/linalg.hpp"

#include <numbers>

namespace hopflyap::linalg {

Complex PolyCoeffs::eval(Complex x) const {
    Complex acc = 1.0;
    for (const auto& c : coeffs) acc = acc * x + c;
    return acc;
}

std::vector<Complex> poly_roots(const PolyCoeffs& p) {
    const std::size_t n = p.degree();
    if (n == 0) return {};

    constexpr int kMaxIter = 200;
    constexpr double kStepTol = 1e-14;

    double cmax = 0.0;
    for (const auto& c : p.coeffs) cmax = std::max(cmax, std::abs(c));
    const double radius = 1.0 + cmax;
    const double residual_bound = 1e-10 * (1.0 + cmax);

    // Starting points on a circle, rotated off the real axis so that real
    // coefficient polynomials do not start on a symmetry line.
    std::vector<Complex> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n) + 0.4;
        z[i] = std::polar(radius, angle);
    }

    auto residual = [&] {
        double worst = 0.0;
        for (const auto& r : z) worst = std::max(worst, std::abs(p.eval(r)));
        return worst;
    };

    bool converged = false;
    for (int iter = 0; iter < kMaxIter && !converged; ++iter) {
        converged = true;
        for (std::size_t i = 0; i < n; ++i) {
            Complex den = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) den *= z[i] - z[j];
            if (den == Complex(0.0)) {
                converged = false;
                z[i] += Complex(1e-8 * radius, 1e-8 * radius);
                continue;
            }
            const Complex step = p.eval(z[i]) / den;
            z[i] -= step;
            if (!(std::abs(step) < kStepTol * (1.0 + std::abs(z[i])))) converged = false;
        }
    }

    // Round-off can keep the update just above the relative threshold once
    // the roots are already as accurate as double precision allows.
    const double res = residual();
    if (!converged && !(res <= residual_bound)) {
        throw ConvergenceError("poly_roots: Durand-Kerner did not converge in 200 iterations",
                               std::abs(z.front()), res);
    }
    if (!(res <= residual_bound)) {
        throw ConvergenceError("poly_roots: residual above bound", std::abs(z.front()), res);
    }
    return z;
}

}  // namespace hopflyap::linalg
