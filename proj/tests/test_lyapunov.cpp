#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hopflyap/asymptotics.hpp"
#include "hopflyap/errors.hpp"
#include "hopflyap/hopf.hpp"
#include "hopflyap/lyapunov.hpp"

using namespace hopflyap;
using linalg::Complex;

namespace {

const double kA0 = -0.04869322966;

struct Point {
    HopfPoint h;
    DerivativeBundle bundle;
    CMat4 A;
    Complex lambda;
};

Point point(double eps, double k = 0.0) {
    Point p;
    p.h = solve_hopf_mu(eps, mu0_radical(), k);
    p.bundle = derivative_bundle(equilibrium(p.h.mu_h, eps).point, ModelParams::make(p.h.mu_h, eps, k));
    p.A = linalg::to_complex(p.bundle.jacobian);
    p.lambda = {0.0, p.h.omega0};
    return p;
}

}  // namespace

TEST_CASE("eigen data") {
    const auto pt = point(1e-4);
    const auto e = eigen_data(pt.A, pt.lambda);
    const double an = linalg::norm_inf(pt.A);
    CHECK(e.residual_q <= 1e-10 * an * linalg::norm_inf(e.q));
    CHECK(e.residual_p <= 1e-10 * an * linalg::norm_inf(e.p));
    CHECK(std::abs(linalg::inner(e.p, e.q) - 1.0) <= 1e-12);
    CHECK(std::abs(linalg::inner(e.p, linalg::conj(e.q))) <= 1e-9);
    CHECK(std::abs(e.q[2]) <= 1e-12);

    SUBCASE("direction at eps = 0") {
        const auto z = point(0.0);
        const auto q = eigen_data(z.A, z.lambda).q;
        const double m = mu0_radical();
        const Complex want = -10.0 / (3.0 * Complex(m, std::sqrt(7 * m)));
        CHECK(std::abs(q[1] / q[0] - want) <= 1e-8 * std::abs(want));
    }
}

TEST_CASE("first_lyapunov at a small eps") {
    const auto pt = point(1e-4);
    const auto b = first_lyapunov(pt.h);
    CHECK(std::abs(b.a - kA0) <= 10 * 1e-4);
    CHECK(b.ip_C == Complex(0.0));
    CHECK(b.B_qqbar[2] == Complex(0.0));
    CHECK(b.v[2] == Complex(0.0));
    CHECK(b.w[2] == Complex(0.0));
    const Complex sum = b.ip_C - 2.0 * b.ip_Bv + b.ip_Bw;
    CHECK(b.a == doctest::Approx(sum.real() / (2 * b.omega0)).epsilon(1e-14));

    SUBCASE("v against the explicit inverse") {
        const auto p3 = point(1e-3);
        const auto b3 = first_lyapunov(p3.h);
        const auto vi = linalg::matvec(linalg::inverse(p3.A), b3.B_qqbar);
        double err = 0;
        for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(vi[i] - b3.v[i]));
        CHECK(err <= 1e-9 * linalg::norm_inf(b3.v));
    }
    SUBCASE("decoupled and full LU agree away from eps = 0") {
        LyapunovOptions o;
        o.strategy = SolveStrategy::FullLU;
        const auto p3 = point(1e-3);
        CHECK(first_lyapunov(p3.h, o).a == doctest::Approx(first_lyapunov(p3.h).a).epsilon(1e-9));
    }
}

TEST_CASE("eps = 0 limit") {
    const auto z = point(0.0);
    SUBCASE("full LU cannot solve the singular system") {
        LyapunovOptions o;
        o.strategy = SolveStrategy::FullLU;
        CHECK_THROWS_AS(first_lyapunov(z.h, o), SingularMatrixError);
    }
    SUBCASE("the decoupled path gives the closed-form value") {
        const auto b = first_lyapunov(z.h);
        CHECK(std::abs(b.a - kA0) <= 1e-8);
        CHECK(b.reduced_v == 1);
    }
    SUBCASE("v tends to its leading-order value") {
        const double m = mu0_radical();
        const Complex want[4] = {-30 * m / (m - 50), 100 / (m - 50), 0.0, -20 * m / (m - 50)};
        const auto b = first_lyapunov(point(1e-6).h);
        for (int i = 0; i < 4; ++i) {
            if (i == 2) {
                CHECK(b.v[i] == Complex(0.0));
                continue;
            }
            CHECK(std::abs(b.v[i] - want[i]) <= 1e-4 * std::abs(want[i]));
        }
    }
}

TEST_CASE("gauge invariance") {
    const auto pt = point(1e-3, 0.001);
    const auto base = eigen_data(pt.A, pt.lambda);
    const double a = lyapunov_from_eigen(pt.bundle, pt.lambda, base).a;
    const double au = lyapunov_from_eigen(pt.bundle, pt.lambda, base).a_unit_norm;
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> th(0, 2 * std::numbers::pi), mag(0.01, 100);
    for (int n = 0; n < 20; ++n) {
        const Complex rot = std::polar(1.0, th(rng));
        const auto e1 = eigen_data_from_vectors(pt.A, pt.lambda, linalg::scaled(base.q, rot), base.raw_p);
        CHECK(std::abs(lyapunov_from_eigen(pt.bundle, pt.lambda, e1).a - a) <= 1e-10);

        const Complex c = std::polar(mag(rng), th(rng));
        const auto qs = linalg::scaled(base.q, c);
        const auto raw = lyapunov_from_eigen(pt.bundle, pt.lambda, eigen_data_from_vectors(pt.A, pt.lambda, qs, base.raw_p));
        // raw coefficient scales with |c|^2, the unit-norm one does not move
        CHECK(raw.a == doctest::Approx(a * std::norm(c)).epsilon(1e-10));
        CHECK(std::abs(raw.a_unit_norm - au) <= 1e-10);
        const auto back = eigen_data_from_vectors(pt.A, pt.lambda, gauge_right(pt.A, qs), base.raw_p);
        CHECK(std::abs(lyapunov_from_eigen(pt.bundle, pt.lambda, back).a - a) <= 1e-10);
    }
    SUBCASE("conjugate branch") {
        LyapunovOptions o;
        o.conjugate_branch = true;
        CHECK(std::abs(first_lyapunov(pt.h, o).a - first_lyapunov(pt.h).a) <= 1e-10);
    }
}

TEST_CASE("sweep") {
    CHECK(lyapunov_vs_eps({}).empty());

    const auto rows = lyapunov_vs_eps({1e-2, 1e-3, 1e-4});
    REQUIRE(rows.size() == 3);
    std::vector<double> c;
    for (const auto& r : rows) {
        REQUIRE(r.ok());
        c.push_back(std::abs(r.a - kA0) / r.epsilon);
    }
    const double lo = *std::min_element(c.begin(), c.end()), hi = *std::max_element(c.begin(), c.end());
    CHECK(hi / lo <= 3.0);

    SUBCASE("linear extrapolation to eps = 0") {
        const auto r = lyapunov_vs_eps({1e-4, 1e-5});
        CHECK(std::abs(extrapolate_to_zero(r[0].epsilon, r[0].a, r[1].epsilon, r[1].a) - kA0) <= 1e-6);
    }
    SUBCASE("bad rows are recorded, not thrown") {
        const auto r = lyapunov_vs_eps({1e-3, 0.5, -1.0});
        CHECK(r[0].ok());
        CHECK(!r[1].ok());
        CHECK(!r[2].ok());
    }
    CHECK(extrapolate_to_zero(1.0, 3.0, 2.0, 5.0) == doctest::Approx(1.0));
}
