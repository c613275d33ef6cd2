#include <doctest.h>

#include <cmath>
#include <random>

#include "hopflyap/asymptotics.hpp"
#include "hopflyap/errors.hpp"
#include "hopflyap/hopf.hpp"
#include "hopflyap/model.hpp"
#include "hopflyap/oracles.hpp"

using namespace hopflyap;

namespace {

double max_abs(const StateVec& v) {
    double m = 0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

TEST_CASE("params keep delta tied to mu") {
    const auto p = ModelParams::make(7.5, 0.01, 0.001);
    CHECK(std::abs(p.delta - 5.0 / (3.0 * 7.5)) <= 1e-14 * p.delta);
    CHECK_THROWS_AS(ModelParams::make(-1.0, 0.0), DomainError);
    CHECK_THROWS_AS(ModelParams::make(1.0, -1e-3), DomainError);
    ModelParams bad = p;
    bad.delta *= 1.001;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("field at trivial points") {
    const auto p = ModelParams::make(12.0, 0.05, 0.002);
    CHECK(eval_field({0, 0, 0, 0}, p) == StateVec{0, 0, 0, 0});
    CHECK(eval_field({1, 0, 0, 0}, p) == StateVec{-2, 0, 0, 0});
    CHECK_THROWS_AS(eval_field({NAN, 0, 0, 0}, p), DomainError);
}

TEST_CASE("equilibrium closed form") {
    SUBCASE("mu = 25, eps = 0 is (375, 50, 0, 250)") {
        const auto e = equilibrium(25.0, 0.0);
        CHECK(e.point[0] == doctest::Approx(375.0).epsilon(1e-14));
        CHECK(e.point[1] == doctest::Approx(50.0).epsilon(1e-14));
        CHECK(e.point[2] == 0.0);
        CHECK(e.point[3] == doctest::Approx(250.0).epsilon(1e-14));
        CHECK(e.residual <= 1e-12 * (1 + max_abs(e.point)));
    }
    SUBCASE("residual small at (25, 0.01)") {
        const auto e = equilibrium(25.0, 0.01);
        const double r = max_abs(eval_field(e.point, ModelParams::make(25.0, 0.01)));
        CHECK(r <= 1e-12 * (1 + max_abs(e.point)));
    }
    SUBCASE("x0 at eps = 0 is 3/5 mu (50 - mu)") {
        for (double mu : {0.5, 5.0, 17.0, 49.0})
            CHECK(equilibrium(mu, 0.0).point[0] == doctest::Approx(0.6 * mu * (50 - mu)).epsilon(1e-14));
    }
    SUBCASE("domain") {
        CHECK_THROWS_AS(equilibrium(0.0, 0.0), DomainError);
        CHECK_THROWS_AS(equilibrium(50.0, 0.0), DomainError);
        CHECK_THROWS_AS(equilibrium(60.0, 0.0), DomainError);
    }
}

TEST_CASE("equilibrium residual and w0 = 2/3 x0 over the parameter box") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mu(1e-3, 50.0 - 1e-3), eps(0.0, 0.1);
    for (int i = 0; i < 200; ++i) {
        const double m = mu(rng), e = eps(rng);
        const auto eq = equilibrium(m, e);
        const double r = max_abs(eval_field(eq.point, ModelParams::make(m, e)));
        CHECK(r <= 1e-12 * (1 + max_abs(eq.point)));
        CHECK(eq.point[2] == 0.0);
        CHECK(std::abs(eq.point[3] - 2.0 / 3.0 * eq.point[0]) <= 1e-14 * eq.point[3]);
    }
}

TEST_CASE("k bound") {
    const auto eq = equilibrium(10.0, 0.01);
    CHECK_NOTHROW(check_k_bound(ModelParams::make(10.0, 0.01, 1.4 / eq.point[0])));
    CHECK_THROWS_AS(check_k_bound(ModelParams::make(10.0, 0.01, 1.6 / eq.point[0])), DomainError);
}

TEST_CASE("jacobian at the equilibrium") {
    const double mu = 8.0;
    const auto J0 = jacobian(equilibrium(mu, 0.0).point, ModelParams::make(mu, 0.0));
    CHECK(J0[0][0] == -2.0);
    CHECK(J0[0][3] == 3.0);
    CHECK(J0[1][0] == doctest::Approx(-10.0 / 3.0).epsilon(1e-14));
    CHECK(J0[3][0] == doctest::Approx(10.0 / 3.0).epsilon(1e-14));

    // entries with eps > 0 against closed forms of d1, d2, eta0
    const double eps = 0.02, k = 0.001;
    const auto eq = equilibrium(mu, eps);
    const auto J = jacobian(eq.point, ModelParams::make(mu, eps, k));
    const double den = 25 + 3 * eps * mu * mu;
    const double d1 = 10 * (mu - 50) / den * mu, d2 = 3 * (mu - 50) / den * mu * mu;
    const double x0 = eq.point[0];
    CHECK(J[1][0] == doctest::Approx(-10.0 / 3.0 + eps * d1).epsilon(1e-12));
    CHECK(J[1][1] == doctest::Approx(-mu + eps * d2).epsilon(1e-12));
    CHECK(J[3][1] == doctest::Approx(50 - mu + eps * d2).epsilon(1e-12));
    CHECK(J[3][2] == doctest::Approx(eps * x0).epsilon(1e-12));
    CHECK(J[3][3] == doctest::Approx(-5 - eps * x0).epsilon(1e-12));
    CHECK(J[2][2] == doctest::Approx(eta0(mu, eps, k)).epsilon(1e-12));
    for (int j : {0, 1, 3}) CHECK(J[2][j] == 0.0);
}

TEST_CASE("derivatives against finite differences on random states") {
    // errors are measured against the largest entry of the same component:
    // the saturating term has entries ~1e-9 of that scale, below any FD noise floor
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> c(0.0, 500.0), mu(1.0, 49.0), k(0.0, 0.01);
    std::uniform_real_distribution<double> le(std::log(1e-4), std::log(1e-2));
    double wj = 0, wh = 0;
    for (int n = 0; n < 100; ++n) {
        const StateVec s{c(rng), c(rng), c(rng), c(rng)};
        const auto p = ModelParams::make(mu(rng), std::exp(le(rng)), k(rng));
        const auto b = derivative_bundle(s, p);
        const auto fj = oracles::fd_jacobian(s, p);
        const auto fh = oracles::fd_hessians(s, p);
        for (int i = 0; i < 4; ++i) {
            double dj = 0, sj = 0, dh = 0, sh = 0;
            for (int j = 0; j < 4; ++j) {
                dj = std::max(dj, std::abs(fj[i][j] - b.jacobian[i][j]));
                sj = std::max(sj, std::abs(b.jacobian[i][j]));
                for (int l = 0; l < 4; ++l) {
                    dh = std::max(dh, std::abs(fh[i][j][l] - b.hessians[i][j][l]));
                    sh = std::max(sh, std::abs(b.hessians[i][j][l]));
                }
            }
            wj = std::max(wj, dj / sj);
            if (sh > 0) wh = std::max(wh, dh / sh);
            else CHECK(dh <= 1e-6);
        }
    }
    CHECK(wj <= 1e-6);
    CHECK(wh <= 1e-5);
}

TEST_CASE("hessian patterns") {
    const double mu = 6.0, eps = 0.01;
    const auto p = ModelParams::make(mu, eps, 0.002);
    const auto eq = equilibrium(mu, eps);
    const auto b = derivative_bundle(eq.point, p);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(b.hessians[0][i][j] == 0.0);
            for (int c = 0; c < 4; ++c) CHECK(b.hessians[c][i][j] == b.hessians[c][j][i]);
        }
    const auto& h2 = b.hessians[1];
    CHECK(h2[0][1] == -p.delta);
    CHECK(h2[1][1] == -1.0);
    int nonzero = 0;
    for (auto& r : h2)
        for (double v : r) nonzero += v != 0.0;
    CHECK(nonzero == 3);
    CHECK(b.hessians[3][0][1] == p.delta);

    const auto b0 = derivative_bundle(equilibrium(mu, 0.0).point, ModelParams::make(mu, 0.0, 0.002));
    for (auto& r : b0.hessians[2])
        for (double v : r) CHECK(v == 0.0);
}

TEST_CASE("third derivatives") {
    const double mu = asymptotics::mu_series().mu0, k = 0.003;
    SUBCASE("only F3, fully symmetric") {
        const auto b = derivative_bundle({40, 10, 3, 25}, ModelParams::make(mu, 0.01, k));
        CHECK(!b.third.empty());
        for (const auto& e : b.third) CHECK(e.component == 2);
        const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (int a = 0; a < 4; ++a)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    const int idx[3] = {a, c, d};
                    const double ref = b.third_at(2, a, c, d);
                    for (auto& pr : perm) CHECK(b.third_at(2, idx[pr[0]], idx[pr[1]], idx[pr[2]]) == ref);
                }
    }
    SUBCASE("d3 F3 / dx dz dw = k eps + O(eps^2) at P0") {
        for (double eps : {1e-6, 1e-7}) {
            const auto eq = equilibrium(mu, eps);
            const auto b = derivative_bundle(eq.point, ModelParams::make(mu, eps, k));
            const double u = eps * eq.point[0] * eq.point[3];  // O(eps) correction is -4u
            CHECK(std::abs(b.third_at(2, 0, 2, 3) / (k * eps) - 1) <= 5 * u);
        }
    }
    SUBCASE("against differences of the hessians") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> c(0.0, 500.0);
        double worst = 0;
        for (int n = 0; n < 50; ++n) {
            const StateVec s{c(rng), c(rng), c(rng), c(rng)};
            const auto p = ModelParams::make(mu, 1e-3, k);
            const auto t = oracles::dense_third(derivative_bundle(s, p));
            const auto f = oracles::fd_third(s, p);
            for (int i = 0; i < 4; ++i)
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        for (int d = 0; d < 4; ++d)
                            if (t[i][a][b][d] != 0.0)
                                worst = std::max(worst, std::abs(f[i][a][b][d] / t[i][a][b][d] - 1));
        }
        CHECK(worst <= 1e-4);
    }
}

TEST_CASE("eta0") {
    const double mu0 = asymptotics::mu_series().mu0;
    CHECK(eta0(mu0, 0.0, 0.004) == 0.0);

    const double xT = 0.6 * mu0 * (50 - mu0);
    const double e = 1e-4;
    CHECK(eta0(mu0, e, 0.0) / e == doctest::Approx(-xT).epsilon(1e-3));

    // Richardson on eta0/eps at two small eps
    const double k = 0.002;
    const double aT = (-1 + 2.0 / 3.0 * k * xT) * xT;
    const double h = 1e-9;
    const double r = 2 * eta0(mu0, h, k) / h - eta0(mu0, 2 * h, k) / (2 * h);
    CHECK(std::abs(r / aT - 1) <= 1e-6);

    CHECK(eta0(20.0, 0.01, 0.0) < 0.0);
}
