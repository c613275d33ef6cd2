#include "hopflyap/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hopflyap/errors.hpp"

namespace hopflyap {

namespace {

void require_finite(const StateVec& s) {
    for (double v : s) {
        if (!std::isfinite(v)) {
            throw DomainError("state has a non-finite component");
        }
    }
}

double max_norm(const StateVec& s) {
    double m = 0.0;
    for (double v : s) m = std::max(m, std::abs(v));
    return m;
}

// Saturating term g(u) = u / (eps u + 1) of the z equation and its
// derivatives in u = x w.
struct Saturation {
    double g, g1, g2, g3;
};

Saturation saturation(double u, double eps) {
    const double s = eps * u + 1.0;
    return {u / s, 1.0 / (s * s), -2.0 * eps / (s * s * s),
            6.0 * eps * eps / (s * s * s * s)};
}

}  // namespace

ModelParams ModelParams::make(double mu, double epsilon, double k) {
    ModelParams p{mu, 5.0 / (3.0 * mu), epsilon, k};
    p.validate();
    return p;
}

void ModelParams::validate() const {
    if (!std::isfinite(mu) || !std::isfinite(delta) || !std::isfinite(epsilon) ||
        !std::isfinite(k)) {
        throw DomainError("model parameters must be finite");
    }
    if (mu <= 0.0) throw DomainError("mu must be positive");
    if (epsilon < 0.0) throw DomainError("epsilon must be nonnegative");
    if (std::abs(delta - 5.0 / (3.0 * mu)) > 1e-14 * delta) {
        throw DomainError("delta is inconsistent with mu (delta = 5/(3 mu))");
    }
}

StateVec eval_field(const StateVec& s, const ModelParams& p) {
    require_finite(s);
    p.validate();
    const auto [x, y, z, w] = s;
    const double eps = p.epsilon;
    const double sat = saturation(x * w, eps).g;
    return {
        -2.0 * x + 3.0 * w,
        50.0 * y - 0.5 * y * y - p.delta * x * y,
        -eps * x * z + p.k * eps * sat * z,
        eps * x * z - eps * x * w - 5.0 * w + p.delta * x * y,
    };
}

EquilibriumPoint equilibrium(double mu, double epsilon) {
    if (!(mu > 0.0 && mu < 50.0)) {
        throw DomainError("equilibrium requires mu in (0, 50), got " + std::to_string(mu));
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw DomainError("equilibrium requires epsilon >= 0");
    }
    const double den = 25.0 + 3.0 * epsilon * mu * mu;
    EquilibriumPoint eq;
    eq.mu = mu;
    eq.epsilon = epsilon;
    eq.point = {
        15.0 * mu * (50.0 - mu) / den,
        50.0 * mu * (6.0 * epsilon * mu + 1.0) / den,
        0.0,
        10.0 * mu * (50.0 - mu) / den,
    };
    eq.residual = max_norm(eval_field(eq.point, ModelParams::make(mu, epsilon)));
    return eq;
}

void check_k_bound(const ModelParams& p) {
    const double x0 = equilibrium(p.mu, p.epsilon).point[0];
    if (!(p.k < 1.5 / x0)) {
        throw DomainError("k must satisfy k < 3/(2 x0) = " + std::to_string(1.5 / x0));
    }
}

Mat4 jacobian(const StateVec& s, const ModelParams& p) {
    require_finite(s);
    p.validate();
    const auto [x, y, z, w] = s;
    const double eps = p.epsilon;
    const double d = p.delta;
    const double ke = p.k * eps;
    const Saturation sat = saturation(x * w, eps);

    Mat4 j{};
    j[0] = {-2.0, 0.0, 0.0, 3.0};
    j[1] = {-d * y, 50.0 - y - d * x, 0.0, 0.0};
    j[2] = {z * (-eps + ke * w * sat.g1), 0.0, -eps * x + ke * sat.g, z * ke * x * sat.g1};
    j[3] = {d * y + eps * z - eps * w, d * x, eps * x, -5.0 - eps * x};
    return j;
}

double DerivativeBundle::third_at(int component, int j, int k, int l) const {
    std::array<int, 3> idx{j, k, l};
    std::sort(idx.begin(), idx.end());
    for (const auto& e : third) {
        if (e.component == component && e.j == idx[0] && e.k == idx[1] && e.l == idx[2]) {
            return e.value;
        }
    }
    return 0.0;
}

DerivativeBundle derivative_bundle(const StateVec& s, const ModelParams& p) {
    DerivativeBundle b;
    b.jacobian = jacobian(s, p);

    const auto [x, y, z, w] = s;
    (void)y;
    const double eps = p.epsilon;
    const double d = p.delta;
    const double ke = p.k * eps;
    const double u = x * w;
    const Saturation sat = saturation(u, eps);

    // F1 is linear.
    Mat4& h2 = b.hessians[1];
    h2[0][1] = h2[1][0] = -d;
    h2[1][1] = -1.0;

    // Indices 0..3 stand for (x, y, z, w).
    Mat4& h3 = b.hessians[2];
    h3[0][0] = ke * z * w * w * sat.g2;
    h3[0][2] = h3[2][0] = -eps + ke * w * sat.g1;
    h3[0][3] = h3[3][0] = ke * z * (sat.g1 + u * sat.g2);
    h3[2][3] = h3[3][2] = ke * x * sat.g1;
    h3[3][3] = ke * z * x * x * sat.g2;

    Mat4& h4 = b.hessians[3];
    h4[0][1] = h4[1][0] = d;
    h4[0][2] = h4[2][0] = eps;
    h4[0][3] = h4[3][0] = -eps;

    // Only F3 has third derivatives. Entries with a repeated z index vanish.
    const double t000 = ke * z * w * w * w * sat.g3;
    const double t002 = ke * w * w * sat.g2;
    const double t003 = ke * z * (2.0 * w * sat.g2 + u * w * sat.g3);
    const double t023 = ke * (sat.g1 + u * sat.g2);
    const double t033 = ke * z * x * (2.0 * sat.g2 + u * sat.g3);
    const double t233 = ke * x * x * sat.g2;
    const double t333 = ke * z * x * x * x * sat.g3;
    const std::array<ThirdEntry, 7> entries{{
        {2, 0, 0, 0, t000},
        {2, 0, 0, 2, t002},
        {2, 0, 0, 3, t003},
        {2, 0, 2, 3, t023},
        {2, 0, 3, 3, t033},
        {2, 2, 3, 3, t233},
        {2, 3, 3, 3, t333},
    }};
    for (const auto& e : entries) {
        if (e.value != 0.0) b.third.push_back(e);
    }
    return b;
}

double eta0(double mu, double epsilon, double k) {
    const ModelParams p = ModelParams::make(mu, epsilon, k);
    check_k_bound(p);
    const StateVec P0 = equilibrium(mu, epsilon).point;
    const double x0 = P0[0];
    const double w0 = P0[3];
    const double exw = epsilon * x0 * w0;
    return -epsilon * x0 + k * exw / (exw + 1.0);
}

}  // namespace hopflyap
