#pragma once

// Four-dimensional fast-slow predator-prey vector field
//
//   x' = -2x + 3w
//   y' = 50y - y^2/2 - delta x y
//   z' = -eps x z + k eps x w z / (eps x w + 1)
//   w' = eps x z - eps x w - 5w + delta x y
//
// with delta = 5 / (3 mu). Everything here is analytic: the equilibrium is the
// closed form, and the Jacobian, Hessians and third-derivative tensor are
// hand-derived.

#include <array>
#include <vector>

namespace hopflyap {

using StateVec = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

struct ModelParams {
    double mu = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    double k = 0.0;

    // Builds a consistent tuple with delta = 5 / (3 mu). Throws DomainError.
    static ModelParams make(double mu, double epsilon, double k = 0.0);

    // Throws DomainError when mu <= 0, epsilon < 0, a value is non-finite, or
    // delta and mu disagree.
    void validate() const;
};

struct EquilibriumPoint {
    StateVec point{};
    double mu = 0.0;
    double epsilon = 0.0;
    double residual = 0.0;  // max-norm of the field at point
};

// One canonical entry of a third-derivative tensor: d^3 F_component /
// dxi_j dxi_k dxi_l with j <= k <= l.
struct ThirdEntry {
    int component = 0;
    int j = 0;
    int k = 0;
    int l = 0;
    double value = 0.0;
};

struct DerivativeBundle {
    Mat4 jacobian{};
    std::array<Mat4, 4> hessians{};
    std::vector<ThirdEntry> third;

    // Full tensor access; symmetric in (j, k, l).
    double third_at(int component, int j, int k, int l) const;
};

StateVec eval_field(const StateVec& s, const ModelParams& p);

// Closed-form equilibrium P0(mu, eps). Requires mu in (0, 50), eps >= 0.
EquilibriumPoint equilibrium(double mu, double epsilon);

// Throws DomainError unless k < 3 / (2 x0(mu, eps)).
void check_k_bound(const ModelParams& p);

Mat4 jacobian(const StateVec& s, const ModelParams& p);

DerivativeBundle derivative_bundle(const StateVec& s, const ModelParams& p);

// Eigenvalue of J(P0) carried by the z direction.
double eta0(double mu, double epsilon, double k);

}  // namespace hopflyap
