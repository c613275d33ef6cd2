#pragma once

// Finite-difference oracles for the analytic derivative objects. Each level
// differences the level below it: the Jacobian against the field, the
// Hessians against the analytic Jacobian, the third derivatives against the
// analytic Hessians.

#include <array>

#include "hopflyap/model.hpp"

namespace hopflyap::oracles {

using Tensor3 = std::array<std::array<std::array<double, 4>, 4>, 4>;

// Central differences of eval_field, h = cbrt(eps_mach) (1 + |s_j|).
Mat4 fd_jacobian(const StateVec& s, const ModelParams& p);

// Central differences of jacobian(), same step.
std::array<Mat4, 4> fd_hessians(const StateVec& s, const ModelParams& p);

// Central differences of the analytic Hessians, h = eps_mach^(1/4) (1 + |s_l|).
std::array<Tensor3, 4> fd_third(const StateVec& s, const ModelParams& p);

// Dense third tensor reconstructed from a bundle's sparse entries.
std::array<Tensor3, 4> dense_third(const DerivativeBundle& b);

}  // namespace hopflyap::oracles
