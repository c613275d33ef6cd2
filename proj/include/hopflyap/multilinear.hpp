#pragma once

// Symmetric multilinear forms of the vector field at a point:
//   B_i(x, y)    = sum_{j,k}   d2 F_i / dxi_j dxi_k        x_j y_k
//   C_i(x, y, z) = sum_{j,k,l} d3 F_i / dxi_j dxi_k dxi_l  x_j y_k z_l
// Arguments are complex; nothing is conjugated.

#include <functional>

#include "hopflyap/linalg.hpp"
#include "hopflyap/model.hpp"

namespace hopflyap {

using CVec4 = linalg::CVec<4>;
using FieldFn = std::function<StateVec(const StateVec&)>;

CVec4 bilinear_B(const DerivativeBundle& bundle, const CVec4& x, const CVec4& y);

CVec4 trilinear_C(const DerivativeBundle& bundle, const CVec4& x, const CVec4& y,
                  const CVec4& z);

// Finite-difference oracles on the raw field. The step defaults to the
// documented 1e-3 (bilinear) and 5e-3 (trilinear) times (1 + ||base||_inf).
CVec4 fd_bilinear(const FieldFn& field, const StateVec& base, const CVec4& x, const CVec4& y,
                  double step_rel = 1e-3);

CVec4 fd_trilinear(const FieldFn& field, const StateVec& base, const CVec4& x, const CVec4& y,
                   const CVec4& z, double step_rel = 5e-3);

}  // namespace hopflyap
