#include "hopflyap/oracles.hpp"

#include <cmath>
#include <limits>

namespace hopflyap::oracles {

namespace {

const double kEps = std::numeric_limits<double>::epsilon();

StateVec shifted(StateVec s, int j, double h) {
    s[j] += h;
    return s;
}

}  // namespace

Mat4 fd_jacobian(const StateVec& s, const ModelParams& p) {
    Mat4 j{};
    for (int c = 0; c < 4; ++c) {
        const double h = std::cbrt(kEps) * (1.0 + std::abs(s[c]));
        const StateVec fp = eval_field(shifted(s, c, h), p);
        const StateVec fm = eval_field(shifted(s, c, -h), p);
        for (int r = 0; r < 4; ++r) j[r][c] = (fp[r] - fm[r]) / (2.0 * h);
    }
    return j;
}

std::array<Mat4, 4> fd_hessians(const StateVec& s, const ModelParams& p) {
    std::array<Mat4, 4> hs{};
    for (int l = 0; l < 4; ++l) {
        const double h = std::cbrt(kEps) * (1.0 + std::abs(s[l]));
        const Mat4 jp = jacobian(shifted(s, l, h), p);
        const Mat4 jm = jacobian(shifted(s, l, -h), p);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) hs[i][j][l] = (jp[i][j] - jm[i][j]) / (2.0 * h);
    }
    return hs;
}

std::array<Tensor3, 4> fd_third(const StateVec& s, const ModelParams& p) {
    std::array<Tensor3, 4> t{};
    for (int l = 0; l < 4; ++l) {
        const double h = std::pow(kEps, 0.25) * (1.0 + std::abs(s[l]));
        const auto hp = derivative_bundle(shifted(s, l, h), p).hessians;
        const auto hm = derivative_bundle(shifted(s, l, -h), p).hessians;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k) t[i][j][k][l] = (hp[i][j][k] - hm[i][j][k]) / (2.0 * h);
    }
    return t;
}

std::array<Tensor3, 4> dense_third(const DerivativeBundle& b) {
    std::array<Tensor3, 4> t{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) t[i][j][k][l] = b.third_at(i, j, k, l);
    return t;
}

}  // namespace hopflyap::oracles
