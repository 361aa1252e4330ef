#pragma once

#include <array>
#include <vector>

#include "gfd/geometry.hpp"

namespace gfd {

// Monomial test-function set (x - x_i)^alpha, |alpha| <= degree, in
// graded-lexicographic order: degree blocks ascending, x-power descending
// inside a block. The constant monomial comes first.
struct MonomialBasis {
    int degree = 0;
    std::vector<std::array<int, 2>> exponents;

    static MonomialBasis full_2d(int degree);
    static MonomialBasis line_1d(int degree); // exponents (k, 0) only

    int size() const { return static_cast<int>(exponents.size()); }

    // Scaled evaluation ((d/h)^alpha); keeps the normal matrix conditioned
    // independently of the smoothing length.
    double eval_scaled(int m, Vec2 d, double h) const {
        return mpow({d.x / h, d.y / h}, exponents[m][0], exponents[m][1]);
    }
    double eval(int m, Vec2 d) const { return mpow(d, exponents[m][0], exponents[m][1]); }
    int order_of(int m) const { return exponents[m][0] + exponents[m][1]; }
};

} // namespace gfd
