#include "gfd/basis.hpp"

#include "gfd/errors.hpp"

namespace gfd {

MonomialBasis MonomialBasis::full_2d(int degree) {
    if (degree < 0) throw parameter_error("MonomialBasis: negative degree");
    MonomialBasis b;
    b.degree = degree;
    for (int d = 0; d <= degree; ++d)
        for (int ax = d; ax >= 0; --ax) b.exponents.push_back({ax, d - ax});
    return b;
}

MonomialBasis MonomialBasis::line_1d(int degree) {
    if (degree < 0) throw parameter_error("MonomialBasis: negative degree");
    MonomialBasis b;
    b.degree = degree;
    for (int d = 0; d <= degree; ++d) b.exponents.push_back({d, 0});
    return b;
}

} // namespace gfd
