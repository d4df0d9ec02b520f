#pragma once

#include <complex>

#include "qres/operator.hpp"

namespace qres::testing {

inline double max_abs(const Matrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// P M P for a 0/1 mask.
inline Matrix restrict_to(const Matrix& m, const RealVector& mask)
{
    const auto p = mask.cast<cplx>().asDiagonal();
    return p * m * p;
}

}  // namespace qres::testing
