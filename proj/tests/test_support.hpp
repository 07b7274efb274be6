#pragma once

#include "uenc/qstate.hpp"
#include "uenc/rng.hpp"

namespace uenc::testing {

inline Mat random_ginibre(long dim, RngStream& rng) {
    Mat g(dim, dim);
    for (long i = 0; i < dim; ++i)
        for (long j = 0; j < dim; ++j) g(i, j) = cx(rng.normal(), rng.normal());
    return g;
}

inline DensityMatrix random_density(RegisterLayout lay, RngStream& rng) {
    Mat g = random_ginibre(lay.dim(), rng);
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(std::move(lay), std::move(rho));
}

inline PureState random_pure(RegisterLayout lay, RngStream& rng) {
    Vec v(lay.dim());
    for (long i = 0; i < lay.dim(); ++i) v(i) = cx(rng.normal(), rng.normal());
    v /= v.norm();
    return PureState(std::move(lay), std::move(v));
}

}  // namespace uenc::testing
