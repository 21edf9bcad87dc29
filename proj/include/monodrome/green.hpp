#pragma once

#include "monodrome/grid.hpp"

namespace monodrome {

struct PointCharge {
    std::array<double, 3> pos;  // any lift, Cartesian (t, x2, x3)
    int k = 0;
};

std::vector<PointCharge> charges_from_singular(const TorusGeometry& geom,
                                               const std::vector<SingularPoint>& Z);

/// Periodic potential of the point charges with a uniform compensating
/// background: flat-Laplacian chi = -2 pi (sum k delta - sum k / vol),
/// normalized to zero mean. Gaussian-split evaluation: an analytic erfc
/// near-field plus a spectrally synthesized screened remainder, so chi
/// carries the exact k/(2r) singular behaviour at each charge.
ScalarField3 periodic_green_potential(const TorusGrid& grid,
                                      const std::vector<PointCharge>& charges);

}  // namespace monodrome
