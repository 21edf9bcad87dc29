#pragma once

#include "monodrome/difference_module.hpp"
#include "monodrome/geometry.hpp"

namespace monodrome {

/// Constant twist class rho = rho0 dt d(conj w).
struct TwistForm {
    std::complex<double> rho0{0.0, 0.0};
    std::complex<double> integral_rho0{0.0, 0.0};  // rho0 * vol(M)

    TwistForm() = default;
    TwistForm(std::complex<double> r, double volume) : rho0(r), integral_rho0(r * volume) {}
};

/// Additive shift picked up by the w-bar operator under scattering from the
/// slice t = b1 to t = b2: the integral of rho0 over [b1, b2].
std::complex<double> scattering_twist(const TwistForm& rho, double b1, double b2);

/// Rank-one torus-side data: Dirac charges on the quotient, the constant
/// twist, and the degree of the bundle restricted to the initial slice.
struct RankOneMiniData {
    TorusGeometry geometry;
    std::vector<SingularPoint> singularities;
    TwistForm rho;
    long long base_degree = 0;
};

/// Builds the parabolic difference module of the rank-one dictionary: weights
/// from the projected singular set, a step [z^k] per charge-k crossing, and,
/// when the charges do not sum to zero, one closing step [z^-K] of weight 0
/// on the first puncture so the chain telescopes.
ParabolicDifferenceModule upsilon_rank_one(const RankOneMiniData& data);

/// Coefficients of the invariant vector field attached to c1: the d_t part
/// carries the analytic degree, the d_w parts the twist integral.
struct KSDegreeVector {
    double c_t = 0.0;
    std::complex<double> c_w{0.0, 0.0};
    std::complex<double> c_wbar{0.0, 0.0};
};

KSDegreeVector ks_degree(double deg_an, int rank, const TwistForm& rho);

/// Predicted analytic slope of the torus-side object:
/// mu_an = frak_t * pi * mu(V) + 2 vol Re(gamma rho0).
double degree_comparison(const ParabolicDifferenceModule& v, const TorusGeometry& geom,
                         const TwistForm& rho);

}  // namespace monodrome
