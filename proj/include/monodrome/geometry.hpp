#pragma once

#include <array>
#include <complex>
#include <vector>

#include "monodrome/rational.hpp"

namespace monodrome {

/// Generators of the lattice Γ ⊂ ℝ_t × ℂ_w. Each generator is a pair
/// (a, α): translation by a in the t direction and by α in the w plane.
struct LatticeGenerator {
    Rational a;
    RatComplex alpha;
};

struct LatticeBasis {
    std::array<LatticeGenerator, 3> e;

    static LatticeBasis from_doubles(const std::array<std::array<double, 3>, 3>& rows);
};

/// Derived constants of the quotient torus: the slope gamma of the flat
/// s-coordinate s = t + 2 Re(gamma w), the s-period frak_t of the third
/// generator, the translation frak_a on the elliptic curve T = C/Gamma0,
/// and the curve lattice Gamma0 = <alpha1, alpha2>.
struct TorusGeometry {
    LatticeBasis basis;
    RatComplex gamma;
    Rational frak_t;
    RatComplex frak_a;
    RatComplex gamma0_1, gamma0_2;    // generators of Gamma0
    RatComplex red_1, red_2;          // Gauss-reduced generators (canonical forms)
    Rational area;                    // area of T = Im(conj(alpha1) alpha2) > 0
    Rational volume;                  // vol(M) = frak_t * area

    std::complex<double> gamma_d() const { return gamma.to_std(); }
    double frak_t_d() const { return to_double(frak_t); }
    std::complex<double> frak_a_d() const { return frak_a.to_std(); }
    double area_d() const { return to_double(area); }
    double volume_d() const { return to_double(volume); }

    /// 3x3 matrix whose columns are the generators in (t, x2, x3) coordinates.
    std::array<std::array<double, 3>, 3> basis_matrix() const;
};

struct SingularPoint {
    Rational t;
    RatComplex w;
    int charge = 0;

    static SingularPoint from_doubles(double t, std::complex<double> w, int charge) {
        return {rational_from_double(t), RatComplex::from_std(w), charge};
    }
};

/// Weights of one puncture P in D: the sorted s-coordinates of the lifts in
/// [0, frak_t) over P and their normalized values tau = s / frak_t.
struct PunctureWeightTable {
    RatComplex point;                 // canonical representative of P in the reduced cell
    std::vector<Rational> s_values;   // strictly increasing in [0, frak_t)
    std::vector<Rational> tau_values; // s / frak_t, strictly increasing in [0, 1)
};

/// Weight table together with the Dirac charge carried by each s-hit.
struct PunctureHits {
    PunctureWeightTable table;
    std::vector<int> charges;
};

/// Validates the basis invariants and computes the derived constants.
/// Throws std::invalid_argument naming the violated invariant.
TorusGeometry derive_geometry(const LatticeBasis& basis);

/// (t, w) -> (s, u) with s = t + 2 Re(gamma w), u = w.
std::pair<Rational, RatComplex> to_su_coordinates(const TorusGeometry& g, const Rational& t,
                                                  const RatComplex& w);
std::pair<double, std::complex<double>> to_su_coordinates(const TorusGeometry& g, double t,
                                                          std::complex<double> w);

/// Canonical representative of u modulo Gamma0 (Gauss-reduced cell, half-open).
RatComplex reduce_mod_gamma0(const TorusGeometry& g, const RatComplex& u);

/// Reduce s into [0, frak_t).
Rational reduce_mod_t(const TorusGeometry& g, const Rational& s);

/// Canonical (s, u) with s in [0, frak_t) and u in the reduced cell.
std::pair<Rational, RatComplex> canonicalize(const TorusGeometry& g, const SingularPoint& p);

/// Distance of u from Gamma0 measured after lattice reduction; used for the
/// 1e-9 puncture-identification tolerance.
double distance_to_gamma0(const TorusGeometry& g, const RatComplex& u);

/// Projects the singular set to puncture data (D, tau). Distinct orbits that
/// land within the collision tolerance are reported as an error.
std::vector<PunctureHits> project_singular_hits(const TorusGeometry& g,
                                                const std::vector<SingularPoint>& Z);
std::vector<PunctureWeightTable> project_singular_set(const TorusGeometry& g,
                                                      const std::vector<SingularPoint>& Z);

inline constexpr double kOrbitTolerance = 1e-9;

}  // namespace monodrome
