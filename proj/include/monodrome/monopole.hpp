#pragma once

#include <optional>

#include "monodrome/dictionary.hpp"
#include "monodrome/green.hpp"

namespace monodrome {

struct NearFieldFit {
    int k = 0;
    double fit = 0.0;       // coefficient of 1/r; Dirac behaviour gives k/2
    double residual = 0.0;  // rms misfit over the sampling shell
};

/// Sampled rank-1 solution of the twisted Bogomolny system together with the
/// quadrature outputs.
struct MonopoleSolution {
    ScalarField3 chi;        // real potential, phi = sqrt(-1) chi
    ScalarField3 chi_t;      // d chi / dt
    ScalarField3 F_wwbar;    // curvature on (d_w, d_wbar); real for rank one
    ComplexField3 F_tw, F_twbar;
    ScalarField3 G;          // Tr G(h)

    double c = 0.0;          // coefficient of the (1,1) harmonic part of B
    bool c_derived = false;  // true when c came from slice-flux quantization
    std::complex<double> rho0{0.0, 0.0};
    long long base_degree = 0;

    double slice_flux = 0.0;  // flux of grad chi through the reference slice
    int slice_index = 0;
    double deg_an = 0.0;
    double bogomolny_residual = 0.0;  // max |fd-Laplacian chi - background| off the core
    std::vector<NearFieldFit> near_field;
    size_t masked_cells = 0;
    double mask_radius = 0.0;
};

struct AssembleOptions {
    std::optional<double> c;   // (1,1) harmonic coefficient; derived when absent
    long long base_degree = 0; // slice degree used for flux quantization
    int mask_cells = 3;
};

/// Solves flat-Laplacian f = 4 (G0 - target) spectrally, so that scaling the
/// metric by e^f moves G from G0 to the constant target. Returns f and the
/// max-norm residual of the re-applied discrete operator. Throws when the
/// mean of G0 - target violates the solvability constraint.
std::pair<ScalarField3, double> poisson_normalize(const TorusGrid& grid,
                                                  const ScalarField3& g0, double target);

/// Builds the abelian solution for the given Dirac charges and twist: the
/// periodic potential, the curvature of the B-twisted relation, Tr G(h), the
/// analytic degree by masked quadrature plus the near-field cap, and the
/// fitted Dirac coefficients.
MonopoleSolution assemble_and_degree(const TorusGrid& grid,
                                     const std::vector<SingularPoint>& charges,
                                     const TwistForm& rho, const AssembleOptions& opt);

/// Applies the gauge change (A, f) to connection, Higgs field and B, and
/// returns the largest change of the twisted Bogomolny residual.
double gauge_shift_check(const MonopoleSolution& sol, const std::array<ScalarField3, 3>& A,
                         const ScalarField3& f);

/// Shifts the holomorphy operator by -nu and compares the recomputed Tr G
/// against the predicted shift -(2 Re d_w nu_wbar + Re(d_t nu_t) / 2).
double nu_shift_check(const MonopoleSolution& sol, const ComplexField3& nu_t,
                      const ComplexField3& nu_wbar);

}  // namespace monodrome
