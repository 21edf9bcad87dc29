#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "monodrome/geometry.hpp"

namespace monodrome {

/// Uniform grid in lattice coordinates theta in [0,1)^3, mapped to the torus
/// by y = theta_1 e_1 + theta_2 e_2 + theta_3 e_3. Planes of constant
/// theta_3 are constant-s slices: s = frak_t * theta_3. An optional half-cell
/// offset keeps grid nodes off the singular points.
struct TorusGrid {
    TorusGeometry geom;
    std::array<int, 3> n{8, 8, 8};
    std::array<double, 3> offset{0.0, 0.0, 0.0};  // fraction of one cell, in [0,1)

    std::array<std::array<double, 3>, 3> basis;   // columns: generators in (t,x2,x3)
    std::array<std::array<double, 3>, 3> inv_basis;
    double cell_volume = 0.0;
    std::array<double, 3> spacing{};              // metric length of one cell along each axis

    static TorusGrid make(const TorusGeometry& geom, std::array<int, 3> n);
    /// Chooses half-cell offsets so that no grid node coincides with a
    /// singular point.
    static TorusGrid aligned(const TorusGeometry& geom, std::array<int, 3> n,
                             const std::vector<std::array<double, 3>>& points);

    size_t size() const { return size_t(n[0]) * n[1] * n[2]; }
    size_t idx(int i, int j, int k) const { return (size_t(i) * n[1] + j) * n[2] + k; }

    std::array<double, 3> theta(int i, int j, int k) const {
        return {(i + offset[0]) / n[0], (j + offset[1]) / n[1], (k + offset[2]) / n[2]};
    }
    std::array<double, 3> point(int i, int j, int k) const;  // (t, x2, x3)

    double max_spacing() const;
    double min_period() const;

    /// Metric distance on the quotient between Cartesian positions a and b.
    double min_image_distance(const std::array<double, 3>& a,
                              const std::array<double, 3>& b) const;
    /// Cartesian displacement a - b reduced to the nearest image.
    std::array<double, 3> min_image_delta(const std::array<double, 3>& a,
                                          const std::array<double, 3>& b) const;

    std::array<double, 3> theta_of_point(const std::array<double, 3>& x) const;
};

struct ScalarField3 {
    TorusGrid grid;
    std::vector<double> v;

    ScalarField3() = default;
    explicit ScalarField3(const TorusGrid& g) : grid(g), v(g.size(), 0.0) {}

    double& at(int i, int j, int k) { return v[grid.idx(i, j, k)]; }
    double at(int i, int j, int k) const { return v[grid.idx(i, j, k)]; }
};

struct ComplexField3 {
    TorusGrid grid;
    std::vector<std::complex<double>> v;

    ComplexField3() = default;
    explicit ComplexField3(const TorusGrid& g) : grid(g), v(g.size(), 0.0) {}

    std::complex<double>& at(int i, int j, int k) { return v[grid.idx(i, j, k)]; }
    std::complex<double> at(int i, int j, int k) const { return v[grid.idx(i, j, k)]; }
};

/// Effective worker count: hardware concurrency capped by MONODROME_THREADS.
int worker_count();

/// Splits [0, count) into contiguous chunks; deterministic regardless of the
/// worker count.
void parallel_for(size_t count, const std::function<void(size_t, size_t)>& body);

double field_mean(const ScalarField3& f);
double field_integral(const ScalarField3& f);  // mean * vol

/// Mean over the (i, j) sub-grid of the plane k = k_slice.
double plane_mean(const ScalarField3& f, int k_slice);

/// Second-order centered derivative along a lattice axis, as d/d theta_axis.
ScalarField3 fd_theta_derivative(const ScalarField3& f, int axis);

/// Cartesian gradient (d/dt, d/dx2, d/dx3) by centered differences.
std::array<ScalarField3, 3> fd_gradient(const ScalarField3& f);

/// Flat Laplacian via the exact inverse metric in lattice coordinates.
ScalarField3 fd_laplacian(const ScalarField3& f);

/// In-place 3D FFT (unnormalized); backward is its unscaled adjoint.
void fft3(const TorusGrid& g, std::vector<std::complex<double>>& data, bool forward);

/// Dual vector 2 pi B^-T m for integer mode m (fftfreq convention).
std::array<double, 3> dual_wavevector(const TorusGrid& g, int m0, int m1, int m2);

/// Cartesian gradient computed spectrally (exact on band-limited data).
std::array<ScalarField3, 3> spectral_gradient(const ScalarField3& f);

/// Flat Laplacian applied spectrally through the dual-metric symbol.
ScalarField3 spectral_laplacian(const ScalarField3& f);

}  // namespace monodrome
