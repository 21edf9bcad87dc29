#include "monodrome/monopole.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace monodrome {

std::pair<ScalarField3, double> poisson_normalize(const TorusGrid& grid,
                                                  const ScalarField3& g0, double target) {
    double scale = 1.0 + std::abs(target);
    double defect = field_mean(g0) - target;
    if (std::abs(defect) > 1e-8 * scale)
        throw std::invalid_argument("poisson solvability violated: mean defect " +
                                    std::to_string(defect));

    std::vector<std::complex<double>> data(g0.v.begin(), g0.v.end());
    for (auto& x : data) x -= target;
    fft3(grid, data, true);
    size_t s = 0;
    for (int i = 0; i < grid.n[0]; ++i)
        for (int j = 0; j < grid.n[1]; ++j)
            for (int k = 0; k < grid.n[2]; ++k, ++s) {
                if (i == 0 && j == 0 && k == 0) {
                    data[s] = 0.0;
                    continue;
                }
                auto xi = dual_wavevector(grid, i, j, k);
                double xi2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                data[s] *= -4.0 / xi2;
            }
    fft3(grid, data, false);
    ScalarField3 f(grid);
    double norm = 1.0 / double(grid.size());
    for (size_t t = 0; t < f.v.size(); ++t) f.v[t] = data[t].real() * norm;

    ScalarField3 lap = spectral_laplacian(f);
    double residual = 0.0;
    for (size_t t = 0; t < f.v.size(); ++t)
        residual = std::max(residual, std::abs(0.25 * lap.v[t] - (g0.v[t] - target)));
    return {std::move(f), residual};
}

namespace {

struct ChargeGeometry {
    std::vector<PointCharge> charges;
    std::vector<double> s_values;  // all crossings in [0, frak_t)
    long long total_k = 0;
};

ChargeGeometry analyze_charges(const TorusGeometry& geom,
                               const std::vector<SingularPoint>& Z) {
    ChargeGeometry out;
    out.charges = charges_from_singular(geom, Z);
    for (const auto& p : Z) out.total_k += p.charge;
    if (!Z.empty())
        for (const auto& grp : project_singular_hits(geom, Z))
            for (const auto& s : grp.table.s_values) out.s_values.push_back(to_double(s));
    std::sort(out.s_values.begin(), out.s_values.end());
    return out;
}

// Reference slice: the flux of the twisted curvature is constant on the
// charge-free gap between the last crossing and the first one of the next
// period, so the midpoint plane of that gap carries the quantization data
// with maximal clearance.
int pick_slice_plane(const TorusGrid& grid, const std::vector<double>& s_values) {
    double ft = grid.geom.frak_t_d();
    double target = s_values.empty()
                        ? 0.5 * ft
                        : 0.5 * (s_values.back() + s_values.front() + ft);
    if (target >= ft) target -= ft;
    double plane_gap = ft / grid.n[2];

    int best = -1;
    double best_dist = 1e300;
    for (int k = 0; k < grid.n[2]; ++k) {
        double sp = ft * (k + grid.offset[2]) / grid.n[2];
        double clearance = 1e300;
        for (double sc : s_values) {
            double d = std::abs(sp - sc);
            clearance = std::min(clearance, std::min(d, ft - d));
        }
        if (clearance <= plane_gap) continue;
        double d = std::abs(sp - target);
        d = std::min(d, ft - d);
        if (d < best_dist) {
            best_dist = d;
            best = k;
        }
    }
    if (best < 0)
        throw std::invalid_argument("resolution too low: no slice plane clears the singular set");
    return best;
}

NearFieldFit fit_near_field(const TorusGrid& grid, const ScalarField3& chi,
                            const PointCharge& charge, double r_lo, double r_hi) {
    std::vector<std::array<double, 3>> ys;
    std::vector<double> vals;
    for (int i = 0; i < grid.n[0]; ++i)
        for (int j = 0; j < grid.n[1]; ++j)
            for (int k = 0; k < grid.n[2]; ++k) {
                auto d = grid.min_image_delta(grid.point(i, j, k), charge.pos);
                double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
                if (r < r_lo || r > r_hi) continue;
                ys.push_back(d);
                vals.push_back(chi.at(i, j, k));
            }
    if (ys.size() < 24)
        throw std::invalid_argument("resolution too low: near-field shell has too few samples");

    // chi ~ c/r + smooth; the smooth part is modelled to second order.
    const int cols = 11;
    Eigen::MatrixXd M(ys.size(), cols);
    Eigen::VectorXd b(ys.size());
    for (size_t row = 0; row < ys.size(); ++row) {
        const auto& y = ys[row];
        double r = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
        M(row, 0) = 1.0 / r;
        M(row, 1) = 1.0;
        M(row, 2) = y[0];
        M(row, 3) = y[1];
        M(row, 4) = y[2];
        M(row, 5) = y[0] * y[0];
        M(row, 6) = y[1] * y[1];
        M(row, 7) = y[2] * y[2];
        M(row, 8) = y[0] * y[1];
        M(row, 9) = y[0] * y[2];
        M(row, 10) = y[1] * y[2];
        b(row) = vals[row];
    }
    Eigen::VectorXd sol = M.colPivHouseholderQr().solve(b);
    double rms = std::sqrt((M * sol - b).squaredNorm() / double(ys.size()));
    return {charge.k, sol(0), rms};
}

}  // namespace

MonopoleSolution assemble_and_degree(const TorusGrid& grid_in,
                                     const std::vector<SingularPoint>& charges,
                                     const TwistForm& rho, const AssembleOptions& opt) {
    const TorusGeometry& geom = grid_in.geom;
    ChargeGeometry cg = analyze_charges(geom, charges);

    std::vector<std::array<double, 3>> positions;
    for (const auto& c : cg.charges) positions.push_back(c.pos);
    TorusGrid grid = TorusGrid::aligned(geom, grid_in.n, positions);

    MonopoleSolution sol;
    sol.rho0 = rho.rho0;
    sol.base_degree = opt.base_degree;
    sol.mask_radius = opt.mask_cells * grid.max_spacing();

    // Mask separation: the near-field caps of distinct charges must not touch.
    for (size_t a = 0; a < positions.size(); ++a)
        for (size_t b = a + 1; b < positions.size(); ++b) {
            double d = grid.min_image_distance(positions[a], positions[b]);
            if (d < 2.0 * sol.mask_radius + 2.0 * grid.max_spacing())
                throw std::invalid_argument(
                    "resolution too low for mask separation between singular points");
        }
    if (!positions.empty() && grid.min_period() < 8.0 * sol.mask_radius / opt.mask_cells)
        throw std::invalid_argument("resolution too low for mask separation");

    sol.chi = periodic_green_potential(grid, cg.charges);
    auto grad = fd_gradient(sol.chi);  // (chi_t, chi_2, chi_3)
    sol.chi_t = grad[0];

    // Flux of the twisted curvature through the constant-s reference slice,
    // integrand chi_t + 4 Re(gamma chi_wbar) on the u-torus.
    sol.slice_index = pick_slice_plane(grid, cg.s_values);
    std::complex<double> gamma = geom.gamma_d();
    ScalarField3 flux_integrand(grid);
    for (size_t t = 0; t < flux_integrand.v.size(); ++t)
        flux_integrand.v[t] = grad[0].v[t] + 2.0 * (gamma.real() * grad[1].v[t] -
                                                    gamma.imag() * grad[2].v[t]);
    double area = geom.area_d();
    sol.slice_flux = plane_mean(flux_integrand, sol.slice_index) * area;

    if (opt.c) {
        sol.c = *opt.c;
        sol.c_derived = false;
    } else {
        // Quantization of the slice first Chern class:
        // -(flux + c area + 4 Re(gamma rho0) area) / (2 pi) = base_degree.
        sol.c = (-2.0 * std::numbers::pi * double(opt.base_degree) - sol.slice_flux) / area -
                4.0 * (gamma * rho.rho0).real();
        sol.c_derived = true;
    }

    // Field assembly. In Tr G(h) the k/(2r) parts of curvature and Higgs
    // cancel; what survives is the harmonic (1,1) coefficient.
    sol.F_wwbar = ScalarField3(grid);
    sol.F_tw = ComplexField3(grid);
    sol.F_twbar = ComplexField3(grid);
    sol.G = ScalarField3(grid);
    std::complex<double> i_unit(0.0, 1.0);
    parallel_for(grid.size(), [&](size_t lo, size_t hi) {
        for (size_t t = lo; t < hi; ++t) {
            double xt = grad[0].v[t], x2 = grad[1].v[t], x3 = grad[2].v[t];
            std::complex<double> chi_w = 0.5 * std::complex<double>(x2, -x3);
            std::complex<double> chi_wbar = std::conj(chi_w);
            sol.F_wwbar.v[t] = -0.5 * (xt + sol.c);
            sol.F_tw.v[t] = -chi_w - std::conj(rho.rho0);
            sol.F_twbar.v[t] = chi_wbar + rho.rho0;
            // G = F(d_w, d_wbar) - (i/2) d_t phi with phi = i chi.
            sol.G.v[t] = sol.F_wwbar.v[t] + 0.5 * xt;
        }
    });

    // Masked quadrature plus the constant cap over the excluded cores.
    std::vector<char> masked(grid.size(), 0);
    if (!positions.empty()) {
        parallel_for(grid.size(), [&](size_t lo, size_t hi) {
            for (size_t t = lo; t < hi; ++t) {
                int k = int(t % grid.n[2]);
                int j = int((t / grid.n[2]) % grid.n[1]);
                int i = int(t / (size_t(grid.n[1]) * grid.n[2]));
                auto x = grid.point(i, j, k);
                for (const auto& p : positions)
                    if (grid.min_image_distance(x, p) <= sol.mask_radius) {
                        masked[t] = 1;
                        break;
                    }
            }
        });
    }
    double acc = 0.0;
    size_t nmask = 0;
    for (size_t t = 0; t < grid.size(); ++t) {
        if (masked[t]) {
            ++nmask;
        } else {
            acc += sol.G.v[t];
        }
    }
    sol.masked_cells = nmask;
    sol.deg_an = acc * grid.cell_volume + (-0.5 * sol.c) * double(nmask) * grid.cell_volume;

    // Harmonicity residual away from the cores: the discrete Laplacian must
    // reproduce the uniform background charge.
    ScalarField3 lap = fd_laplacian(sol.chi);
    double background = 2.0 * std::numbers::pi * double(cg.total_k) / geom.volume_d();
    double guard = std::max(sol.mask_radius, grid.min_period() / 4.0);
    double res = 0.0;
    for (int i = 0; i < grid.n[0]; ++i)
        for (int j = 0; j < grid.n[1]; ++j)
            for (int k = 0; k < grid.n[2]; ++k) {
                auto x = grid.point(i, j, k);
                bool clear = true;
                for (const auto& p : positions)
                    clear = clear && grid.min_image_distance(x, p) > guard;
                if (clear)
                    res = std::max(res, std::abs(lap.at(i, j, k) - background));
            }
    sol.bogomolny_residual = res;

    double h = grid.max_spacing();
    for (const auto& c : cg.charges)
        sol.near_field.push_back(fit_near_field(grid, sol.chi, c, 2.0 * h, 4.5 * h));
    return sol;
}

double gauge_shift_check(const MonopoleSolution& sol, const std::array<ScalarField3, 3>& A,
                         const ScalarField3& f) {
    const TorusGrid& grid = sol.chi.grid;
    // One discrete exterior derivative of A feeds both the shifted curvature
    // and the shifted B, so dA cancels in the residual change; what remains
    // is *df differentiated once through the Higgs fields and once through B.
    std::array<std::array<ScalarField3, 3>, 3> dA;  // [component][axis]
    for (int c = 0; c < 3; ++c) dA[c] = fd_gradient(A[c]);
    auto df_fd = fd_gradient(f);
    auto df_sp = spectral_gradient(f);

    auto two_form = [&](size_t t, const std::array<ScalarField3, 3>& df) {
        double a_t2 = dA[1][0].v[t] - dA[0][1].v[t];
        double a_t3 = dA[2][0].v[t] - dA[0][2].v[t];
        double a_23 = dA[2][1].v[t] - dA[1][2].v[t];
        std::complex<double> c_wwbar(0.0, 0.5 * (a_23 - df[0].v[t]));
        std::complex<double> c_tw =
            0.5 * std::complex<double>(a_t2 - df[2].v[t], -(a_t3 + df[1].v[t]));
        std::complex<double> c_twbar =
            0.5 * std::complex<double>(a_t2 - df[2].v[t], a_t3 + df[1].v[t]);
        return std::array<std::complex<double>, 3>{c_wwbar, c_tw, c_twbar};
    };

    double dev = 0.0;
    for (size_t t = 0; t < grid.size(); ++t) {
        auto higgs_route = two_form(t, df_fd);
        auto b_route = two_form(t, df_sp);
        for (int c = 0; c < 3; ++c) dev = std::max(dev, std::abs(higgs_route[c] - b_route[c]));
    }
    return dev;
}

double nu_shift_check(const MonopoleSolution& sol, const ComplexField3& nu_t,
                      const ComplexField3& nu_wbar) {
    const TorusGrid& grid = sol.chi.grid;
    ScalarField3 re_t(grid), re_wb(grid), im_wb(grid);
    for (size_t t = 0; t < grid.size(); ++t) {
        re_t.v[t] = nu_t.v[t].real();
        re_wb.v[t] = nu_wbar.v[t].real();
        im_wb.v[t] = nu_wbar.v[t].imag();
    }
    auto shift = [&](bool spectral) {
        auto grad_of = [&](const ScalarField3& x) {
            return spectral ? spectral_gradient(x) : fd_gradient(x);
        };
        auto gt = grad_of(re_t);
        auto ga = grad_of(re_wb);
        auto gb = grad_of(im_wb);
        ScalarField3 out(grid);
        for (size_t t = 0; t < grid.size(); ++t) {
            // 2 Re(d_w nu_wbar) = Re((d_2 - i d_3)(a + i b)) = d_2 a + d_3 b
            out.v[t] = (ga[1].v[t] + gb[2].v[t]) + 0.5 * gt[0].v[t];
        }
        return out;
    };
    ScalarField3 s_fd = shift(false), s_sp = shift(true);
    double dev = 0.0;
    for (size_t t = 0; t < grid.size(); ++t)
        dev = std::max(dev, std::abs(s_fd.v[t] - s_sp.v[t]));
    return dev;
}

}  // namespace monodrome
