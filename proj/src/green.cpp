#include "monodrome/green.hpp"

#include <cmath>
#include <stdexcept>

namespace monodrome {

std::vector<PointCharge> charges_from_singular(const TorusGeometry& geom,
                                               const std::vector<SingularPoint>& Z) {
    (void)geom;
    std::vector<PointCharge> out;
    out.reserve(Z.size());
    for (const auto& p : Z) {
        std::complex<double> w = p.w.to_std();
        out.push_back({{to_double(p.t), w.real(), w.imag()}, p.charge});
    }
    return out;
}

ScalarField3 periodic_green_potential(const TorusGrid& grid,
                                      const std::vector<PointCharge>& charges) {
    ScalarField3 chi(grid);
    if (charges.empty()) return chi;

    const double sigma = 2.2 * grid.max_spacing();
    const double rcut = 7.0 * sigma;
    const double inv_sqrt2sigma = 1.0 / (std::sqrt(2.0) * sigma);

    for (const auto& c : charges) {
        auto th = grid.theta_of_point(c.pos);
        bool on_node = true;
        for (int a = 0; a < 3; ++a) {
            double cell = th[a] * grid.n[a] - grid.offset[a];
            on_node = on_node && std::abs(cell - std::round(cell)) < 1e-9;
        }
        if (on_node)
            throw std::invalid_argument(
                "charge coincides with a grid node; build the grid with TorusGrid::aligned");
    }

    // Image shifts needed to cover a ball of radius rcut.
    std::array<int, 3> zmax{};
    for (int a = 0; a < 3; ++a) {
        double row = std::sqrt(grid.inv_basis[a][0] * grid.inv_basis[a][0] +
                               grid.inv_basis[a][1] * grid.inv_basis[a][1] +
                               grid.inv_basis[a][2] * grid.inv_basis[a][2]);
        zmax[a] = int(std::ceil(rcut * row)) + 1;
    }

    // Short-range sum.
    parallel_for(grid.size(), [&](size_t lo, size_t hi) {
        for (size_t s = lo; s < hi; ++s) {
            int k = int(s % grid.n[2]);
            int j = int((s / grid.n[2]) % grid.n[1]);
            int i = int(s / (size_t(grid.n[1]) * grid.n[2]));
            auto x = grid.point(i, j, k);
            double acc = 0.0;
            for (const auto& c : charges) {
                auto base = grid.min_image_delta(x, c.pos);
                for (int z0 = -zmax[0]; z0 <= zmax[0]; ++z0)
                    for (int z1 = -zmax[1]; z1 <= zmax[1]; ++z1)
                        for (int z2 = -zmax[2]; z2 <= zmax[2]; ++z2) {
                            double dx = base[0] + grid.basis[0][0] * z0 + grid.basis[0][1] * z1 +
                                        grid.basis[0][2] * z2;
                            double dy = base[1] + grid.basis[1][0] * z0 + grid.basis[1][1] * z1 +
                                        grid.basis[1][2] * z2;
                            double dz = base[2] + grid.basis[2][0] * z0 + grid.basis[2][1] * z1 +
                                        grid.basis[2][2] * z2;
                            double r2 = dx * dx + dy * dy + dz * dz;
                            if (r2 > rcut * rcut) continue;
                            double r = std::sqrt(r2);
                            acc += c.k * std::erfc(r * inv_sqrt2sigma) / (2.0 * r);
                        }
            }
            chi.v[s] = acc;
        }
    });

    // Long-range part: screened charges synthesized through the exact dual
    // symbol. Coefficients are analytic, so only one backward transform runs.
    std::vector<std::complex<double>> modes(grid.size(), 0.0);
    std::vector<std::array<double, 3>> theta_p;
    for (const auto& c : charges) theta_p.push_back(grid.theta_of_point(c.pos));

    size_t s = 0;
    for (int i = 0; i < grid.n[0]; ++i)
        for (int j = 0; j < grid.n[1]; ++j)
            for (int k = 0; k < grid.n[2]; ++k, ++s) {
                if (i == 0 && j == 0 && k == 0) continue;  // zero-mean normalization
                // Drop Nyquist planes: they have no conjugate partner.
                if ((grid.n[0] % 2 == 0 && i == grid.n[0] / 2) ||
                    (grid.n[1] % 2 == 0 && j == grid.n[1] / 2) ||
                    (grid.n[2] % 2 == 0 && k == grid.n[2] / 2))
                    continue;
                auto xi = dual_wavevector(grid, i, j, k);
                double xi2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                int mi = i <= grid.n[0] / 2 ? i : i - grid.n[0];
                int mj = j <= grid.n[1] / 2 ? j : j - grid.n[1];
                int mk = k <= grid.n[2] / 2 ? k : k - grid.n[2];
                std::complex<double> rho_hat = 0.0;
                for (size_t c = 0; c < charges.size(); ++c) {
                    double ph = -2.0 * M_PI *
                                (mi * theta_p[c][0] + mj * theta_p[c][1] + mk * theta_p[c][2]);
                    rho_hat += double(charges[c].k) * std::polar(1.0, ph);
                }
                rho_hat *= std::exp(-0.5 * sigma * sigma * xi2) / grid.geom.volume_d();
                double off = 2.0 * M_PI *
                             (mi * grid.offset[0] / grid.n[0] + mj * grid.offset[1] / grid.n[1] +
                              mk * grid.offset[2] / grid.n[2]);
                modes[s] = (2.0 * M_PI / xi2) * rho_hat * std::polar(1.0, off);
            }
    fft3(grid, modes, false);
    for (size_t t = 0; t < chi.v.size(); ++t) chi.v[t] += modes[t].real();

    double mean = field_mean(chi);
    for (double& x : chi.v) x -= mean;
    return chi;
}

}  // namespace monodrome
