#include "monodrome/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace monodrome {

namespace {

std::array<std::array<double, 3>, 3> invert3(const std::array<std::array<double, 3>, 3>& m) {
    double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (det == 0.0) throw std::invalid_argument("degenerate lattice basis");
    std::array<std::array<double, 3>, 3> inv;
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

}  // namespace

TorusGrid TorusGrid::make(const TorusGeometry& geom, std::array<int, 3> n) {
    for (int ni : n) {
        if (ni < 8) throw std::invalid_argument("grid resolution must be at least 8 per axis");
        if (ni % 2 != 0) throw std::invalid_argument("grid resolution must be even");
    }
    TorusGrid g;
    g.geom = geom;
    g.n = n;
    g.basis = geom.basis_matrix();
    g.inv_basis = invert3(g.basis);
    double vol = geom.volume_d();
    g.cell_volume = vol / double(g.size());
    for (int a = 0; a < 3; ++a) {
        double len = std::sqrt(g.basis[0][a] * g.basis[0][a] + g.basis[1][a] * g.basis[1][a] +
                               g.basis[2][a] * g.basis[2][a]);
        g.spacing[a] = len / n[a];
    }
    return g;
}

TorusGrid TorusGrid::aligned(const TorusGeometry& geom, std::array<int, 3> n,
                             const std::vector<std::array<double, 3>>& points) {
    TorusGrid g = make(geom, n);
    for (int a = 0; a < 3; ++a) {
        for (double offset : {0.0, 0.5, 0.25, 0.125}) {
            bool collision = false;
            for (const auto& p : points) {
                double cell = g.theta_of_point(p)[a] * n[a] - offset;
                if (std::abs(cell - std::round(cell)) < 1e-7) collision = true;
            }
            if (!collision) {
                g.offset[a] = offset;
                break;
            }
        }
    }
    return g;
}

std::array<double, 3> TorusGrid::point(int i, int j, int k) const {
    auto th = theta(i, j, k);
    std::array<double, 3> x{};
    for (int r = 0; r < 3; ++r)
        x[r] = basis[r][0] * th[0] + basis[r][1] * th[1] + basis[r][2] * th[2];
    return x;
}

double TorusGrid::max_spacing() const { return std::max({spacing[0], spacing[1], spacing[2]}); }

double TorusGrid::min_period() const {
    double m = spacing[0] * n[0];
    for (int a = 1; a < 3; ++a) m = std::min(m, spacing[a] * n[a]);
    return m;
}

std::array<double, 3> TorusGrid::theta_of_point(const std::array<double, 3>& x) const {
    std::array<double, 3> th{};
    for (int r = 0; r < 3; ++r) {
        th[r] = inv_basis[r][0] * x[0] + inv_basis[r][1] * x[1] + inv_basis[r][2] * x[2];
        th[r] -= std::floor(th[r]);
    }
    return th;
}

std::array<double, 3> TorusGrid::min_image_delta(const std::array<double, 3>& a,
                                                 const std::array<double, 3>& b) const {
    std::array<double, 3> th{};
    for (int r = 0; r < 3; ++r) {
        double c = inv_basis[r][0] * (a[0] - b[0]) + inv_basis[r][1] * (a[1] - b[1]) +
                   inv_basis[r][2] * (a[2] - b[2]);
        th[r] = c - std::round(c);
    }
    // The rounded cell is not always the closest image on a skew lattice;
    // check the neighbouring shells.
    double best = -1.0;
    std::array<double, 3> delta{};
    for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj)
            for (int dk = -1; dk <= 1; ++dk) {
                std::array<double, 3> t{th[0] + di, th[1] + dj, th[2] + dk};
                std::array<double, 3> d{};
                for (int r = 0; r < 3; ++r)
                    d[r] = basis[r][0] * t[0] + basis[r][1] * t[1] + basis[r][2] * t[2];
                double len2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                if (best < 0 || len2 < best) {
                    best = len2;
                    delta = d;
                }
            }
    return delta;
}

double TorusGrid::min_image_distance(const std::array<double, 3>& a,
                                     const std::array<double, 3>& b) const {
    auto d = min_image_delta(a, b);
    return std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
}

int worker_count() {
    int hw = int(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("MONODROME_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

void parallel_for(size_t count, const std::function<void(size_t, size_t)>& body) {
    int workers = worker_count();
    if (workers <= 1 || count < 4096) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    size_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        size_t lo = std::min(count, w * chunk);
        size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& t : pool) t.join();
}

double field_mean(const ScalarField3& f) {
    // Chunked deterministic reduction.
    double total = 0.0;
    for (size_t lo = 0; lo < f.v.size(); lo += 4096) {
        size_t hi = std::min(f.v.size(), lo + 4096);
        double part = 0.0;
        for (size_t i = lo; i < hi; ++i) part += f.v[i];
        total += part;
    }
    return total / double(f.v.size());
}

double field_integral(const ScalarField3& f) {
    return field_mean(f) * f.grid.geom.volume_d();
}

double plane_mean(const ScalarField3& f, int k_slice) {
    const auto& g = f.grid;
    double total = 0.0;
    for (int i = 0; i < g.n[0]; ++i) {
        double row = 0.0;
        for (int j = 0; j < g.n[1]; ++j) row += f.at(i, j, k_slice);
        total += row;
    }
    return total / (double(g.n[0]) * g.n[1]);
}

ScalarField3 fd_theta_derivative(const ScalarField3& f, int axis) {
    const auto& g = f.grid;
    ScalarField3 out(g);
    double scale = g.n[axis] / 2.0;  // 1 / (2 * dtheta)
    parallel_for(g.size(), [&](size_t lo, size_t hi) {
        for (size_t s = lo; s < hi; ++s) {
            int k = int(s % g.n[2]);
            int j = int((s / g.n[2]) % g.n[1]);
            int i = int(s / (size_t(g.n[1]) * g.n[2]));
            int ip[3] = {i, j, k}, im[3] = {i, j, k};
            ip[axis] = (ip[axis] + 1) % g.n[axis];
            im[axis] = (im[axis] - 1 + g.n[axis]) % g.n[axis];
            out.v[s] = (f.at(ip[0], ip[1], ip[2]) - f.at(im[0], im[1], im[2])) * scale;
        }
    });
    return out;
}

std::array<ScalarField3, 3> fd_gradient(const ScalarField3& f) {
    std::array<ScalarField3, 3> dth{fd_theta_derivative(f, 0), fd_theta_derivative(f, 1),
                                    fd_theta_derivative(f, 2)};
    const auto& g = f.grid;
    std::array<ScalarField3, 3> out{ScalarField3(g), ScalarField3(g), ScalarField3(g)};
    parallel_for(g.size(), [&](size_t lo, size_t hi) {
        for (size_t s = lo; s < hi; ++s)
            for (int r = 0; r < 3; ++r)
                out[r].v[s] = g.inv_basis[0][r] * dth[0].v[s] + g.inv_basis[1][r] * dth[1].v[s] +
                              g.inv_basis[2][r] * dth[2].v[s];
    });
    return out;
}

ScalarField3 fd_laplacian(const ScalarField3& f) {
    const auto& g = f.grid;
    // Inverse metric in lattice coordinates: G = B^-1 B^-T.
    double G[3][3];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            G[a][b] = 0.0;
            for (int r = 0; r < 3; ++r) G[a][b] += g.inv_basis[a][r] * g.inv_basis[b][r];
        }
    ScalarField3 out(g);
    parallel_for(g.size(), [&](size_t lo, size_t hi) {
        for (size_t s = lo; s < hi; ++s) {
            int k = int(s % g.n[2]);
            int j = int((s / g.n[2]) % g.n[1]);
            int i = int(s / (size_t(g.n[1]) * g.n[2]));
            int c[3] = {i, j, k};
            double acc = 0.0;
            for (int a = 0; a < 3; ++a) {
                int p[3] = {i, j, k}, m[3] = {i, j, k};
                p[a] = (p[a] + 1) % g.n[a];
                m[a] = (m[a] - 1 + g.n[a]) % g.n[a];
                double second = f.at(p[0], p[1], p[2]) - 2.0 * f.at(c[0], c[1], c[2]) +
                                f.at(m[0], m[1], m[2]);
                acc += G[a][a] * second * g.n[a] * g.n[a];
            }
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) {
                    int pp[3] = {i, j, k}, pm[3] = {i, j, k}, mp[3] = {i, j, k}, mm[3] = {i, j, k};
                    pp[a] = (pp[a] + 1) % g.n[a];
                    pp[b] = (pp[b] + 1) % g.n[b];
                    pm[a] = (pm[a] + 1) % g.n[a];
                    pm[b] = (pm[b] - 1 + g.n[b]) % g.n[b];
                    mp[a] = (mp[a] - 1 + g.n[a]) % g.n[a];
                    mp[b] = (mp[b] + 1) % g.n[b];
                    mm[a] = (mm[a] - 1 + g.n[a]) % g.n[a];
                    mm[b] = (mm[b] - 1 + g.n[b]) % g.n[b];
                    double cross = f.at(pp[0], pp[1], pp[2]) - f.at(pm[0], pm[1], pm[2]) -
                                   f.at(mp[0], mp[1], mp[2]) + f.at(mm[0], mm[1], mm[2]);
                    acc += 2.0 * G[a][b] * cross * (g.n[a] * g.n[b] / 4.0);
                }
            out.v[s] = acc;
        }
    });
    return out;
}

namespace {
std::mutex fftw_mutex;  // FFTW planning is not thread-safe
}

void fft3(const TorusGrid& g, std::vector<std::complex<double>>& data, bool forward) {
    if (data.size() != g.size()) throw std::invalid_argument("fft3: size mismatch");
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        plan = fftw_plan_dft_3d(g.n[0], g.n[1], g.n[2],
                                reinterpret_cast<fftw_complex*>(data.data()),
                                reinterpret_cast<fftw_complex*>(data.data()),
                                forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_destroy_plan(plan);
    }
}

std::array<double, 3> dual_wavevector(const TorusGrid& g, int m0, int m1, int m2) {
    auto wrap = [](int m, int n) { return m <= n / 2 ? m : m - n; };
    double f0 = wrap(m0, g.n[0]), f1 = wrap(m1, g.n[1]), f2 = wrap(m2, g.n[2]);
    std::array<double, 3> xi{};
    for (int r = 0; r < 3; ++r)
        xi[r] = 2.0 * M_PI *
                (g.inv_basis[0][r] * f0 + g.inv_basis[1][r] * f1 + g.inv_basis[2][r] * f2);
    return xi;
}

namespace {

// Integer mode along one axis, with the Nyquist mode flagged.
inline int mode_wrap(int m, int n, bool& nyquist) {
    int f = m <= n / 2 ? m : m - n;
    if (n % 2 == 0 && m == n / 2) nyquist = true;
    return f;
}

template <class SymbolFn>
ScalarField3 spectral_apply(const ScalarField3& f, SymbolFn&& symbol, ScalarField3* imag_out) {
    const auto& g = f.grid;
    std::vector<std::complex<double>> data(f.v.begin(), f.v.end());
    fft3(g, data, true);
    size_t s = 0;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k, ++s) {
                bool nyq = false;
                mode_wrap(i, g.n[0], nyq);
                mode_wrap(j, g.n[1], nyq);
                mode_wrap(k, g.n[2], nyq);
                data[s] *= symbol(i, j, k, nyq);
            }
    fft3(g, data, false);
    ScalarField3 out(g);
    double scale = 1.0 / double(g.size());
    for (size_t t = 0; t < data.size(); ++t) out.v[t] = data[t].real() * scale;
    if (imag_out) {
        *imag_out = ScalarField3(g);
        for (size_t t = 0; t < data.size(); ++t) imag_out->v[t] = data[t].imag() * scale;
    }
    return out;
}

}  // namespace

std::array<ScalarField3, 3> spectral_gradient(const ScalarField3& f) {
    std::array<ScalarField3, 3> out;
    for (int r = 0; r < 3; ++r)
        out[r] = spectral_apply(
            f,
            [&](int i, int j, int k, bool nyq) -> std::complex<double> {
                if (nyq) return 0.0;  // no well-defined odd derivative at Nyquist
                auto xi = dual_wavevector(f.grid, i, j, k);
                return std::complex<double>(0.0, xi[r]);
            },
            nullptr);
    return out;
}

ScalarField3 spectral_laplacian(const ScalarField3& f) {
    return spectral_apply(
        f,
        [&](int i, int j, int k, bool) -> std::complex<double> {
            auto xi = dual_wavevector(f.grid, i, j, k);
            return -(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        },
        nullptr);
}

}  // namespace monodrome
