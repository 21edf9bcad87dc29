#include "monodrome/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace monodrome {

LatticeBasis LatticeBasis::from_doubles(const std::array<std::array<double, 3>, 3>& rows) {
    LatticeBasis b;
    for (int i = 0; i < 3; ++i) {
        b.e[i].a = rational_from_double(rows[i][0]);
        b.e[i].alpha = RatComplex::from_double(rows[i][1], rows[i][2]);
    }
    return b;
}

std::array<std::array<double, 3>, 3> TorusGeometry::basis_matrix() const {
    std::array<std::array<double, 3>, 3> m{};
    for (int i = 0; i < 3; ++i) {
        m[0][i] = to_double(basis.e[i].a);
        m[1][i] = to_double(basis.e[i].alpha.re);
        m[2][i] = to_double(basis.e[i].alpha.im);
    }
    return m;
}

namespace {

Rational basis_det(const LatticeBasis& b) {
    // det of rows (a_i, Re alpha_i, Im alpha_i)
    std::array<std::array<Rational, 3>, 3> m;
    for (int i = 0; i < 3; ++i) {
        m[i][0] = b.e[i].a;
        m[i][1] = b.e[i].alpha.re;
        m[i][2] = b.e[i].alpha.im;
    }
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Rational im_conj_product(const RatComplex& a, const RatComplex& b) {
    // Im(conj(a) * b)
    return a.re * b.im - a.im * b.re;
}

// Lagrange/Gauss reduction of the pair (r1, r2), preserving the lattice.
void gauss_reduce(RatComplex& r1, RatComplex& r2) {
    for (int guard = 0; guard < 1024; ++guard) {
        if (r2.norm2() < r1.norm2()) std::swap(r1, r2);
        Rational mu = Rational(re_of_product(r2, r1.conj())) / r1.norm2();
        BigInt m = rational_round(mu);
        if (m == 0) return;
        r2 -= Rational(m) * r1;
    }
    throw std::runtime_error("lattice reduction failed to terminate");
}

}  // namespace

TorusGeometry derive_geometry(const LatticeBasis& basis) {
    const auto& a1 = basis.e[0].alpha;
    const auto& a2 = basis.e[1].alpha;
    Rational im12 = im_conj_product(a1, a2);
    if (im12 == 0)
        throw std::invalid_argument(
            "invalid lattice basis: alpha1, alpha2 are R-linearly dependent (Im(conj(a1) a2) = 0)");
    if (im12 < 0)
        throw std::invalid_argument(
            "invalid lattice basis: (alpha1, alpha2) is not an oriented base of C (Im(conj(a1) a2) < 0)");
    if (basis_det(basis) <= 0)
        throw std::invalid_argument(
            "invalid lattice basis: generators are not an oriented base of R x C (det <= 0)");

    TorusGeometry g;
    g.basis = basis;
    // gamma = -(a1 conj(alpha2) - a2 conj(alpha1)) / (alpha1 conj(alpha2) - alpha2 conj(alpha1))
    RatComplex num = RatComplex(basis.e[0].a) * a2.conj() - RatComplex(basis.e[1].a) * a1.conj();
    RatComplex den = a1 * a2.conj() - a2 * a1.conj();
    g.gamma = -(num / den);
    g.frak_a = basis.e[2].alpha;
    g.frak_t = basis.e[2].a + 2 * re_of_product(g.gamma, g.frak_a);
    if (g.frak_t <= 0)
        throw std::invalid_argument("derived frak_t <= 0; basis orientation data inconsistent");
    g.gamma0_1 = a1;
    g.gamma0_2 = a2;
    g.red_1 = a1;
    g.red_2 = a2;
    gauss_reduce(g.red_1, g.red_2);
    g.area = im12;
    g.volume = g.frak_t * g.area;
    return g;
}

std::pair<Rational, RatComplex> to_su_coordinates(const TorusGeometry& g, const Rational& t,
                                                  const RatComplex& w) {
    return {t + 2 * re_of_product(g.gamma, w), w};
}

std::pair<double, std::complex<double>> to_su_coordinates(const TorusGeometry& g, double t,
                                                          std::complex<double> w) {
    std::complex<double> ga = g.gamma_d();
    return {t + 2.0 * (ga * w).real(), w};
}

RatComplex reduce_mod_gamma0(const TorusGeometry& g, const RatComplex& u) {
    // Coordinates of u in the reduced basis, solved exactly.
    const RatComplex& r1 = g.red_1;
    const RatComplex& r2 = g.red_2;
    Rational det = r1.re * r2.im - r1.im * r2.re;
    Rational c1 = (u.re * r2.im - u.im * r2.re) / det;
    Rational c2 = (r1.re * u.im - r1.im * u.re) / det;
    return frac_part(c1) * r1 + frac_part(c2) * r2;
}

Rational reduce_mod_t(const TorusGeometry& g, const Rational& s) {
    return s - g.frak_t * Rational(rational_floor(s / g.frak_t));
}

std::pair<Rational, RatComplex> canonicalize(const TorusGeometry& g, const SingularPoint& p) {
    auto [s, u] = to_su_coordinates(g, p.t, p.w);
    // Remove the e3 component first so the residual u-translation lies in Gamma0.
    Rational n3 = Rational(rational_floor(s / g.frak_t));
    s -= g.frak_t * n3;
    u -= n3 * g.frak_a;
    return {s, reduce_mod_gamma0(g, u)};
}

double distance_to_gamma0(const TorusGeometry& g, const RatComplex& u) {
    RatComplex r = reduce_mod_gamma0(g, u);
    // r lies in the half-open reduced cell; the nearest lattice point is one
    // of the four cell corners.
    std::complex<double> rd = r.to_std();
    std::complex<double> v1 = g.red_1.to_std(), v2 = g.red_2.to_std();
    double best = std::abs(rd);
    for (int i = 0; i <= 1; ++i)
        for (int j = 0; j <= 1; ++j)
            best = std::min(best, std::abs(rd - double(i) * v1 - double(j) * v2));
    return best;
}

std::vector<PunctureHits> project_singular_hits(const TorusGeometry& g,
                                                const std::vector<SingularPoint>& Z) {
    if (Z.empty()) throw std::invalid_argument("singular set is empty");

    struct Hit {
        Rational s;
        RatComplex u;
        int charge;
    };
    std::vector<Hit> hits;
    hits.reserve(Z.size());
    for (const auto& p : Z) {
        auto [s, u] = canonicalize(g, p);
        hits.push_back({std::move(s), std::move(u), p.charge});
    }

    // Group hits into punctures: same puncture iff the u-difference reduces
    // into Gamma0 within the tolerance.
    std::vector<PunctureHits> groups;
    for (const auto& h : hits) {
        PunctureHits* home = nullptr;
        for (auto& grp : groups) {
            double d = distance_to_gamma0(g, h.u - grp.table.point);
            if (d < kOrbitTolerance) {
                if (h.u != grp.table.point && d > 0)
                    throw std::invalid_argument(
                        "distinct singular orbits collide within tolerance near a puncture");
                home = &grp;
                break;
            }
        }
        if (!home) {
            groups.push_back({});
            groups.back().table.point = h.u;
            home = &groups.back();
        }
        // Insert s keeping the list sorted; equal s at one puncture means an
        // orbit collision in the s direction.
        auto& sv = home->table.s_values;
        auto& cv = home->charges;
        size_t pos = 0;
        while (pos < sv.size() && sv[pos] < h.s) ++pos;
        if (pos < sv.size() && sv[pos] == h.s)
            throw std::invalid_argument("two singular points share one (s, u) orbit");
        if ((pos < sv.size() && std::abs(to_double(sv[pos] - h.s)) < kOrbitTolerance) ||
            (pos > 0 && std::abs(to_double(sv[pos - 1] - h.s)) < kOrbitTolerance))
            throw std::invalid_argument(
                "distinct singular orbits collide within tolerance along the s circle");
        sv.insert(sv.begin() + pos, h.s);
        cv.insert(cv.begin() + pos, h.charge);
    }

    for (auto& grp : groups) {
        grp.table.tau_values.clear();
        for (const auto& s : grp.table.s_values) grp.table.tau_values.push_back(s / g.frak_t);
    }
    // Deterministic ordering of punctures by canonical coordinates.
    std::sort(groups.begin(), groups.end(), [](const PunctureHits& a, const PunctureHits& b) {
        if (a.table.point.re != b.table.point.re) return a.table.point.re < b.table.point.re;
        return a.table.point.im < b.table.point.im;
    });
    return groups;
}

std::vector<PunctureWeightTable> project_singular_set(const TorusGeometry& g,
                                                      const std::vector<SingularPoint>& Z) {
    std::vector<PunctureWeightTable> out;
    for (auto& grp : project_singular_hits(g, Z)) out.push_back(std::move(grp.table));
    return out;
}

}  // namespace monodrome
