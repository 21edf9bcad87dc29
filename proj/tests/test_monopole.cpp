#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "monodrome/monopole.hpp"

using namespace monodrome;

namespace {

TorusGeometry cubic() {
    return derive_geometry(LatticeBasis::from_doubles({{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}}));
}

TorusGeometry skew() {
    return derive_geometry(LatticeBasis::from_doubles({{{1, 1, 0}, {0, 0, 1}, {1, 0, 0}}}));
}

std::vector<SingularPoint> unit_pair() {
    return {SingularPoint::from_doubles(0.25, {0.0, 0.0}, 1),
            SingularPoint::from_doubles(0.75, {0.0, 0.0}, -1)};
}

// Band-limited random field from a handful of low Fourier modes.
ScalarField3 smooth_field(const TorusGrid& g, int maxmode, double amp, int salt) {
    std::mt19937_64 gen(0xfeed + salt);
    std::uniform_real_distribution<double> u(-amp, amp);
    struct Mode {
        int m[3];
        double a, b;
    };
    std::vector<Mode> modes;
    for (int m0 = -maxmode; m0 <= maxmode; ++m0)
        for (int m1 = -maxmode; m1 <= maxmode; ++m1)
            for (int m2 = 0; m2 <= maxmode; ++m2) {
                if (m0 == 0 && m1 == 0 && m2 == 0) continue;
                modes.push_back({{m0, m1, m2}, u(gen), u(gen)});
            }
    ScalarField3 f(g);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                auto th = g.theta(i, j, k);
                double acc = 0.0;
                for (const auto& m : modes) {
                    double ph = 2.0 * std::numbers::pi *
                                (m.m[0] * th[0] + m.m[1] * th[1] + m.m[2] * th[2]);
                    acc += m.a * std::cos(ph) + m.b * std::sin(ph);
                }
                f.at(i, j, k) = acc;
            }
    return f;
}

}  // namespace

TEST_CASE("poisson normalization of an exact input is zero") {
    TorusGrid g = TorusGrid::make(cubic(), {16, 16, 16});
    ScalarField3 g0(g);
    for (double& v : g0.v) v = 0.7;
    auto [f, residual] = poisson_normalize(g, g0, 0.7);
    for (double v : f.v) CHECK(std::abs(v) < 1e-14);
    CHECK(residual < 1e-14);
}

TEST_CASE("poisson normalization inverts a single mode") {
    TorusGrid g = TorusGrid::make(cubic(), {32, 32, 32});
    ScalarField3 g0(g);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
            for (int k = 0; k < 32; ++k)
                g0.at(i, j, k) = 0.7 + std::cos(2.0 * std::numbers::pi * g.point(i, j, k)[0]);
    auto [f, residual] = poisson_normalize(g, g0, 0.7);
    CHECK(residual < 1e-10);
    // flat-Laplacian f = 4 cos(2 pi x1) has the single-mode solution
    // f = -cos(2 pi x1) / pi^2.
    double pi2 = std::numbers::pi * std::numbers::pi;
    for (int k = 0; k < 32; ++k) {
        double x1 = g.point(0, 0, k)[0];
        CHECK(f.at(0, 0, k) ==
              doctest::Approx(-std::cos(2.0 * std::numbers::pi * x1) / pi2).epsilon(1e-9));
    }
}

TEST_CASE("poisson residual stays below 1e-10 on band-limited inputs") {
    TorusGrid g = TorusGrid::make(skew(), {32, 32, 32});
    ScalarField3 g0 = smooth_field(g, 3, 1.0, 1);
    double target = field_mean(g0);
    auto [f, residual] = poisson_normalize(g, g0, target);
    CHECK(residual < 1e-10);
}

TEST_CASE("poisson solvability gate rejects mean defects") {
    TorusGrid g = TorusGrid::make(cubic(), {16, 16, 16});
    ScalarField3 g0(g);
    for (double& v : g0.v) v = 0.8;  // mean defect 0.1 against the target
    CHECK_THROWS_WITH_AS(poisson_normalize(g, g0, 0.7), doctest::Contains("mean defect"),
                         std::invalid_argument);
}

TEST_CASE("assembly of the empty configuration is exactly flat") {
    TorusGrid g = TorusGrid::make(cubic(), {16, 16, 16});
    AssembleOptions opt;
    opt.c = 0.0;
    MonopoleSolution sol = assemble_and_degree(g, {}, TwistForm(0.0, 1.0), opt);
    CHECK(sol.deg_an == 0.0);
    CHECK(sol.bogomolny_residual < 1e-12);
    for (double v : sol.G.v) CHECK(std::abs(v) < 1e-14);
    CHECK(sol.near_field.empty());
}

TEST_CASE("unit pair reproduces the dictionary degree") {
    TorusGeometry geom = cubic();
    TorusGrid g = TorusGrid::make(geom, {32, 32, 32});
    TwistForm rho(0.0, geom.volume_d());
    AssembleOptions opt;  // c derived by flux quantization, base degree 0
    MonopoleSolution sol = assemble_and_degree(g, unit_pair(), rho, opt);

    ParabolicDifferenceModule mod = upsilon_rank_one({geom, unit_pair(), rho, 0});
    double predicted = degree_comparison(mod, geom, rho);
    CHECK(predicted == doctest::Approx(std::numbers::pi / 2.0));
    CHECK(std::abs(sol.deg_an - predicted) / predicted < 1e-6);
    CHECK(sol.c_derived);
    // Flux quantization pinned c at -pi / area.
    CHECK(sol.c == doctest::Approx(-std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("bogomolny residual vanishes under refinement") {
    TorusGeometry geom = cubic();
    TwistForm rho(0.0, geom.volume_d());
    auto residual = [&](int n) {
        TorusGrid g = TorusGrid::make(geom, {n, n, n});
        AssembleOptions opt;
        return assemble_and_degree(g, unit_pair(), rho, opt).bogomolny_residual;
    };
    // Max-norm over a fixed region; the nearest-to-boundary sample jitters,
    // so the observed ratio sits between first and second order.
    double r16 = residual(16), r32 = residual(32), r64 = residual(64);
    CHECK(r16 / r32 >= 2.2);
    CHECK(r32 / r64 >= 2.2);
}

TEST_CASE("degree is invariant under rigid translation of the charges") {
    TorusGeometry geom = cubic();
    TorusGrid g = TorusGrid::make(geom, {32, 32, 32});
    TwistForm rho(0.0, geom.volume_d());
    AssembleOptions opt;

    MonopoleSolution base = assemble_and_degree(g, unit_pair(), rho, opt);
    std::vector<SingularPoint> moved;
    for (auto p : unit_pair()) {
        p.t += rational_from_string("13/100");
        p.w += RatComplex(rational_from_string("21/100"), rational_from_string("17/100"));
        moved.push_back(p);
    }
    MonopoleSolution shifted = assemble_and_degree(g, moved, rho, opt);
    CHECK(std::abs(base.deg_an - shifted.deg_an) / std::abs(base.deg_an) < 1e-6);
}

TEST_CASE("switching on the twist shifts the degree by the cross term") {
    TorusGeometry geom = skew();  // gamma = -1/2
    TorusGrid g = TorusGrid::make(geom, {32, 32, 32});
    AssembleOptions opt;
    std::complex<double> rho0(0.3, 0.4);

    MonopoleSolution flat = assemble_and_degree(g, unit_pair(), TwistForm(0.0, 1.0), opt);
    MonopoleSolution twisted = assemble_and_degree(g, unit_pair(), TwistForm(rho0, 1.0), opt);
    double shift = 2.0 * geom.volume_d() * (geom.gamma_d() * rho0).real();
    CHECK(twisted.deg_an - flat.deg_an == doctest::Approx(shift).epsilon(1e-10));
}

TEST_CASE("shared s-value over distinct punctures cancels the degree") {
    TorusGeometry geom = cubic();
    std::vector<SingularPoint> z = {SingularPoint::from_doubles(0.5, {0.0, 0.0}, 1),
                                    SingularPoint::from_doubles(0.5, {0.3, 0.0}, -1)};
    TwistForm rho(0.0, geom.volume_d());
    ParabolicDifferenceModule mod = upsilon_rank_one({geom, z, rho, 0});
    REQUIRE(mod.punctures.size() == 2);
    CHECK(parabolic_degree(mod).value == 0);

    TorusGrid g = TorusGrid::make(geom, {32, 32, 32});
    AssembleOptions opt;
    MonopoleSolution sol = assemble_and_degree(g, z, rho, opt);
    CHECK(std::abs(sol.deg_an) < 1e-9);
}

TEST_CASE("random net-zero configurations match the dictionary degree") {
    std::mt19937_64 gen(0x5eed0007);
    std::uniform_int_distribution<int> pos(0, 23);
    std::uniform_int_distribution<int> kdist(1, 2);
    int accepted = 0;
    for (int trial = 0; trial < 12 && accepted < 5; ++trial) {
        TorusGeometry geom = (trial % 2 == 0) ? cubic() : skew();
        int k = kdist(gen);
        std::vector<SingularPoint> z = {
            {Rational(pos(gen), 24), RatComplex(Rational(pos(gen), 24), Rational(pos(gen), 24)), k},
            {Rational(pos(gen), 24), RatComplex(Rational(pos(gen), 24), Rational(pos(gen), 24)),
             -k}};
        TwistForm rho(0.0, geom.volume_d());
        MonopoleSolution sol;
        ParabolicDifferenceModule mod;
        try {
            TorusGrid g = TorusGrid::make(geom, {24, 24, 24});
            AssembleOptions opt;
            sol = assemble_and_degree(g, z, rho, opt);
            mod = upsilon_rank_one({geom, z, rho, 0});
        } catch (const std::invalid_argument&) {
            continue;  // collision or clearance draw
        }
        double predicted = degree_comparison(mod, geom, rho);
        double scale = std::max(std::abs(predicted), 1.0);
        CHECK(std::abs(sol.deg_an - predicted) / scale < 1e-6);
        ++accepted;
    }
    CHECK(accepted >= 3);
}

TEST_CASE("near-field fit approaches k/2") {
    TorusGeometry geom = cubic();
    TorusGrid g = TorusGrid::make(geom, {32, 32, 32});
    AssembleOptions opt;
    MonopoleSolution sol = assemble_and_degree(g, unit_pair(), TwistForm(0.0, 1.0), opt);
    REQUIRE(sol.near_field.size() == 2);
    CHECK(sol.near_field[0].fit == doctest::Approx(0.5).epsilon(0.05));
    CHECK(sol.near_field[1].fit == doctest::Approx(-0.5).epsilon(0.05));
}

TEST_CASE("grid resolutions must be even and at least 8") {
    TorusGeometry geom = cubic();
    CHECK_THROWS_AS(TorusGrid::make(geom, {6, 16, 16}), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid::make(geom, {16, 15, 16}), std::invalid_argument);
    CHECK_NOTHROW(TorusGrid::make(geom, {8, 10, 12}));
}

TEST_CASE("half-offset collisions fall back to quarter offsets") {
    TorusGeometry geom = cubic();
    // Two charges, one on the nodes and one on the half-offset nodes.
    std::vector<std::array<double, 3>> pts = {{0.25, 0.0, 0.0}, {0.25 + 1.5 / 16.0, 0.5, 0.5}};
    TorusGrid g = TorusGrid::aligned(geom, {16, 16, 16}, pts);
    for (const auto& p : pts)
        for (int a = 0; a < 3; ++a) {
            double cell = g.theta_of_point(p)[a] * g.n[a] - g.offset[a];
            CHECK(std::abs(cell - std::round(cell)) > 1e-7);
        }
}

TEST_CASE("mask separation is enforced") {
    TorusGeometry geom = cubic();
    TorusGrid g = TorusGrid::make(geom, {16, 16, 16});
    std::vector<SingularPoint> close = {SingularPoint::from_doubles(0.25, {0.0, 0.0}, 1),
                                        SingularPoint::from_doubles(0.27, {0.0, 0.0}, -1)};
    AssembleOptions opt;
    CHECK_THROWS_WITH_AS(assemble_and_degree(g, close, TwistForm(0.0, 1.0), opt),
                         doctest::Contains("resolution too low"), std::invalid_argument);
}

TEST_CASE("gauge shift: zero data changes nothing") {
    TorusGrid g = TorusGrid::make(cubic(), {16, 16, 16});
    AssembleOptions opt;
    MonopoleSolution sol = assemble_and_degree(g, unit_pair(), TwistForm(0.0, 1.0), opt);
    std::array<ScalarField3, 3> A{ScalarField3(g), ScalarField3(g), ScalarField3(g)};
    ScalarField3 f(g);
    CHECK(gauge_shift_check(sol, A, f) == 0.0);
}

TEST_CASE("gauge shift: exact 1-forms are flat") {
    TorusGrid g = TorusGrid::make(cubic(), {24, 24, 24});
    AssembleOptions opt;
    MonopoleSolution sol = assemble_and_degree(g, unit_pair(), TwistForm(0.0, 1.0), opt);
    ScalarField3 fprime = smooth_field(g, 2, 0.3, 7);
    auto A = spectral_gradient(fprime);
    ScalarField3 f(g);
    CHECK(gauge_shift_check(sol, A, f) < 1e-9);
}

TEST_CASE("gauge shift: smooth data stays below the base residual scale") {
    auto run = [&](int n) {
        TorusGrid g = TorusGrid::make(cubic(), {n, n, n});
        AssembleOptions opt;
        MonopoleSolution sol = assemble_and_degree(g, unit_pair(), TwistForm(0.0, 1.0), opt);
        std::array<ScalarField3, 3> A{smooth_field(g, 2, 0.2, 11), smooth_field(g, 2, 0.2, 12),
                                      smooth_field(g, 2, 0.2, 13)};
        ScalarField3 f = smooth_field(g, 2, 0.2, 14);
        return std::pair<double, double>(gauge_shift_check(sol, A, f), sol.bogomolny_residual);
    };
    auto [d16, res16] = run(16);
    auto [d32, res32] = run(32);
    CHECK(d16 < 10.0 * res16);
    CHECK(d32 < 10.0 * res32);
    CHECK(d16 / d32 >= 3.0);  // second-order in the spacing
}

TEST_CASE("nu shift: constants change nothing") {
    TorusGrid g = TorusGrid::make(cubic(), {16, 16, 16});
    AssembleOptions opt;
    MonopoleSolution sol = assemble_and_degree(g, unit_pair(), TwistForm(0.0, 1.0), opt);
    ComplexField3 nu_t(g), nu_wb(g);
    for (auto& v : nu_t.v) v = {0.3, -0.2};
    for (auto& v : nu_wb.v) v = {1.0, 2.0};
    CHECK(nu_shift_check(sol, nu_t, nu_wb) < 1e-10);
}

TEST_CASE("nu shift: smooth data converges at second order") {
    auto run = [&](int n) {
        TorusGrid g = TorusGrid::make(cubic(), {n, n, n});
        AssembleOptions opt;
        MonopoleSolution sol = assemble_and_degree(g, unit_pair(), TwistForm(0.0, 1.0), opt);
        ComplexField3 nu_t(g), nu_wb(g);
        ScalarField3 a = smooth_field(g, 2, 0.4, 21), b = smooth_field(g, 2, 0.4, 22);
        ScalarField3 c = smooth_field(g, 2, 0.4, 23), d = smooth_field(g, 2, 0.4, 24);
        for (size_t t = 0; t < g.size(); ++t) {
            nu_t.v[t] = {a.v[t], b.v[t]};
            nu_wb.v[t] = {c.v[t], d.v[t]};
        }
        return nu_shift_check(sol, nu_t, nu_wb);
    };
    double d16 = run(16), d32 = run(32);
    CHECK(d16 / d32 >= 3.0);
}

TEST_CASE("nu shift: plateau value matches the closed form") {
    // nu_wbar = w inside a plateau around the base point, smoothly cut off;
    // there the shift is -2 Re(d_w w) = -2.
    TorusGeometry geom = cubic();
    auto run = [&](int n) {
        TorusGrid g = TorusGrid::make(geom, {n, n, n});
        ScalarField3 re(g), im(g);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    auto x = g.point(i, j, k);
                    // periodic, equal to (w - w0) near w0 = (1/2, 1/2)
                    double s2 = std::sin(2.0 * std::numbers::pi * (x[1] - 0.5)) /
                                (2.0 * std::numbers::pi);
                    double s3 = std::sin(2.0 * std::numbers::pi * (x[2] - 0.5)) /
                                (2.0 * std::numbers::pi);
                    re.at(i, j, k) = s2;
                    im.at(i, j, k) = s3;
                }
        auto ga = fd_gradient(re);
        auto gb = fd_gradient(im);
        // shift field: 2 Re(d_w nu_wbar) = d_2(re) + d_3(im)
        int c = n / 2;
        return ga[1].at(c, c, c) + gb[2].at(c, c, c);
    };
    // At the plateau centre d_2 re = cos(0) = 1 and d_3 im = 1: shift -(-2)...
    // the recomputed G moves by -2 there; the derivative sum itself is +2.
    double v16 = run(16), v32 = run(32);
    CHECK(v16 == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::abs(v32 - 2.0) <= std::abs(v16 - 2.0));
}
