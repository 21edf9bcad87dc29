#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "monodrome/geometry.hpp"

using namespace monodrome;

namespace {

LatticeBasis cubic_basis() {
    // e1 = (0,1), e2 = (0,i), e3 = (1,0)
    return LatticeBasis::from_doubles({{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}});
}

LatticeBasis skew_basis() {
    // e1 = (1,1), e2 = (0,i), e3 = (1,0): gamma = -1/2, frak_t = 1, frak_a = 0
    return LatticeBasis::from_doubles({{{1, 1, 0}, {0, 0, 1}, {1, 0, 0}}});
}

std::mt19937_64& rng() {
    static std::mt19937_64 gen(0x5eed0001);
    return gen;
}

LatticeBasis random_oriented_basis() {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    auto q = [&] { return Rational(num(rng()), den(rng())); };
    for (;;) {
        LatticeBasis b;
        for (int i = 0; i < 3; ++i) {
            b.e[i].a = q();
            b.e[i].alpha = RatComplex(q(), q());
        }
        try {
            derive_geometry(b);
            return b;
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
}

}  // namespace

TEST_CASE("derived constants on the cubic lattice") {
    TorusGeometry g = derive_geometry(cubic_basis());
    CHECK(g.gamma == RatComplex(Rational(0), Rational(0)));
    CHECK(g.frak_t == 1);
    CHECK(g.frak_a == RatComplex(Rational(0), Rational(0)));
    CHECK(g.area == 1);
    CHECK(g.volume == 1);
}

TEST_CASE("derived constants on the skew lattice") {
    TorusGeometry g = derive_geometry(skew_basis());
    CHECK(g.gamma == RatComplex(Rational(-1, 2), Rational(0)));
    CHECK(g.frak_t == 1);
    CHECK(g.frak_a == RatComplex(Rational(0), Rational(0)));
}

TEST_CASE("gamma = 0 forces frak_t = a3") {
    LatticeBasis b = cubic_basis();
    b.e[2].a = Rational(2);
    b.e[2].alpha = RatComplex(Rational(3, 10), Rational(2, 5));
    TorusGeometry g = derive_geometry(b);
    CHECK(g.gamma.is_zero());
    CHECK(g.frak_t == 2);
    CHECK(g.frak_a == RatComplex(Rational(3, 10), Rational(2, 5)));
}

TEST_CASE("invalid bases are rejected with the violated invariant named") {
    LatticeBasis dependent = cubic_basis();
    dependent.e[1].alpha = RatComplex(Rational(2), Rational(0));  // parallel to alpha1
    CHECK_THROWS_WITH_AS(derive_geometry(dependent),
                         doctest::Contains("R-linearly dependent"), std::invalid_argument);

    LatticeBasis flipped = cubic_basis();
    std::swap(flipped.e[0], flipped.e[1]);  // Im(conj(a1) a2) < 0
    CHECK_THROWS_WITH_AS(derive_geometry(flipped), doctest::Contains("oriented base of C"),
                         std::invalid_argument);

    LatticeBasis unoriented = cubic_basis();
    unoriented.e[2].a = Rational(-1);  // det < 0 but (alpha1, alpha2) still oriented
    CHECK_THROWS_WITH_AS(derive_geometry(unoriented), doctest::Contains("oriented base of R x C"),
                         std::invalid_argument);
}

TEST_CASE("coordinate change examples") {
    TorusGeometry cubic = derive_geometry(cubic_basis());
    auto [s0, u0] = to_su_coordinates(cubic, 0.7, {1.0, 2.0});
    CHECK(s0 == doctest::Approx(0.7));
    CHECK(u0 == std::complex<double>(1.0, 2.0));

    TorusGeometry skew = derive_geometry(skew_basis());
    auto [s1, u1] = to_su_coordinates(skew, 0.0, {1.0, 0.0});
    CHECK(s1 == doctest::Approx(-1.0));
    CHECK(u1 == std::complex<double>(1.0, 0.0));

    // e3 action moves (s, u) = (0, 0) to (frak_t, frak_a) = (1, 0)
    auto [s2, u2] = to_su_coordinates(skew, to_double(skew.basis.e[2].a), skew.frak_a_d());
    CHECK(s2 == doctest::Approx(1.0));
    CHECK(std::abs(u2) == doctest::Approx(0.0));
}

TEST_CASE("coordinate change is lattice-equivariant") {
    for (int trial = 0; trial < 200; ++trial) {
        LatticeBasis b = random_oriented_basis();
        TorusGeometry g = derive_geometry(b);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        double t = u(rng());
        std::complex<double> w(u(rng()), u(rng()));
        auto [s, uu] = to_su_coordinates(g, t, w);
        for (int i = 0; i < 3; ++i) {
            double ta = t + to_double(b.e[i].a);
            std::complex<double> wa = w + b.e[i].alpha.to_std();
            auto [sa, ua] = to_su_coordinates(g, ta, wa);
            double s_expect = i == 2 ? s + g.frak_t_d() : s;
            std::complex<double> u_expect =
                i == 2 ? uu + g.frak_a_d() : uu + b.e[i].alpha.to_std();
            CHECK(std::abs(sa - s_expect) < 1e-12);
            CHECK(std::abs(ua - u_expect) < 1e-12);
        }
    }
}

TEST_CASE("frak_t is positive for random oriented bases") {
    for (int trial = 0; trial < 10000; ++trial) {
        TorusGeometry g = derive_geometry(random_oriented_basis());
        CHECK(g.frak_t > 0);
    }
}

TEST_CASE("projection: two crossings over one puncture") {
    TorusGeometry g = derive_geometry(cubic_basis());
    std::vector<SingularPoint> z = {SingularPoint::from_doubles(0.25, {0, 0}, 1),
                                    SingularPoint::from_doubles(0.75, {0, 0}, -1)};
    auto tables = project_singular_set(g, z);
    REQUIRE(tables.size() == 1);
    REQUIRE(tables[0].tau_values.size() == 2);
    CHECK(tables[0].tau_values[0] == Rational(1, 4));
    CHECK(tables[0].tau_values[1] == Rational(3, 4));
}

TEST_CASE("projection: distinct u-images give distinct punctures") {
    TorusGeometry g = derive_geometry(cubic_basis());
    std::vector<SingularPoint> z = {SingularPoint::from_doubles(0.5, {0, 0}, 1),
                                    SingularPoint::from_doubles(0.5, {0.3, 0}, -1)};
    auto tables = project_singular_set(g, z);
    REQUIRE(tables.size() == 2);
    for (const auto& t : tables) {
        REQUIRE(t.tau_values.size() == 1);
        CHECK(t.tau_values[0] == Rational(1, 2));
    }
}

TEST_CASE("projection applies the coordinate change before reduction") {
    TorusGeometry g = derive_geometry(skew_basis());
    std::vector<SingularPoint> z = {
        {rational_from_string("9/10"), RatComplex(Rational(1, 5), Rational(0)), 1}};
    auto tables = project_singular_set(g, z);
    REQUIRE(tables.size() == 1);
    REQUIRE(tables[0].tau_values.size() == 1);
    // s = 9/10 + 2 Re(-1/2 * 1/5) = 7/10
    CHECK(tables[0].tau_values[0] == Rational(7, 10));
}

TEST_CASE("projection is invariant under replacing lifts by lattice translates") {
    for (int trial = 0; trial < 100; ++trial) {
        LatticeBasis b = random_oriented_basis();
        TorusGeometry g = derive_geometry(b);
        std::uniform_int_distribution<int> shift(-3, 3);
        std::uniform_int_distribution<int> num(-4, 4);
        std::uniform_int_distribution<int> den(1, 5);
        auto q = [&] { return Rational(num(rng()), den(rng())); };

        SingularPoint p{q(), RatComplex(q(), q()), 1};
        SingularPoint moved = p;
        for (int i = 0; i < 3; ++i) {
            int m = shift(rng());
            moved.t += Rational(m) * b.e[i].a;
            moved.w += Rational(m) * b.e[i].alpha;
        }
        auto a = project_singular_set(g, {p});
        auto c = project_singular_set(g, {moved});
        REQUIRE(a.size() == 1);
        REQUIRE(c.size() == 1);
        CHECK(a[0].point == c[0].point);
        CHECK(a[0].s_values == c[0].s_values);
    }
}

TEST_CASE("tau values lie in [0,1) and increase strictly") {
    for (int trial = 0; trial < 100; ++trial) {
        LatticeBasis b = random_oriented_basis();
        TorusGeometry g = derive_geometry(b);
        std::uniform_int_distribution<int> num(-9, 9);
        std::uniform_int_distribution<int> den(1, 7);
        std::vector<SingularPoint> z;
        for (int i = 0; i < 4; ++i)
            z.push_back({Rational(num(rng()), den(rng())),
                         RatComplex(Rational(num(rng()), den(rng())),
                                    Rational(num(rng()), den(rng()))),
                         1});
        std::vector<PunctureWeightTable> tables;
        try {
            tables = project_singular_set(g, z);
        } catch (const std::invalid_argument&) {
            continue;  // collision draw
        }
        for (const auto& t : tables) {
            Rational prev(-1);
            for (const auto& tau : t.tau_values) {
                CHECK(tau >= 0);
                CHECK(tau < 1);
                CHECK(tau > prev);
                prev = tau;
            }
        }
    }
}

TEST_CASE("numerically colliding distinct orbits are reported") {
    TorusGeometry g = derive_geometry(cubic_basis());
    std::vector<SingularPoint> z = {SingularPoint::from_doubles(0.5, {0.25, 0.25}, 1),
                                    SingularPoint::from_doubles(0.5, {0.25 + 1e-11, 0.25}, -1)};
    CHECK_THROWS_AS(project_singular_set(g, z), std::invalid_argument);
}

TEST_CASE("exactly duplicated orbits are reported") {
    TorusGeometry g = derive_geometry(cubic_basis());
    std::vector<SingularPoint> z = {SingularPoint::from_doubles(0.5, {0.25, 0.25}, 1),
                                    SingularPoint::from_doubles(1.5, {1.25, 0.25}, 1)};
    CHECK_THROWS_AS(project_singular_set(g, z), std::invalid_argument);
}
