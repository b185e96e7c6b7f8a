#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "nildyn/torus.hpp"

using namespace nildyn;

TEST_CASE("torus frac and metric") {
    CHECK(tfrac(2.75L) == doctest::Approx(0.75));
    CHECK(tfrac(-0.25L) == doctest::Approx(0.75));
    CHECK(torus_dist(0.1L, 0.9L) == doctest::Approx(0.2));
    CHECK(torus_dist(0.0L, 0.5L) == doctest::Approx(0.5));
    CHECK(tfrac(Rational(-1, 4)) == Rational(3, 4));
}

TEST_CASE("named constants and constants file") {
    long double g = named_constant("golden");
    CHECK(std::fabs(g * (g + 1) - 1.0L) < 1e-18L); // golden ratio conjugate
    long double s = named_constant("sqrt2m1");
    CHECK(std::fabs((s + 1) * (s + 1) - 2.0L) < 1e-18L);
    CHECK_THROWS_AS(named_constant("nope"), std::invalid_argument);

    std::string path = "test_constants.txt";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "myconst = 0.125\n";
        out << "other=0.5 # trailing comment\n";
    }
    auto table = load_constants(path);
    CHECK(table.at("myconst") == doctest::Approx(0.125));
    CHECK(table.at("other") == doctest::Approx(0.5));
    CHECK(resolve_constant("myconst", table) == doctest::Approx(0.125));
    CHECK(resolve_constant("0.25") == doctest::Approx(0.25));
    CHECK(resolve_constant("golden") == doctest::Approx((double)g));
    CHECK_THROWS_AS(resolve_constant("garbage"), std::invalid_argument);
    std::remove(path.c_str());
}

TEST_CASE("sa_exact_rotation: formula cases") {
    auto r = sa_exact_rotation(TorusPoint::of(Rational(0)), {3, 7, 11});
    REQUIRE(!r.full_torus);
    REQUIRE(r.points.size() == 4);
    CHECK(r.points[0].rv == Rational(0));
    CHECK(r.points[1].rv == Rational(1, 4));
    CHECK(r.points[2].rv == Rational(1, 2));
    CHECK(r.points[3].rv == Rational(3, 4));

    auto r2 = sa_exact_rotation(TorusPoint::of(Rational(0)), {2, 4});
    REQUIRE(r2.points.size() == 1);
    CHECK(r2.points[0].rv == Rational(0));

    CHECK(sa_exact_rotation(TorusPoint::of(Rational(0)), {5}).full_torus);
    CHECK_THROWS_AS(sa_exact_rotation(TorusPoint::of(Rational(0)), {}),
                    std::invalid_argument);
}

TEST_CASE("sa_exact_rotation: translation equivariance and gcd dilation") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 40; ++t) {
        std::vector<std::int64_t> A;
        std::uniform_int_distribution<std::int64_t> da(-20, 20);
        while (A.size() < 3) {
            std::int64_t a = da(rng);
            if (a != 0 && std::find(A.begin(), A.end(), a) == A.end()) A.push_back(a);
        }
        Rational x(std::uniform_int_distribution<int>(0, 9)(rng), 10);
        auto at_x = sa_exact_rotation(TorusPoint::of(x), A);
        auto at_0 = sa_exact_rotation(TorusPoint::of(Rational(0)), A);
        REQUIRE(at_x.full_torus == at_0.full_torus);
        if (!at_0.full_torus) {
            REQUIRE(at_x.points.size() == at_0.points.size());
            for (std::size_t i = 0; i < at_0.points.size(); ++i)
                CHECK(at_x.points[i].rv == rfrac(at_0.points[i].rv + x));
        }
        // formula invariance under A -> A / gcd(A)
        std::int64_t g = gcd_set(A);
        std::vector<std::int64_t> Ag;
        for (auto a : A) Ag.push_back(a / g);
        auto scaled = sa_exact_rotation(TorusPoint::of(Rational(0)), Ag);
        REQUIRE(scaled.points.size() == at_0.points.size());
        for (std::size_t i = 0; i < at_0.points.size(); ++i)
            CHECK(scaled.points[i].rv == at_0.points[i].rv);
    }
}

TEST_CASE("sa_numeric_witness: rotation") {
    RotationSystem sys{TorusPoint::of(named_constant("golden"))};
    auto w = sa_numeric_witness(sys, 0.0L, 0.0L, {1, 2, 3}, 0.05L, 100000);
    REQUIRE(w.has_value());
    // verify the witness directly
    for (std::int64_t f : {1, 2, 3})
        CHECK(torus_dist(sys.iterate(0.0L, f * *w), 0.0L) < 0.05L);

    // F={1}, y=Tx: witness 1 regardless of eps
    long double y = sys.iterate(0.3L, 1);
    CHECK(sa_numeric_witness(sys, 0.3L, y, {1}, 1e-12L, 5) == 1);
}

TEST_CASE("sa_rotation_grid_witnesses matches per-point scans") {
    long double alpha = named_constant("golden");
    RotationSystem sys{TorusPoint::of(alpha)};
    std::vector<std::int64_t> F = {3, 7, 11};
    auto grid = sa_rotation_grid_witnesses(alpha, 0.0L, F, 8, 0.01L, 200000);
    REQUIRE(grid.size() == 8);
    for (std::int64_t j = 0; j < 8; ++j) {
        auto direct = sa_numeric_witness(sys, 0.0L, j / 8.0L, F, 0.01L, 200000);
        CHECK(grid[static_cast<std::size_t>(j)] == direct);
    }
}

TEST_CASE("return_times: rational rotation and full-ball cases") {
    RotationSystem quarter{TorusPoint::of(Rational(1, 4))};
    IntWindowSet R = return_times(quarter, 0.0L, 0.0L, 0.1L, 20);
    CHECK(R.members() == std::vector<std::int64_t>({4, 8, 12, 16, 20}));

    IntWindowSet all = return_times(quarter, 0.0L, 0.0L, 0.6L, 15);
    CHECK(all.count() == 15);

    RotationSystem gold{TorusPoint::of(named_constant("golden"))};
    IntWindowSet G = return_times(gold, 0.0L, 0.0L, 0.01L, 10000);
    CHECK(!G.empty());
    auto verdict = syndeticity_gap(G);
    REQUIRE(verdict.gap.has_value());
    CHECK(*verdict.gap < 10000);
}

TEST_CASE("return_times shift law against the rotated base point") {
    RotationSystem gold{TorusPoint::of(named_constant("golden"))};
    IntWindowSet R = return_times(gold, 0.2L, 0.5L, 0.05L, 5000);
    std::int64_t n = 17;
    IntWindowSet S = return_times(gold, gold.iterate(0.2L, n), 0.5L, 0.05L, 5000 - n);
    IntWindowSet shifted = shift(R, n);
    for (std::int64_t m = shifted.lo(); m <= shifted.hi(); ++m)
        CHECK(shifted.contains(m) == S.contains(m));
}

TEST_CASE("cocycle_sum basics") {
    SkewGeneric skew;
    skew.alpha = TorusPoint::of(Rational(1, 3));
    skew.constant = 0.0;
    skew.terms = {{1, 1.0, 0.0}}; // h(x) = cos(2 pi x)
    CHECK(cocycle_sum(skew, 0.0L, 0) == 0.0L);
    // cos(0) + cos(2pi/3) + cos(4pi/3) = 0
    CHECK(std::fabs(cocycle_sum(skew, 0.0L, 3)) < 1e-15L);

    SkewGeneric cst;
    cst.alpha = TorusPoint::of(named_constant("golden"));
    cst.constant = 0.7;
    CHECK(cocycle_sum(cst, 0.1L, 5) == doctest::Approx(3.5));
    CHECK(cocycle_sum(cst, 0.1L, -5) == doctest::Approx(-3.5));
}

TEST_CASE("cocycle identity h_{n+m}(x) = h_n(x) + h_m(x+na)") {
    SkewGeneric skew;
    skew.alpha = TorusPoint::of(named_constant("golden"));
    skew.constant = 0.3;
    skew.terms = {{1, 0.8, -0.2}, {3, -0.1, 0.4}};
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::int64_t> dn(-1000, 1000);
    std::uniform_real_distribution<double> dx(0.0, 1.0);
    for (int t = 0; t < 500; ++t) {
        std::int64_t n = dn(rng), m = dn(rng);
        long double x = dx(rng);
        long double lhs = cocycle_sum(skew, x, n + m);
        long double rhs = cocycle_sum(skew, x, n) + cocycle_sum(skew, x + n * skew.alpha.fv, m);
        CHECK(std::fabs(lhs - rhs) < 1e-9L);
    }
}

TEST_CASE("skew iterate agrees with the cocycle sum") {
    SkewGeneric skew;
    skew.alpha = TorusPoint::of(named_constant("sqrt2m1"));
    skew.terms = {{2, 0.5, 0.1}};
    auto [x5, y5] = skew.iterate(0.2L, 0.4L, 5);
    CHECK(x5 == doctest::Approx((double)tfrac(0.2L + 5 * skew.alpha.fv)));
    CHECK(y5 == doctest::Approx((double)tfrac(0.4L + cocycle_sum(skew, 0.2L, 5))));
}

TEST_CASE("quadratic skew closed form") {
    QuadraticSkew qs{TorusPoint::of(named_constant("golden"))};
    // T^m(0,0) = (ma, m^2 a)
    for (std::int64_t m : {1, 2, 7, 100}) {
        auto [x, y] = qs.iterate(0.0L, 0.0L, m);
        CHECK(x == doctest::Approx((double)tfrac(m * qs.alpha.fv)));
        CHECK(y == doctest::Approx((double)tfrac(m * m * qs.alpha.fv)));
    }
    // single steps compose to the closed form
    long double x = 0.3L, y = 0.6L;
    for (int i = 0; i < 25; ++i) {
        auto [nx, ny] = qs.iterate(x, y, 1);
        x = nx;
        y = ny;
    }
    auto [cx, cy] = qs.iterate(0.3L, 0.6L, 25);
    CHECK(std::fabs(x - cx) < 1e-12L);
    CHECK(std::fabs(y - cy) < 1e-12L);
}
