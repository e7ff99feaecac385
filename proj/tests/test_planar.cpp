#include "oracles.hpp"

#include "tcf/errors.hpp"
#include "tcf/planar.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <random>

using namespace tcf;

namespace {

FieldElement lerp(const FieldElement &a, const FieldElement &b, std::mt19937_64 &rng) {
    std::uniform_int_distribution<long> u(1, 999);
    mpq_class t(u(rng), 1000);
    t.canonicalize();
    return a + (b - a) * FieldElement(a.field(), t);
}

// Numerical double integral of (1 + xy)^-2 by nested Gauss-Kronrod, independent of the log form.
double mu_quadrature(double x1, double x2, double y1, double y2) {
    using boost::math::quadrature::gauss_kronrod;
    auto inner = [&](double x) {
        return gauss_kronrod<double, 31>::integrate([&](double y) { return 1.0 / ((1 + x * y) * (1 + x * y)); },
                                                    y1, y2, 5, 1e-14);
    };
    return gauss_kronrod<double, 31>::integrate(inner, x1, x2, 5, 1e-13);
}

}

TEST_SUITE("planar") {

TEST_CASE("heights for n = 5 against long double recursion") {
    System S(5);
    OrbitTables T = build_orbit_tables(S);
    Heights H = build_heights(S, T);
    REQUIRE(H.L.size() == 6);
    long double t = oracle::tau(5);
    auto N1 = [&](long double y) { return -1 / (y + 1 - t); };
    long double odd = 1 / t, even = 1 / (t - 1);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::fabs(H.at(2 * i + 1).to_double() - static_cast<double>(odd)) < 1e-12);
        CHECK(std::fabs(H.at(2 * i + 2).to_double() - static_cast<double>(even)) < 1e-12);
        odd = N1(odd);
        even = N1(even);
    }
    CHECK(std::fabs(static_cast<double>(odd) - static_cast<double>(t)) < 1e-12);
}

TEST_CASE("exact bijectivity suite for n = 4..16") {
    for (int n = 4; n <= 16; ++n) {
        System S(n);
        Report r = verify_bijectivity(S, 6, 6);
        for (const auto &c : r.checks())
            CHECK_MESSAGE(c.passed, "n=" << n << " " << c.name << " " << c.detail);
    }
}

TEST_CASE("region examples") {
    System S(5);
    GammaSystem G(S);
    const FieldElement &t = S.tau();
    FieldPtr F = S.field();
    FieldElement zero(F);
    CHECK_FALSE(contains(G.gamma(), {S.minus_tau(), t.inverse()}));
    CHECK(contains(G.gamma(), {S.minus_tau(), zero}));
    CHECK(contains(G.gamma(), {S.b2(), t}));
    CHECK_FALSE(contains(G.gamma(), {zero, zero}));
    // T(x, 0) on Delta_2 lands at height 1/(2 tau - 1).
    std::mt19937_64 rng(1);
    FieldElement x = lerp(S.g_cylinder(2).first, S.g_cylinder(2).second, rng);
    PlanarPoint q = G.step({x, zero});
    CHECK(q.y == (2 * t - 1).inverse());
    CHECK_THROWS_AS(G.step({zero - 5, zero}), DomainError);
}

TEST_CASE("T inverse undoes T on random exact points") {
    std::mt19937_64 rng(5);
    for (int n : {4, 5, 7}) {
        System S(n);
        GammaSystem G(S);
        const auto &pieces = G.tiling().pieces;
        std::uniform_int_distribution<size_t> pick(0, pieces.size() - 1);
        for (int i = 0; i < 100; ++i) {
            const Rect &r = pieces[pick(rng)].src;
            PlanarPoint p{lerp(r.x1, r.x2, rng), lerp(r.y1, r.y2, rng)};
            PlanarPoint q = G.step(p);
            CHECK(contains(G.gamma(), q));
            PlanarPoint b = G.inverse(q);
            CHECK(b.x == p.x);
            CHECK(b.y == p.y);
        }
        // Points deep in the tails.
        FieldElement deep = S.minus_tau() + FieldElement(S.field(), mpq_class(1, 100000));
        PlanarPoint p{deep, FieldElement(S.field(), mpq_class(1, 10))};
        PlanarPoint q = G.step(p);
        CHECK(G.inverse(q).x == p.x);
        FieldElement small(S.field(), mpq_class(-1, 1000));
        PlanarPoint p2{small, FieldElement(S.field(), 2L)};
        CHECK(G.inverse(G.step(p2)).y == p2.y);
    }
}

TEST_CASE("rectangle measure") {
    System S(4);
    FieldPtr F = S.field();
    FieldElement zero(F), h(F, mpq_class(1, 3));
    CHECK(mu_rect({h, h, zero, h}).mid_d() == 0);
    Rect r{FieldElement(F, mpq_class(-3, 2)), FieldElement(F, mpq_class(-1, 2)), FieldElement(F, mpq_class(1, 4)),
           FieldElement(F, mpq_class(1, 2))};
    CHECK(std::fabs(mu_rect(r).mid_d() - mu_quadrature(-1.5, -0.5, 0.25, 0.5)) < 1e-11);
    CHECK(mu_rect(r).mid_d() > 0);
    Rect bad{S.minus_tau(), zero, zero, S.tau()};
    CHECK_THROWS_AS(mu_rect(bad), DomainError);
}

TEST_CASE("mu is preserved by T on random sub-rectangles") {
    std::mt19937_64 rng(17);
    for (int n : {4, 5, 6, 7}) {
        System S(n);
        GammaSystem G(S);
        const auto &pieces = G.tiling().pieces;
        std::uniform_int_distribution<size_t> pick(0, pieces.size() - 1);
        double worst = 0;
        for (int i = 0; i < 500; ++i) {
            const Piece &pc = pieces[pick(rng)];
            FieldElement x1 = lerp(pc.src.x1, pc.src.x2, rng), x2 = lerp(pc.src.x1, pc.src.x2, rng);
            FieldElement y1 = lerp(pc.src.y1, pc.src.y2, rng), y2 = lerp(pc.src.y1, pc.src.y2, rng);
            if (x2 < x1)
                std::swap(x1, x2);
            if (y2 < y1)
                std::swap(y1, y2);
            Rect r{x1, x2, y1, y2};
            Mobius M = S.matrix(pc.digit), N = S.y_matrix(pc.digit);
            Rect im{tcf::apply(M, x1), tcf::apply(M, x2), tcf::apply(N, y1), tcf::apply(N, y2)};
            double d = std::fabs((mu_rect(r) - mu_rect(im)).mid_d());
            worst = std::max(worst, d);
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("mu of Gamma is finite, mu of Omega is not") {
    for (int n : {4, 5, 6, 7}) {
        System S(n);
        GammaSystem G(S);
        Interval m = mu_region(G.gamma());
        CHECK(m.positive());
        CHECK(m.hi_d() < 100);
        CHECK_THROWS_AS(mu_region(G.omega()), DomainError);
        DivergenceResult d = omega_divergence(S, G.heights(), 1000.0);
        CHECK(d.sum > 1000.0);
        CHECK(d.rectangles == 1443);
    }
}

TEST_CASE("marginal density") {
    using boost::math::quadrature::gauss_kronrod;
    for (int n : {4, 5, 8}) {
        System S(n);
        GammaSystem G(S);
        Marginal nu(G);
        const auto &b = nu.breakpoints();
        double total = 0;
        for (size_t i = 0; i + 1 < b.size(); ++i)
            total += gauss_kronrod<double, 61>::integrate([&](double x) { return nu.density(x); }, b[i], b[i + 1],
                                                          8, 1e-14);
        CHECK(std::fabs(total - 1) < 1e-10);
        CHECK(std::fabs(nu.mass(b.front(), b.back()) - 1) < 1e-13);
        // On [1/(1-2 tau), 0) the fiber is [0, tau].
        double t = static_cast<double>(oracle::tau(n)), x = S.b2().to_double() / 2;
        CHECK(std::fabs(nu.density(x) * nu.mu_gamma() - t / (1 + t * x)) < 1e-12);

        double worst = 0;
        for (int i = 0; i < 200; ++i) {
            double a = -t + t * i / 200.0, c = -t + t * (i + 1) / 200.0;
            worst = std::max(worst, std::fabs(nu.preimage_mass(a, c) - nu.mass(a, c)));
        }
        CHECK(worst <= 1e-6);
    }
}

}
