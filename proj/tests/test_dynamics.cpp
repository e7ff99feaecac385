#include "oracles.hpp"

#include "tcf/dynamics.hpp"
#include "tcf/errors.hpp"

#include <doctest.h>

#include <random>

using namespace tcf;

namespace {

// Brute force: the least i >= 1 with W^i x >= eps_0.
long brute_j(const System &S, const FieldElement &x) {
    Mobius W = generators(S.field()).W;
    FieldElement y = x;
    for (long i = 1; i <= 200; ++i) {
        y = tcf::apply(W, y);
        if (y >= S.eps0())
            return i;
    }
    return -1;
}

FieldElement random_between(const FieldElement &lo, const FieldElement &hi, std::mt19937_64 &rng) {
    std::uniform_int_distribution<long> u(1, 9999);
    mpq_class t(u(rng), 10000);
    t.canonicalize();
    return lo + (hi - lo) * FieldElement(lo.field(), t);
}

}

TEST_SUITE("dynamics") {

TEST_CASE("slow map cylinders") {
    System S4(4);
    FieldPtr F = S4.field();
    CHECK(cylinder_of_g(S4, S4.minus_tau()) == 1);
    CHECK(cylinder_of_g(S4, FieldElement(F, mpq_class(-1, 2))) == 2);
    CHECK(cylinder_of_g(S4, S4.b2()) == 3);
    Step s = g_step(S4, FieldElement(F, mpq_class(-1, 2)));
    CHECK(s.x == 3 - 2 * S4.tau());
    CHECK(s.digit == 2);
    CHECK(g_step(S4, S4.minus_tau()).x == 1 - S4.tau() + S4.tau().inverse());
    CHECK_THROWS_AS(cylinder_of_g(S4, FieldElement(F)), DomainError);
    CHECK_THROWS_AS(cylinder_of_g(S4, S4.minus_tau() - 1), DomainError);
}

TEST_CASE("cylinder bounds against long double") {
    for (int n = 4; n <= 9; ++n) {
        System S(n);
        long double t = oracle::tau(n);
        for (Digit k = 2; k <= 6; ++k) {
            auto [lo, hi] = S.g_cylinder(k);
            CHECK(std::fabs(lo.to_double() - static_cast<double>(1 / (1 - (k - 1) * t))) < 1e-14);
            CHECK(std::fabs(hi.to_double() - static_cast<double>(1 / (1 - k * t))) < 1e-14);
        }
        double eps0 = static_cast<double>(-t * t * t / (1 + t * t));
        CHECK(std::fabs(S.eps0().to_double() - eps0) < 1e-14);
    }
}

TEST_CASE("j(x) formula") {
    System S(5);
    FieldPtr F = S.field();
    FieldElement delta(F, mpq_class(1, 1000000));
    CHECK(j_of(S, S.eps0() - delta) == 1);
    FieldElement x2 = tcf::apply(generators(F).W.inverse(), S.eps0() - delta);
    CHECK(j_of(S, x2) == 2);
    long prev = 0;
    for (int e = 2; e <= 12; ++e) {
        mpq_class s(1, 1);
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 3, e);
        s /= p;
        long j = j_of(S, S.minus_tau() + FieldElement(F, s));
        CHECK(j >= prev);
        prev = j;
    }
    CHECK(prev > 1000);
    CHECK_THROWS_AS(j_of(S, S.eps0()), DomainError);
    CHECK_THROWS_AS(j_of(S, S.minus_tau()), DomainError);
}

TEST_CASE("j(x) agrees with explicit W iteration") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> pickj(1, 50);
    for (int n : {4, 5, 7}) {
        System S(n);
        int samples = n == 5 ? 1000 : 150;
        for (int i = 0; i < samples; ++i) {
            long j = pickj(rng);
            auto [lo, hi] = S.f_cylinder(-j);
            FieldElement x = random_between(lo, hi, rng);
            long bj = brute_j(S, x);
            CHECK(j_of(S, x) == bj);
            CHECK(bj == j);
        }
    }
}

TEST_CASE("accelerated map cylinders") {
    System S(6);
    FieldPtr F = S.field();
    CHECK(cylinder_of_f(S, S.eps0()) == 1);
    CHECK(cylinder_of_f(S, S.b2()) == 3);
    CHECK(cylinder_of_f(S, S.minus_tau()) == 1);
    FieldElement x = S.eps0() - FieldElement(F, mpq_class(1, 500));
    CHECK(cylinder_of_f(S, x) == -1);
    Step s = f_step(S, x);
    CHECK(s.x == tcf::apply(generators(F).W, x));
    CHECK(s.x >= S.eps0());
    CHECK(s.x.sign() < 0);
    FieldElement y = S.eps0() + FieldElement(F, mpq_class(1, 500));
    CHECK(f_step(S, y).x == g_step(S, y).x);
}

TEST_CASE("numeric cylinder decisions match exact ones") {
    std::mt19937_64 rng(99);
    for (int n : {4, 5, 8}) {
        System S(n);
        for (int i = 0; i < 200; ++i) {
            FieldElement x = random_between(S.minus_tau(), FieldElement(S.field()), rng);
            Interval xi = x.enclose(200);
            CHECK(cylinder_of_f(S, xi) == cylinder_of_f(S, x));
            CHECK(cylinder_of_g(S, xi) == cylinder_of_g(S, x));
        }
        // A point sitting on a boundary cannot be decided numerically.
        CHECK_THROWS_AS(cylinder_of_g(S, S.b1().enclose(300)), PrecisionExhausted);
        CHECK_THROWS_AS(cylinder_of_f(S, S.eps0().enclose(300)), PrecisionExhausted);
    }
}

TEST_CASE("orbit tables for n = 4..16") {
    for (int n = 4; n <= 16; ++n) {
        System S(n);
        OrbitTables T = build_orbit_tables(S);
        CHECK(T.phi.size() == static_cast<size_t>(2 * n - 3));
        CHECK(T.eps.size() == static_cast<size_t>(2 * n - 3));
        Report r = check_orbit_tables(S, T);
        for (const auto &c : r.checks())
            CHECK_MESSAGE(c.passed, "n=" << n << " " << c.name);
        Report p = product_relations_check(S, T);
        CHECK(p.passed());
        CHECK(cylinder_check(S, 12).passed());
        for (size_t i = 0; i + 1 < T.eps.size(); ++i)
            CHECK(f_step(S, T.eps[i]).x == T.eps[i + 1]);
    }
}

TEST_CASE("phi orbit against long double iteration") {
    for (int n = 4; n <= 10; ++n) {
        System S(n);
        OrbitTables T = build_orbit_tables(S);
        long double x = -oracle::tau(n);
        for (int j = 0; j < 2 * n - 4; ++j) {
            CHECK(std::fabs(T.phi[j].to_double() - static_cast<double>(x)) < 1e-9);
            int k;
            x = oracle::g_map(n, x, &k);
            CHECK(k == T.phi_digits[j]);
        }
    }
}

TEST_CASE("specific product relations") {
    System S4(4);
    OrbitTables T4 = build_orbit_tables(S4);
    CHECK(T4.phi[1] == FieldElement(S4.field(), -1L));
    CHECK(T4.phi[3] * T4.phi[4] == FieldElement(S4.field(), 1L));

    System S5(5);
    OrbitTables T5 = build_orbit_tables(S5);
    FieldElement one(S5.field(), 1L);
    CHECK(T5.phi[0] * T5.phi[3] == one);
    CHECK(T5.phi[1] * T5.phi[2] == one);
    CHECK(T5.phi[4] * T5.phi[6] == one);
    CHECK(T5.phi[5] == FieldElement(S5.field(), -1L));
    // The literal pairing phi_j phi_{n-2+j} does not hold.
    CHECK(T5.phi[2] * T5.phi[4] != one);
}

}
