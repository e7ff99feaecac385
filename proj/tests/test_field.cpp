#include "oracles.hpp"

#include "tcf/errors.hpp"
#include "tcf/field.hpp"

#include <doctest.h>

#include <random>

using namespace tcf;

namespace {

FieldElement random_element(const FieldPtr &F, std::mt19937_64 &rng) {
    std::uniform_int_distribution<long> num(-40, 40), den(1, 25);
    std::vector<mpq_class> c(F->degree());
    for (auto &q : c) {
        q = mpq_class(num(rng), den(rng));
        q.canonicalize();
    }
    return FieldElement(F, c);
}

bool encloses(const Enclosure &e, long double v, long double slack = 1e-15L) {
    return e.lo.get_d() - slack <= v && v <= e.hi.get_d() + slack;
}

}

TEST_SUITE("field") {

TEST_CASE("minimal polynomials of small n") {
    CHECK(build_field(4)->min_poly_string() == "x^2 - 2");
    CHECK(build_field(5)->min_poly_string() == "x^2 - x - 1");
    CHECK(build_field(6)->min_poly_string() == "x^2 - 3");
    CHECK(build_field(7)->degree() == 3);
    CHECK(build_field(9)->degree() == 3);
}

TEST_CASE("minimal polynomial vanishes at every conjugate cosine") {
    for (int n = 4; n <= 30; ++n) {
        FieldPtr F = build_field(n);
        CHECK(F->degree() == oracle::euler_phi(2 * n) / 2);
        std::vector<long> p;
        for (const auto &c : F->min_poly())
            p.push_back(c.get_si());
        for (int k = 1; k < n; ++k) {
            if (std::gcd(k, 2 * n) != 1)
                continue;
            CHECK(std::fabs(static_cast<double>(oracle::horner(p, oracle::lambda(n, k)))) < 1e-9);
        }
    }
}

TEST_CASE("n below four is rejected") {
    CHECK_THROWS_AS(build_field(3), DomainError);
    CHECK_THROWS_AS(build_field(0), DomainError);
}

TEST_CASE("arithmetic identities") {
    FieldPtr F4 = build_field(4);
    FieldElement lam = FieldElement::lambda(F4);
    CHECK(lam * lam == FieldElement(F4, 2L));

    FieldPtr F5 = build_field(5);
    FieldElement tau = FieldElement::tau(F5);
    FieldElement ti = tau.inverse();
    CHECK(tau * ti == FieldElement(F5, 1L));
    CHECK(std::fabs(ti.to_double() - 1.0 / static_cast<double>(oracle::tau(5))) < 1e-15);
    CHECK_THROWS_AS(FieldElement(F5).inverse(), DivisionByZero);

    std::mt19937_64 rng(7);
    for (int n : {4, 5, 7, 8, 9, 11, 16}) {
        FieldPtr F = build_field(n);
        for (int i = 0; i < 30; ++i) {
            FieldElement a = random_element(F, rng);
            CHECK((a + (-a)).is_zero());
            if (!a.is_zero())
                CHECK(a * a.inverse() == FieldElement(F, 1L));
        }
    }
}

TEST_CASE("sign decisions") {
    for (int n = 4; n <= 16; ++n) {
        FieldPtr F = build_field(n);
        FieldElement tau = FieldElement::tau(F);
        CHECK(sign(FieldElement(F)) == 0);
        CHECK(sign(1 - tau) == -1);
        CHECK(sign(tau - 2) == 1);
    }
    FieldPtr F = build_field(5);
    CHECK(sign(FieldElement::tau(F) - 2) == 1);
}

TEST_CASE("sign agrees with embedding on random elements") {
    std::mt19937_64 rng(11);
    for (int n : {5, 7, 12}) {
        FieldPtr F = build_field(n);
        for (int i = 0; i < 50; ++i) {
            FieldElement a = random_element(F, rng);
            long double v = 0, lp = 1;
            for (const auto &c : a.coeffs()) {
                v += static_cast<long double>(c.get_d()) * lp;
                lp *= oracle::lambda(n);
            }
            if (std::fabs(static_cast<double>(v)) > 1e-9)
                CHECK(sign(a) == (v > 0 ? 1 : -1));
        }
    }
}

TEST_CASE("embeddings") {
    FieldPtr F4 = build_field(4);
    Enclosure e = embed(FieldElement::tau(F4), 53);
    CHECK(encloses(e, 1.0L + std::sqrt(2.0L)));
    CHECK(mpq_class(e.hi - e.lo).get_d() <= std::ldexp(1.0, -52) * 2.5);

    FieldPtr F6 = build_field(6);
    CHECK(encloses(embed(FieldElement::lambda(F6), 53), std::sqrt(3.0L)));

    Enclosure z = embed(FieldElement(F6), 100);
    CHECK(z.lo == 0);
    CHECK(z.hi == 0);
    CHECK_THROWS_AS(embed(FieldElement::tau(F6), 8), DomainError);

    // Width shrinks as precision is raised.
    Enclosure e1 = embed(FieldElement::tau(F4), 64), e2 = embed(FieldElement::tau(F4), 200);
    CHECK(e2.hi - e2.lo < e1.hi - e1.lo);
}

TEST_CASE("galois conjugates") {
    FieldPtr F5 = build_field(5);
    auto v = galois_conjugate_values(FieldElement::lambda(F5));
    REQUIRE(v.size() == 2);
    CHECK(encloses(v[0], oracle::lambda(5, 1)));
    CHECK(encloses(v[1], oracle::lambda(5, 3)));

    FieldPtr F4 = build_field(4);
    auto t = galois_conjugate_values(FieldElement::tau(F4));
    CHECK(encloses(t[0], 1.0L + std::sqrt(2.0L)));
    CHECK(encloses(t[1], 1.0L - std::sqrt(2.0L)));

    auto c = galois_conjugate_values(FieldElement(F5, mpq_class(3, 7)));
    for (const auto &x : c)
        CHECK(encloses(x, 3.0L / 7.0L));
}

TEST_CASE("floor and ceiling") {
    FieldPtr F = build_field(4);
    FieldElement tau = FieldElement::tau(F);
    CHECK(floor(tau) == 2);
    CHECK(ceil(tau) == 3);
    CHECK(floor(-tau) == -3);
    CHECK(floor(FieldElement(F, mpq_class(-7, 2))) == -4);
    CHECK(ceil(FieldElement(F, 5L)) == 5);
}

TEST_CASE("rational literals") {
    CHECK(parse_rational("-1.2345") == mpq_class(-2469, 2000));
    CHECK(parse_rational("3/6") == mpq_class(1, 2));
    CHECK(parse_rational("\xE2\x88\x92" "2/3") == mpq_class(-2, 3));
    CHECK(parse_rational("1e-3") == mpq_class(1, 1000));
    CHECK(parse_rational("42") == 42);
    CHECK_THROWS_AS(parse_rational("abc"), DomainError);
    CHECK_THROWS_AS(parse_rational("1.2.3"), DomainError);
    CHECK(rational_string(mpq_class(-2, 3)) == "-2/3");
}

}
