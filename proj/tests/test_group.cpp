#include "oracles.hpp"

#include "tcf/group.hpp"

#include <doctest.h>

#include <array>

using namespace tcf;

namespace {

using Mat = std::array<long double, 4>;

Mat mm(const Mat &x, const Mat &y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

bool close_projectively(const Mobius &M, const Mat &x, long double tol) {
    Mat m{static_cast<long double>(M.a().to_double()), static_cast<long double>(M.b().to_double()),
          static_cast<long double>(M.c().to_double()), static_cast<long double>(M.d().to_double())};
    bool same = true, opposite = true;
    for (int i = 0; i < 4; ++i) {
        same = same && std::fabs(m[i] - x[i]) < tol;
        opposite = opposite && std::fabs(m[i] + x[i]) < tol;
    }
    return same || opposite;
}

}

TEST_SUITE("group") {

TEST_CASE("generators for n = 4") {
    FieldPtr F = build_field(4);
    Generators G = generators(F);
    CHECK(G.A.a() == FieldElement(F, 1L));
    CHECK(G.A.b() == FieldElement(F, std::vector<mpq_class>{1, 1}));
    CHECK(G.A.c().is_zero());
    CHECK(G.A * G.B == -G.C);
}

TEST_CASE("W against a long double product of the word") {
    for (int n = 4; n <= 9; ++n) {
        FieldPtr F = build_field(n);
        long double t = oracle::tau(n);
        Mat Ainv{1, -t, 0, 1}, C{1, -1, 1, 0};
        Mat A1C = mm(Ainv, C), A2C = mm(Ainv, A1C);
        Mat w = A2C;
        for (int i = 0; i < n - 3; ++i)
            w = mm(w, A1C);
        w = mm(w, A2C);
        for (int i = 0; i < n - 2; ++i)
            w = mm(w, A1C);
        CHECK(close_projectively(generators(F).W, w, 1e-9L));
    }
}

TEST_CASE("Mobius action and cusps") {
    FieldPtr F = build_field(5);
    Generators G = generators(F);
    FieldElement zero(F), one(F, 1L), tau = FieldElement::tau(F);
    CHECK(is_infinity(tcf::apply(G.B, ExtendedPoint(zero))));
    CHECK(std::get<FieldElement>(tcf::apply(G.C, ExtendedPoint(Infinity{}))) == one);
    CHECK(is_infinity(tcf::apply(G.A, ExtendedPoint(Infinity{}))));
    CHECK(tcf::apply(G.W, -tau) == -tau);
    FieldElement x(F, mpq_class(-3, 7));
    CHECK(tcf::apply(Mobius::identity(F), x) == x);
    Interval xi = Interval::from_q(mpq_class(-3, 7), 128);
    Interval y = tcf::apply(G.A, xi, 128);
    CHECK(std::fabs(y.mid_d() - (-3.0 / 7 + static_cast<double>(oracle::tau(5)))) < 1e-14);
    CHECK_THROWS(Mobius(one, one, one, one));
}

TEST_CASE("relations hold exactly for n = 4..16") {
    for (int n = 4; n <= 16; ++n) {
        FieldPtr F = build_field(n);
        Report r = relations_check(F);
        for (const auto &c : r.checks())
            CHECK_MESSAGE(c.passed, "n=" << n << " " << c.name << " " << c.detail);
    }
}

TEST_CASE("powers of B") {
    FieldPtr F = build_field(7);
    CHECK(power_B(F, 0) == Mobius::identity(F));
    CHECK(power_B(F, 7).projectively_equal(Mobius::identity(F)));
    CHECK(power_B(F, -3) * power_B(F, 3) == Mobius::identity(F));
}

TEST_CASE("B_k sequence") {
    FieldPtr F = build_field(5);
    CHECK(b_sequence(F, 0).is_zero());
    CHECK(b_sequence(F, 1) == FieldElement(F, 1L));
    CHECK(b_sequence(F, 2) == FieldElement::lambda(F));
    CHECK(b_sequence(F, 3) == FieldElement::lambda(F));
    for (int n = 4; n <= 12; ++n) {
        FieldPtr G = build_field(n);
        CHECK(b_sequence(G, n).is_zero());
        for (int k = 1; k < n; ++k) {
            long double want = std::sin(k * M_PIl / n) / std::sin(M_PIl / n);
            CHECK(std::fabs(b_sequence(G, k).to_double() - static_cast<double>(want)) < 1e-12);
        }
    }
}

TEST_CASE("closed form of W^j") {
    FieldPtr F = build_field(6);
    Mobius W = generators(F).W;
    for (long j = -4; j <= 6; ++j)
        CHECK(W_power(F, j) == pow(W, j));
}

TEST_CASE("M_k and N_k") {
    FieldPtr F = build_field(5);
    Generators G = generators(F);
    for (long k = 1; k <= 5; ++k) {
        CHECK(M_k(F, k) == pow(G.A, -k) * G.C);
        CHECK(N_k(F, k) == y_companion(M_k(F, k)));
    }
}

TEST_CASE("Ward conjugation") {
    for (int n : {4, 5, 6, 9}) {
        Report r = ward_conjugation_check(build_field(n), 53);
        CHECK(r.passed());
    }
}

TEST_CASE("domination of conjugates and the inverse action lemma") {
    for (int n : {5, 7, 9}) {
        FieldPtr F = build_field(n);
        CHECK(domination_check(F, 200, 3).passed());
        CHECK(inverses_action_check(F, 100, 5).passed());
    }
}

}
