#include "tcf/dioph.hpp"
#include "tcf/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tcf;

namespace {

mpq_class random_q(std::mt19937_64 &rng) {
    std::uniform_int_distribution<long> u(1, 999999);
    return mpq_class(u(rng), 1000000);
}

// A point of K x K strictly inside a random rectangle of Gamma.
PlanarPoint random_gamma_point(const GammaSystem &G, std::mt19937_64 &rng) {
    const auto &rs = G.gamma().rects;
    std::uniform_int_distribution<size_t> pick(0, rs.size() - 1);
    const Rect &r = rs[pick(rng)];
    const FieldPtr &F = G.system().field();
    FieldElement s(F, random_q(rng)), u(F, random_q(rng));
    return {r.x1 + (r.x2 - r.x1) * s, r.y1 + (r.y2 - r.y1) * u};
}

bool less(const QuadElement &a, const QuadElement &b) {
    Interval x = a.enclose(200), y = b.enclose(200);
    REQUIRE(mpfr_cmp(x.hi(), y.lo()) < 0);
    return true;
}

}

TEST_SUITE("dioph") {

TEST_CASE("theta at the reference points") {
    for (int n = 4; n <= 9; ++n) {
        System S(n);
        GammaSystem G(S);
        FieldElement zero(S.field(), 0L);
        CHECK(theta_fn(PlanarPoint{S.minus_tau(), zero}) == S.tau());
        CHECK(theta_fn(PlanarPoint{S.b1(), G.heights().at(2 * n - 5)}) == S.tau());
        // Gamma stays away from the hyperbola, so the supremum is finite.
        FieldElement sup = theta_sup(G);
        CHECK(S.tau() <= sup);
        CHECK(std::isfinite(sup.to_double()));
    }
    CHECK_THROWS_AS(theta_fn(1.0, -1.0), DomainError);
}

TEST_CASE("theta along the planar orbit is Theta_m") {
    std::mt19937_64 rng(8);
    for (int n : {4, 6, 7}) {
        System S(n);
        for (int i = 0; i < 5; ++i) {
            FieldElement x = S.minus_tau() * FieldElement(S.field(), random_q(rng));
            ExpandOptions o;
            o.steps = 25;
            Expansion e = expand(S, PointSource::element(x), o);
            FieldElement t = x, v(S.field(), 0L);
            for (long m = 0; m < e.length(); ++m) {
                double th = std::fabs(theta_fn(PlanarPoint{t, v}).to_double());
                CHECK(std::fabs(th - e.theta[m]) <= 1e-12 * th);
                Digit k = e.digits[m];
                t = act(S, k, t);
                v = act_y(S, k, v);
            }
        }
    }
}

TEST_CASE("ratio of theta under a slow step") {
    std::mt19937_64 rng(21);
    for (int n : {4, 5, 8}) {
        System S(n);
        GammaSystem G(S);
        int tested = 0;
        for (int i = 0; i < 200; ++i) {
            PlanarPoint p = random_gamma_point(G, rng);
            if (p.x.sign() >= 0)
                continue;
            Digit k = cylinder_of_f(S, p.x);
            if (k < 1)
                continue;
            FieldElement mx = act(S, k, p.x), ny = act_y(S, k, p.y);
            FieldElement lhs = theta_fn(PlanarPoint{mx, ny}) / theta_fn(p);
            CHECK(lhs == -(mx / ny));
            ++tested;
        }
        CHECK(tested > 50);
    }
}

TEST_CASE("danger region") {
    std::mt19937_64 rng(5);
    for (int n = 4; n <= 8; ++n) {
        System S(n);
        GammaSystem G(S);
        FieldElement zero(S.field(), 0L);
        CHECK_FALSE(danger_region_contains(G, PlanarPoint{S.minus_tau(), zero}));
        CHECK_FALSE(danger_curves_contain(S, PlanarPoint{S.minus_tau(), zero}));
        int inside = 0, compared = 0;
        for (int i = 0; i < 400; ++i) {
            PlanarPoint p = random_gamma_point(G, rng);
            bool d = danger_region_contains(G, p);
            if (p.x < S.eps0() || S.b1() <= p.x)
                CHECK_FALSE(d);
            if (G.inverse_digit(p) >= 1) {
                CHECK(d == danger_curves_contain(S, p));
                ++compared;
            }
            inside += d;
        }
        CHECK(compared > 100);
        CHECK(inside > 0);
    }
}

TEST_CASE("Borel scan on random orbits") {
    for (int n = 4; n <= 8; ++n) {
        System S(n);
        ExpandOptions o;
        o.steps = 1000 + n;
        for (std::uint64_t i = 0; i < 8; ++i) {
            Expansion e = expand(S, PointSource::random(S.field(), 99, i), o);
            BorelScan b = borel_scan(S, e, 1000);
            CHECK(b.violations == 0);
            CHECK(b.max_window_min <= S.tau().to_double() + 1e-10);
            // At most n - 2 consecutive points in D; a Theta-run is one longer than its D-run.
            CHECK(b.longest_danger_run <= n - 2);
            CHECK(b.longest_run <= b.longest_danger_run + 1);
            CHECK(b.danger_mismatches == 0);
            CHECK(b.window_min.size() == 1000);
            for (double th : e.theta)
                CHECK(th > 0);
            ThetaAgreement a = theta_agreement(e);
            CHECK(a.direct < 1e-12);
            CHECK(a.bis < 1e-12);
        }
    }
    System S(5);
    Expansion shortexp = expand(S, PointSource::random(S.field(), 1, 1), {});
    CHECK_THROWS_AS(borel_scan(S, shortexp, 1000), DomainError);
}

TEST_CASE("periodic points P_j") {
    for (int n : {4, 5, 6}) {
        System S(n);
        GammaSystem G(S);
        const double tau = S.tau().to_double();
        std::optional<PeriodicPoint> prev;
        for (int j = 1; j <= 10; ++j) {
            PeriodicPoint P = periodic_point(S, j);
            CAPTURE(n);
            CAPTURE(j);
            REQUIRE(P.theta.size() == static_cast<size_t>(n - 1));
            // Exact return: iterate the period once more from scratch.
            QuadElement x = P.x, y = P.y;
            for (Digit k : P.digits) {
                CHECK(cylinder_of_f(S, x) == k);
                x = apply(S.matrix(k), x);
                y = apply(S.y_matrix(k), y);
            }
            CHECK(x == P.x);
            CHECK(y == P.y);
            // y_j = -1 / x_j^*.
            CHECK(P.y * P.x.conjugate() == QuadElement(P.Q, FieldElement(S.field(), -1L)));
            auto c = min_poly_over_K(P);
            CHECK((P.x * P.x + c[1] * P.x + c[0]).is_zero());
            // theta is below tau at P_j.
            CHECK(compare(P.theta[0], S.tau()) < 0);
            // Apart from n = 4, j = 1, theta stays above tau on the rest of the orbit.
            if (n > 4 || j >= 2)
                for (size_t i = 1; i < P.theta.size(); ++i)
                    CHECK(compare(P.theta[i], S.tau()) > 0);
            for (size_t i = 1; i < P.theta.size(); ++i)
                CHECK(less(P.theta[0], P.theta[i]));
            if (prev) {
                CHECK(less(prev->theta[0], P.theta[0]));
                double b1 = S.b1().to_double();
                CHECK(std::fabs(P.x.to_double() - b1) < std::fabs(prev->x.to_double() - b1));
            }
            prev = P;
        }
        // The limit point (1/(1 - tau), L_{2n-5}); convergence is slow, roughly like 1/j.
        PeriodicPoint far = periodic_point(S, 400);
        CHECK(std::fabs(far.x.to_double() - S.b1().to_double()) < 1e-3);
        CHECK(std::fabs(far.y.to_double() - G.heights().at(2 * n - 5).to_double()) < 1e-3);
        CHECK(tau - far.theta[0].to_double() < 1e-2);
        CHECK(less(prev->theta[0], far.theta[0]));
    }
    CHECK_THROWS_AS(periodic_point(System(5), 0), DomainError);
}

TEST_CASE("an orbit seeded at P_j has a run of exactly n - 2") {
    for (int n : {4, 5, 6, 7, 8}) {
        System S(n);
        for (int j : {3, 7, 20}) {
            PeriodicPoint P = periodic_point(S, j);
            ExpandOptions o;
            o.steps = 60 * (n - 1) + n;
            Expansion e = expand(S, PointSource::quadratic(P.x), o);
            REQUIRE(e.length() == o.steps);
            for (long m = 0; m < e.length(); ++m)
                CHECK(e.digits[m] == P.digits[m % (n - 1)]);
            BorelScan b = borel_scan(S, e, 60 * (n - 1));
            CAPTURE(n);
            CAPTURE(j);
            CHECK(b.longest_run == n - 2);
            CHECK(b.longest_danger_run == n - 3);
            CHECK(b.violations == 0);
        }
    }
}

TEST_CASE("convergence") {
    for (int n : {4, 6, 8}) {
        System S(n);
        const double tau = S.tau().to_double();
        ExpandOptions o;
        o.steps = 1000;
        bool witness = false;
        for (std::uint64_t i = 0; i < 10; ++i) {
            Expansion e = expand(S, PointSource::random(S.field(), 17, i), o);
            ConvergenceReport r = convergence_check(e);
            CHECK(r.first_below >= 0);
            CHECK(r.first_below < 200);
            CHECK(r.max_q_ratio <= tau + 1e-12);
            CHECK(r.max_slow_ratio < 1);
            CHECK(r.delta > 0);
            CHECK(r.max_accel_ratio <= 1);
            CHECK(r.fitted_rate < 1);
            witness |= r.non_monotone_witness >= 0;
            // Per-step error ratio against |t_m v_m| on slow steps.
            for (long m = 1; m < e.length(); ++m) {
                if (e.digits[m - 1] < 1)
                    continue;
                double lr = std::log(e.theta_direct[m]) - 2 * e.log_q[m] -
                            (std::log(e.theta_direct[m - 1]) - 2 * e.log_q[m - 1]);
                CHECK(std::fabs(std::exp(lr) - std::fabs(e.t[m] * e.v[m])) < 1e-9);
            }
        }
        CHECK(witness);
    }
}

TEST_CASE("transcendence indicator") {
    std::vector<double> q4, q3;
    for (int m = 0; m <= 30; ++m) {
        q4.push_back(std::pow(4.0, m) * std::log(2.0));
        q3.push_back(std::pow(3.0, m) * std::log(2.0));
    }
    TranscendenceResult a = transcendence_indicator(q4, 2);
    CHECK(a.flagged);
    CHECK(std::fabs(a.statistic - std::log(4.0)) < 0.05);
    TranscendenceResult b = transcendence_indicator(q3, 2);
    CHECK_FALSE(b.flagged);
    CHECK(b.statistic <= std::log(3.0));
    CHECK(std::fabs(b.statistic - std::log(3.0)) < 0.05);
    CHECK(a.threshold == doctest::Approx(std::log(3.0)));

    System S(5);
    PeriodicPoint P = periodic_point(S, 2);
    ExpandOptions o;
    o.steps = 400;
    Expansion e = expand(S, PointSource::quadratic(P.x), o);
    TranscendenceResult c = transcendence_indicator(e.log_q, 2);
    CHECK(c.statistic < 0.1);
    CHECK_FALSE(c.flagged);

    CHECK_THROWS_AS(transcendence_indicator({0, 1, 2}, 2), DomainError);
    CHECK_THROWS_AS(transcendence_indicator(q4, 0), DomainError);
}

TEST_CASE("q history files") {
    auto v = parse_q_history("# comment\n1\n  ln:2.5  # inline\n\n100000000000000000000000000000\n");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 2.5);
    CHECK(v[2] == doctest::Approx(29 * std::log(10.0)));
    CHECK_THROWS_AS(parse_q_history("12x\n"), DomainError);
    CHECK_THROWS_AS(parse_q_history("ln:\n"), DomainError);
}

}
