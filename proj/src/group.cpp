#include "tcf/group.hpp"

#include "tcf/errors.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace tcf {

Mobius::Mobius(FieldElement a, FieldElement b, FieldElement c, FieldElement d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    FieldElement det = a_ * d_ - b_ * c_;
    if (det != FieldElement(a_.field(), 1L))
        throw DomainError("Mobius matrix must have determinant one");
}

Mobius Mobius::identity(const FieldPtr &F) {
    return Mobius(FieldElement(F, 1L), FieldElement(F), FieldElement(F), FieldElement(F, 1L));
}

Mobius Mobius::inverse() const { return Mobius(d_, -b_, -c_, a_); }

Mobius Mobius::operator*(const Mobius &o) const {
    return Mobius(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_, c_ * o.a_ + d_ * o.c_,
                  c_ * o.b_ + d_ * o.d_);
}

Mobius Mobius::operator-() const { return Mobius(-a_, -b_, -c_, -d_); }

Mobius Mobius::canonical() const {
    for (const FieldElement *e : {&a_, &b_, &c_, &d_}) {
        int s = e->sign();
        if (s > 0)
            return *this;
        if (s < 0)
            return -*this;
    }
    return *this;
}

bool Mobius::projectively_equal(const Mobius &o) const { return canonical() == o.canonical(); }

bool Mobius::operator==(const Mobius &o) const {
    return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_;
}

AlgMatrix Mobius::to_alg() const {
    return AlgMatrix{AlgInt::from_field(a_), AlgInt::from_field(b_), AlgInt::from_field(c_),
                     AlgInt::from_field(d_)};
}

std::string Mobius::str() const {
    return "[[" + a_.pretty() + ", " + b_.pretty() + "], [" + c_.pretty() + ", " + d_.pretty() +
           "]]";
}

Mobius pow(const Mobius &M, long e) {
    Mobius base = e < 0 ? M.inverse() : M;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Mobius r = Mobius::identity(M.field());
    while (k) {
        if (k & 1)
            r = r * base;
        k >>= 1;
        if (k)
            base = base * base;
    }
    return r;
}

bool is_infinity(const ExtendedPoint &p) { return std::holds_alternative<Infinity>(p); }

FieldElement apply(const Mobius &M, const FieldElement &x) {
    FieldElement den = M.c() * x + M.d();
    if (den.is_zero())
        throw DomainError("Mobius image is the point at infinity");
    return (M.a() * x + M.b()) / den;
}

Interval apply(const Mobius &M, const Interval &x, mpfr_prec_t w) {
    long bits = static_cast<long>(w);
    Interval a = M.a().enclose(bits), b = M.b().enclose(bits);
    Interval c = M.c().enclose(bits), d = M.d().enclose(bits);
    Interval num(w), den(w);
    mul(num, a, x);
    add(num, num, b);
    mul(den, c, x);
    add(den, den, d);
    if (den.contains_zero())
        throw PrecisionExhausted("pole of Mobius map", w);
    Interval r(w);
    div(r, num, den);
    return r;
}

ExtendedPoint apply(const Mobius &M, const ExtendedPoint &x) {
    if (is_infinity(x)) {
        if (M.c().is_zero())
            return Infinity{};
        return M.a() / M.c();
    }
    if (const auto *e = std::get_if<FieldElement>(&x)) {
        FieldElement den = M.c() * *e + M.d();
        if (den.is_zero())
            return Infinity{};
        return (M.a() * *e + M.b()) / den;
    }
    const Interval &v = std::get<Interval>(x);
    return tcf::apply(M, v, v.precision());
}

Mobius y_companion(const Mobius &M) { return Mobius(M.d(), -M.c(), -M.b(), M.a()); }

Generators generators(const FieldPtr &F) {
    FieldElement one(F, 1L), zero(F);
    FieldElement lam = FieldElement::lambda(F);
    FieldElement tau = FieldElement::tau(F);
    FieldElement t2 = tau * tau;
    Mobius A(one, tau, zero, one);
    Mobius B(lam, one, -one, zero);
    Mobius C(one, -one, one, zero);
    Mobius W(t2 + 1, t2 * tau, -tau, 1 - t2);
    return Generators{A, B, C, W};
}

Mobius M_k(const FieldPtr &F, std::int64_t k) {
    FieldElement tau = FieldElement::tau(F);
    return Mobius(1 - tau * static_cast<long>(k), FieldElement(F, -1L), FieldElement(F, 1L),
                  FieldElement(F));
}

Mobius N_k(const FieldPtr &F, std::int64_t k) {
    FieldElement tau = FieldElement::tau(F);
    return Mobius(FieldElement(F), FieldElement(F, -1L), FieldElement(F, 1L),
                  1 - tau * static_cast<long>(k));
}

Mobius W_power(const FieldPtr &F, std::int64_t j) {
    FieldElement tau = FieldElement::tau(F);
    FieldElement t2 = tau * tau;
    long jj = static_cast<long>(j);
    return Mobius(1 + t2 * jj, t2 * tau * jj, tau * (-jj), 1 - t2 * jj);
}

Mobius power_B(const FieldPtr &F, long j) {
    Mobius B = generators(F).B;
    Mobius step = j < 0 ? B.inverse() : B;
    Mobius r = Mobius::identity(F);
    for (long i = 0; i < (j < 0 ? -j : j); ++i)
        r = r * step;
    return r;
}

FieldElement b_sequence(const FieldPtr &F, long k) {
    if (k < 0)
        return -b_sequence(F, -k);
    FieldElement lam = FieldElement::lambda(F);
    FieldElement prev(F), cur(F, 1L);
    if (k == 0)
        return prev;
    for (long i = 1; i < k; ++i) {
        FieldElement next = lam * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

namespace {

struct NumMat {
    Interval a, b, c, d;
};

NumMat num_mul(const NumMat &x, const NumMat &y) {
    return NumMat{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                  x.c * y.b + x.d * y.d};
}

// Upper bound on max |x_ij - m_ij| over the entries.
double entry_gap(const NumMat &x, const Mobius &M, long bits) {
    const Interval *xs[4] = {&x.a, &x.b, &x.c, &x.d};
    const FieldElement *ms[4] = {&M.a(), &M.b(), &M.c(), &M.d()};
    double worst = 0;
    for (int i = 0; i < 4; ++i) {
        Interval m = ms[i]->is_zero() ? Interval(bits) : ms[i]->enclose(bits);
        Interval diff = abs(*xs[i] - m);
        worst = std::max(worst, diff.hi_d());
    }
    return worst;
}

}

Report ward_conjugation_check(const FieldPtr &F, long precision) {
    Report r;
    mpfr_prec_t w = precision + 32;
    long n = F->n();
    Interval pi = Interval::pi(w);
    Interval t = pi;
    mpfr_div_ui(t.lo(), pi.lo(), n, MPFR_RNDD);
    mpfr_div_ui(t.hi(), pi.hi(), n, MPFR_RNDU);
    Interval t2 = pi;
    mpfr_div_ui(t2.lo(), pi.lo(), 2 * n, MPFR_RNDD);
    mpfr_div_ui(t2.hi(), pi.hi(), 2 * n, MPFR_RNDU);
    Interval c = cos_0pi(t), s = sin_0pi(t);
    Interval cot1 = c / s;
    Interval cot2 = cos_0pi(t2) / sin_0pi(t2);
    Interval one = Interval::from_si(1, w), zero(w);
    NumMat P{one, c, zero, s};
    NumMat Pinv{one, -(c / s), zero, one / s};
    NumMat sigma{one, cot2 + cot1, zero, one};
    // Clockwise rotation by pi/n.
    NumMat beta{c, s, -s, c};
    NumMat id{one, zero, zero, one};
    Generators G = generators(F);
    double tol = std::ldexp(1.0, -static_cast<int>(precision / 2));
    double ga = entry_gap(num_mul(num_mul(Pinv, sigma), P), G.A, w);
    double gb = entry_gap(num_mul(num_mul(Pinv, beta), P), G.B, w);
    double gi = entry_gap(num_mul(num_mul(Pinv, id), P), Mobius::identity(F), w);
    r.add("ward: P^-1 sigma_n P = A", "conjugation of the Ward generators", ga <= tol,
          "max entry gap " + std::to_string(ga));
    r.add("ward: P^-1 beta_n P = B", "conjugation of the Ward generators", gb <= tol,
          "max entry gap " + std::to_string(gb));
    r.add("ward: identity conjugates to identity", "conjugation", gi <= tol);
    return r;
}

Report relations_check(const FieldPtr &F) {
    Report r;
    Generators G = generators(F);
    const Mobius &A = G.A, &B = G.B, &C = G.C, &W = G.W;
    int n = F->n();
    Mobius I = Mobius::identity(F);
    FieldElement tau = FieldElement::tau(F);

    r.add("AB = -C", "generator relation", A * B == -C);
    Mobius Bn = power_B(F, n);
    r.add("B^n = Id projectively", "order of B", Bn.projectively_equal(I), "B^n = " + Bn.str());
    r.add("B^n = -Id exactly", "order of B", Bn == -I);

    Mobius Ainv = A.inverse();
    Mobius AC1 = Ainv * C;
    Mobius AC2 = Ainv * Ainv * C;
    Mobius W1 = AC2 * pow(AC1, n - 3) * AC2 * pow(AC1, n - 2);
    Mobius Binv = B.inverse();
    Mobius W2 = Ainv * Binv * Binv * Ainv * Binv;
    r.add("W = A^-2C (A^-1C)^(n-3) A^-2C (A^-1C)^(n-2)", "parabolic W, word form",
          W1.projectively_equal(W), "word = " + W1.str());
    r.add("W = A^-1 B^-2 A^-1 B^-1", "parabolic W, B form", W2.projectively_equal(W),
          "word = " + W2.str());
    r.add("W = A^-1 B^-2 A^-1 B^-1 exactly", "parabolic W, B form", W2 == W);
    r.add("W has trace 2", "parabolic W", W.trace() == FieldElement(F, 2L));
    ExtendedPoint fixed = tcf::apply(W, ExtendedPoint(-tau));
    r.add("W(-tau) = -tau", "parabolic fixed point",
          !is_infinity(fixed) && std::get<FieldElement>(fixed) == -tau);

    FieldElement zero(F), one(F, 1L);
    r.add("B(0) = inf", "standard form cusps", is_infinity(tcf::apply(B, ExtendedPoint(zero))));
    ExtendedPoint c_inf = tcf::apply(C, ExtendedPoint(Infinity{}));
    r.add("C(inf) = 1", "standard form cusps",
          !is_infinity(c_inf) && std::get<FieldElement>(c_inf) == one);
    r.add("A(inf) = inf", "standard form cusps", is_infinity(tcf::apply(A, ExtendedPoint(Infinity{}))));

    bool closed = true;
    for (long j = -2 * n; j <= 2 * n && closed; ++j) {
        Mobius Bj = power_B(F, j);
        Mobius want(b_sequence(F, j + 1), b_sequence(F, j), -b_sequence(F, j),
                    -b_sequence(F, j - 1));
        closed = Bj == want;
    }
    r.add("B^j = [[B_{j+1}, B_j], [-B_j, -B_{j-1}]] for |j| <= 2n", "powers of B", closed);
    r.add("B_n = 0", "B_k sequence", b_sequence(F, n).is_zero());

    bool sines = true;
    {
        long bits = 80;
        mpfr_prec_t w = 120;
        Interval pi = Interval::pi(w);
        Interval base(w);
        mpfr_div_ui(base.lo(), pi.lo(), n, MPFR_RNDD);
        mpfr_div_ui(base.hi(), pi.hi(), n, MPFR_RNDU);
        Interval s1 = sin_0pi(base);
        for (long k = 0; k <= n; ++k) {
            Interval ang(w);
            mpfr_mul_ui(ang.lo(), base.lo(), k, MPFR_RNDD);
            mpfr_mul_ui(ang.hi(), base.hi(), k, MPFR_RNDU);
            Interval want = sin_0pi(ang) / s1;
            FieldElement bk = b_sequence(F, k);
            Interval got = bk.is_zero() ? Interval(w) : bk.enclose(bits);
            sines = sines && abs(got - want).hi_d() < 1e-20;
        }
    }
    r.add("B_k = sin(k pi/n)/sin(pi/n)", "B_k sequence", sines);

    if (n % 2 == 0) {
        // B^{n/2} against [[-cot, -csc], [csc, cot]] of pi/n, up to sign.
        mpfr_prec_t w = 120;
        Interval pi = Interval::pi(w);
        Interval t(w);
        mpfr_div_ui(t.lo(), pi.lo(), n, MPFR_RNDD);
        mpfr_div_ui(t.hi(), pi.hi(), n, MPFR_RNDU);
        Interval cot = cos_0pi(t) / sin_0pi(t);
        Interval csc = Interval::from_si(1, w) / sin_0pi(t);
        Mobius H = power_B(F, n / 2);
        NumMat want{-cot, -csc, csc, cot};
        NumMat want_neg{cot, csc, -csc, -cot};
        double g1 = entry_gap(want, H, 100), g2 = entry_gap(want_neg, H, 100);
        r.add("B^(n/2) = [[-cot, -csc], [csc, cot]] projectively", "even n half turn",
              std::min(g1, g2) < 1e-20);
    }
    return r;
}

namespace {

Mobius random_word(const Generators &G, std::mt19937_64 &rng, int len) {
    Mobius gens[6] = {G.A, G.A.inverse(), G.B, G.B.inverse(), G.C, G.C.inverse()};
    Mobius w = Mobius::identity(G.A.field());
    std::uniform_int_distribution<int> pick(0, 5);
    for (int i = 0; i < len; ++i)
        w = w * gens[pick(rng)];
    return w;
}

}

Report domination_check(const FieldPtr &F, int words, std::uint64_t seed) {
    Report r;
    Generators G = generators(F);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len(2, 14);
    int tested = 0, attempts = 0, bad = 0;
    std::string witness;
    while (tested < words && attempts < 50 * words) {
        ++attempts;
        Mobius w = random_word(G, rng, len(rng));
        FieldElement tr = w.trace();
        Interval t = tr.is_zero() ? Interval(64) : abs(tr.enclose(64));
        if (!(mpfr_cmp_ui(t.lo(), 2) > 0))
            continue;
        ++tested;
        for (int k : F->conjugate_ks()) {
            if (k == 1)
                continue;
            Interval s = abs(tr.enclose_conjugate(k, 64));
            if (!mpfr_lessequal_p(s.hi(), t.lo()) && !tr.is_rational()) {
                ++bad;
                if (witness.empty())
                    witness = w.str();
            }
        }
    }
    r.add("domination of conjugates on " + std::to_string(tested) + " hyperbolic words",
          "trace domination", bad == 0 && tested == words,
          bad ? "witness " + witness : "tested " + std::to_string(tested));
    return r;
}

Report inverses_action_check(const FieldPtr &F, int samples, std::uint64_t seed) {
    Report r;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
    int d = F->degree();
    auto random_elem = [&]() {
        std::vector<mpq_class> c(d);
        for (auto &q : c) {
            q = mpq_class(num(rng), den(rng));
            q.canonicalize();
        }
        return FieldElement(F, std::move(c));
    };
    bool ok = true;
    FieldElement one(F, 1L);
    for (int i = 0; i < samples && ok; ++i) {
        FieldElement a = random_elem();
        long bsign = (i % 2) ? 1 : -1;
        Mobius M(a, one * bsign, one * (-bsign), FieldElement(F));
        FieldElement x = random_elem();
        if (x.is_zero())
            continue;
        ExtendedPoint lhs = tcf::apply(M, ExtendedPoint(x));
        ExtendedPoint inner = tcf::apply(M.inverse(), ExtendedPoint(x.inverse()));
        if (is_infinity(inner)) {
            ok = !is_infinity(lhs) && std::get<FieldElement>(lhs).is_zero();
            continue;
        }
        if (is_infinity(lhs) || std::get<FieldElement>(inner).is_zero()) {
            ok = is_infinity(lhs) && std::get<FieldElement>(inner).is_zero();
            continue;
        }
        ok = std::get<FieldElement>(lhs) == std::get<FieldElement>(inner).inverse();
    }
    r.add("M x = 1/(M^-1 (1/x)) for M = [[a, b], [-b, 0]]", "inverse action lemma", ok);
    return r;
}

}
