#include "tcf/quadratic.hpp"

#include "tcf/errors.hpp"

#include <cmath>

namespace tcf {

QuadPtr make_quad_field(const FieldElement &D) {
    if (D.sign() <= 0)
        throw DomainError("quadratic extension needs a positive radicand");
    return std::make_shared<const QuadField>(QuadField{D.field(), D});
}

QuadElement::QuadElement(QuadPtr Q, FieldElement a, FieldElement b)
    : Q_(std::move(Q)), a_(std::move(a)), b_(std::move(b)) {}

QuadElement::QuadElement(QuadPtr Q, const FieldElement &a) : Q_(std::move(Q)), a_(a), b_(FieldElement(a.field())) {}

QuadElement QuadElement::conjugate() const { return {Q_, a_, -b_}; }

QuadElement QuadElement::inverse() const {
    FieldElement norm = a_ * a_ - b_ * b_ * Q_->D;
    if (norm.is_zero())
        throw DivisionByZero();
    FieldElement ni = norm.inverse();
    return {Q_, a_ * ni, -(b_ * ni)};
}

int QuadElement::sign() const {
    int sa = a_.sign(), sb = b_.sign();
    if (sb == 0)
        return sa;
    if (sa == 0 || sa == sb)
        return sb;
    // Opposite signs: compare a^2 with b^2 D.
    return sa * (a_ * a_ - b_ * b_ * Q_->D).sign();
}

Interval QuadElement::enclose(long rel_bits) const {
    if (is_zero())
        return Interval::from_si(0, static_cast<mpfr_prec_t>(rel_bits));
    for (long w = rel_bits + 32;; w *= 2) {
        Interval r = a_.enclose(w) + b_.enclose(w) * sqrt(Q_->D.enclose(w));
        if (r.accuracy_bits() >= rel_bits) {
            r.round_to(static_cast<mpfr_prec_t>(rel_bits + 8));
            return r;
        }
        if (w > (1L << 22))
            throw PrecisionExhausted("quadratic enclosure", w);
    }
}

double QuadElement::to_double() const { return enclose(64).mid_d(); }

QuadElement operator+(const QuadElement &x, const QuadElement &y) { return {x.quad(), x.a() + y.a(), x.b() + y.b()}; }
QuadElement operator-(const QuadElement &x, const QuadElement &y) { return {x.quad(), x.a() - y.a(), x.b() - y.b()}; }
QuadElement operator*(const QuadElement &x, const QuadElement &y) {
    return {x.quad(), x.a() * y.a() + x.b() * y.b() * x.quad()->D, x.a() * y.b() + x.b() * y.a()};
}
QuadElement operator/(const QuadElement &x, const QuadElement &y) { return x * y.inverse(); }
QuadElement operator-(const QuadElement &x) { return {x.quad(), -x.a(), -x.b()}; }
QuadElement operator+(const QuadElement &x, const FieldElement &c) { return {x.quad(), x.a() + c, x.b()}; }
QuadElement operator*(const FieldElement &c, const QuadElement &x) { return {x.quad(), c * x.a(), c * x.b()}; }
bool operator==(const QuadElement &x, const QuadElement &y) { return x.a() == y.a() && x.b() == y.b(); }

int compare(const QuadElement &x, const FieldElement &c) { return (x + (-c)).sign(); }

QuadElement apply(const Mobius &M, const QuadElement &x) {
    QuadElement num = M.a() * x + M.b();
    QuadElement den = M.c() * x + M.d();
    return num / den;
}

namespace {

void require_in_I(const System &S, const QuadElement &x) {
    if (x.sign() >= 0 || compare(x, S.minus_tau()) < 0)
        throw DomainError("point outside [-tau, 0)");
}

bool in(const QuadElement &x, const std::pair<FieldElement, FieldElement> &c) {
    return compare(x, c.first) >= 0 && compare(x, c.second) < 0;
}

template <class Decide, class Cyl>
Digit decide_exactly(const QuadElement &x, Decide decide, Cyl cylinder) {
    for (long bits = 64;; bits *= 2) {
        try {
            Digit k = decide(x.enclose(bits));
            if (!in(x, cylinder(k)))
                throw ConsistencyError("enclosure and exact cylinder test disagree");
            return k;
        } catch (const PrecisionExhausted &) {
            if (bits > (1L << 20))
                throw;
        }
    }
}

}

Digit cylinder_of_g(const System &S, const QuadElement &x) {
    require_in_I(S, x);
    return decide_exactly(
        x, [&](const Interval &v) { return cylinder_of_g(S, v); }, [&](Digit k) { return S.g_cylinder(k); });
}

Digit cylinder_of_f(const System &S, const QuadElement &x) {
    require_in_I(S, x);
    if (compare(x, S.minus_tau()) == 0)
        return 1;
    return decide_exactly(
        x, [&](const Interval &v) { return cylinder_of_f(S, v); }, [&](Digit k) { return S.f_cylinder(k); });
}

std::pair<QuadElement, QuadElement> fixed_points(const Mobius &M) {
    FieldElement tr = M.a() + M.d();
    FieldElement D = tr * tr - 4;
    if (D.sign() <= 0)
        throw DomainError("fixed points of a non-hyperbolic element");
    if (M.c().is_zero())
        throw DomainError("fixed point at infinity");
    QuadPtr Q = make_quad_field(D);
    FieldElement inv2c = (M.c() * 2).inverse();
    FieldElement a = (M.a() - M.d()) * inv2c;
    QuadElement p(Q, a, inv2c), m(Q, a, -inv2c);
    return {p, m};
}

}
