#include "tcf/interval.hpp"

#include "tcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace tcf {

Interval::Interval(mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval &o) {
    mpfr_init2(lo_, o.precision());
    mpfr_init2(hi_, o.precision());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval &&o) noexcept {
    // Steal the limbs; leave o as a valid minimal-precision zero.
    *lo_ = *o.lo_;
    *hi_ = *o.hi_;
    mpfr_init2(o.lo_, MPFR_PREC_MIN);
    mpfr_init2(o.hi_, MPFR_PREC_MIN);
    mpfr_set_zero(o.lo_, 1);
    mpfr_set_zero(o.hi_, 1);
}

Interval &Interval::operator=(const Interval &o) {
    if (this != &o) {
        mpfr_set_prec(lo_, o.precision());
        mpfr_set_prec(hi_, o.precision());
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval &Interval::operator=(Interval &&o) noexcept {
    if (this != &o) {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::from_q(const mpq_class &q, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_z(const mpz_class &z, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_z(r.lo_, z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, z.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_si(long v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::from_bounds(const mpq_class &lo, const mpq_class &hi, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

void Interval::round_to(mpfr_prec_t prec) {
    mpfr_prec_round(lo_, prec, MPFR_RNDD);
    mpfr_prec_round(hi_, prec, MPFR_RNDU);
}

double Interval::mid_d() const {
    double a = mpfr_get_d(lo_, MPFR_RNDN);
    double b = mpfr_get_d(hi_, MPFR_RNDN);
    return a + (b - a) / 2;
}

long double Interval::mid_ld() const {
    long double a = mpfr_get_ld(lo_, MPFR_RNDN);
    long double b = mpfr_get_ld(hi_, MPFR_RNDN);
    return a + (b - a) / 2;
}

static mpq_class to_q(mpfr_srcptr v) {
    if (!mpfr_number_p(v))
        throw DomainError("non-finite interval endpoint");
    mpq_class q;
    if (mpfr_zero_p(v))
        return q;
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v);
    q = m;
    if (e >= 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), e);
    else
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), -e);
    return q;
}

mpq_class Interval::lo_q() const { return to_q(lo_); }
mpq_class Interval::hi_q() const { return to_q(hi_); }

long Interval::accuracy_bits() const {
    if (contains_zero())
        return 0;
    mpfr_t w;
    mpfr_init2(w, 32);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    long bits;
    if (mpfr_zero_p(w)) {
        bits = precision() + 64;
    } else {
        mpfr_exp_t ew = mpfr_get_exp(w);
        mpfr_exp_t ev = std::min(mpfr_get_exp(lo_), mpfr_get_exp(hi_));
        bits = static_cast<long>(ev) - static_cast<long>(ew) - 1;
        if (bits < 0)
            bits = 0;
    }
    mpfr_clear(w);
    return bits;
}

double Interval::width_d() const {
    mpfr_t w;
    mpfr_init2(w, 53);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double r = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return r;
}

std::string Interval::str(int digits) const {
    char *a = nullptr;
    char *b = nullptr;
    mpfr_asprintf(&a, "%.*RDe", digits, lo_);
    mpfr_asprintf(&b, "%.*RUe", digits, hi_);
    std::string s = std::string("[") + a + ", " + b + "]";
    mpfr_free_str(a);
    mpfr_free_str(b);
    return s;
}

void add(Interval &r, const Interval &a, const Interval &b) {
    mpfr_add(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_add(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
}

void sub(Interval &r, const Interval &a, const Interval &b) {
    if (&r == &b) {
        Interval t(b);
        sub(r, a, t);
        return;
    }
    mpfr_sub(r.lo(), a.lo(), b.hi(), MPFR_RNDD);
    mpfr_sub(r.hi(), a.hi(), b.lo(), MPFR_RNDU);
}

void neg(Interval &r, const Interval &a) {
    if (&r == &a) {
        mpfr_swap(r.lo(), r.hi());
        mpfr_neg(r.lo(), r.lo(), MPFR_RNDD);
        mpfr_neg(r.hi(), r.hi(), MPFR_RNDU);
        return;
    }
    mpfr_neg(r.lo(), a.hi(), MPFR_RNDD);
    mpfr_neg(r.hi(), a.lo(), MPFR_RNDU);
}

namespace {

using BinOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Both operands of one sign: the result endpoints are known operand pairs.
void signed_endpoints(Interval &r, mpfr_srcptr lo_a, mpfr_srcptr lo_b, mpfr_srcptr hi_a, mpfr_srcptr hi_b,
                      BinOp op) {
    bool alias = lo_a == r.lo() || lo_a == r.hi() || lo_b == r.lo() || lo_b == r.hi() || hi_a == r.lo() ||
                 hi_a == r.hi() || hi_b == r.lo() || hi_b == r.hi();
    if (!alias) {
        op(r.lo(), lo_a, lo_b, MPFR_RNDD);
        op(r.hi(), hi_a, hi_b, MPFR_RNDU);
        return;
    }
    mpfr_t lo;
    mpfr_init2(lo, r.precision());
    op(lo, lo_a, lo_b, MPFR_RNDD);
    op(r.hi(), hi_a, hi_b, MPFR_RNDU);
    mpfr_swap(r.lo(), lo);
    mpfr_clear(lo);
}

}

void mul(Interval &r, const Interval &a, const Interval &b) {
    mpfr_prec_t p = r.precision();
    int sa = a.certain_sign(), sb = b.certain_sign();
    if (sa != 0 && sb != 0) {
        const mpfr_srcptr a1 = a.lo(), a2 = a.hi(), b1 = b.lo(), b2 = b.hi();
        if (sa > 0 && sb > 0)
            signed_endpoints(r, a1, b1, a2, b2, mpfr_mul);
        else if (sa > 0)
            signed_endpoints(r, a2, b1, a1, b2, mpfr_mul);
        else if (sb > 0)
            signed_endpoints(r, a1, b2, a2, b1, mpfr_mul);
        else
            signed_endpoints(r, a2, b2, a1, b1, mpfr_mul);
        return;
    }
    mpfr_t lo, hi, t;
    mpfr_inits2(p, lo, hi, t, (mpfr_ptr)nullptr);
    mpfr_srcptr xs[2] = {a.lo(), a.hi()};
    mpfr_srcptr ys[2] = {b.lo(), b.hi()};
    mpfr_mul(lo, xs[0], ys[0], MPFR_RNDD);
    mpfr_mul(hi, xs[0], ys[0], MPFR_RNDU);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (i == 0 && j == 0)
                continue;
            mpfr_mul(t, xs[i], ys[j], MPFR_RNDD);
            mpfr_min(lo, lo, t, MPFR_RNDD);
            mpfr_mul(t, xs[i], ys[j], MPFR_RNDU);
            mpfr_max(hi, hi, t, MPFR_RNDU);
        }
    }
    mpfr_set(r.lo(), lo, MPFR_RNDD);
    mpfr_set(r.hi(), hi, MPFR_RNDU);
    mpfr_clears(lo, hi, t, (mpfr_ptr)nullptr);
}

void inv(Interval &r, const Interval &a) {
    if (a.contains_zero())
        throw DivisionByZero();
    if (&r == &a) {
        mpfr_swap(r.lo(), r.hi());
        mpfr_ui_div(r.lo(), 1, r.lo(), MPFR_RNDD);
        mpfr_ui_div(r.hi(), 1, r.hi(), MPFR_RNDU);
        return;
    }
    mpfr_ui_div(r.lo(), 1, a.hi(), MPFR_RNDD);
    mpfr_ui_div(r.hi(), 1, a.lo(), MPFR_RNDU);
}

void div(Interval &r, const Interval &a, const Interval &b) {
    if (b.contains_zero())
        throw DivisionByZero();
    mpfr_prec_t p = r.precision();
    int sa = a.certain_sign(), sb = b.certain_sign();
    if (sa != 0) {
        const mpfr_srcptr a1 = a.lo(), a2 = a.hi(), b1 = b.lo(), b2 = b.hi();
        if (sa > 0 && sb > 0)
            signed_endpoints(r, a1, b2, a2, b1, mpfr_div);
        else if (sa > 0)
            signed_endpoints(r, a2, b2, a1, b1, mpfr_div);
        else if (sb > 0)
            signed_endpoints(r, a1, b1, a2, b2, mpfr_div);
        else
            signed_endpoints(r, a2, b1, a1, b2, mpfr_div);
        return;
    }
    mpfr_t lo, hi, t;
    mpfr_inits2(p, lo, hi, t, (mpfr_ptr)nullptr);
    mpfr_srcptr xs[2] = {a.lo(), a.hi()};
    mpfr_srcptr ys[2] = {b.lo(), b.hi()};
    mpfr_div(lo, xs[0], ys[0], MPFR_RNDD);
    mpfr_div(hi, xs[0], ys[0], MPFR_RNDU);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (i == 0 && j == 0)
                continue;
            mpfr_div(t, xs[i], ys[j], MPFR_RNDD);
            mpfr_min(lo, lo, t, MPFR_RNDD);
            mpfr_div(t, xs[i], ys[j], MPFR_RNDU);
            mpfr_max(hi, hi, t, MPFR_RNDU);
        }
    }
    mpfr_set(r.lo(), lo, MPFR_RNDD);
    mpfr_set(r.hi(), hi, MPFR_RNDU);
    mpfr_clears(lo, hi, t, (mpfr_ptr)nullptr);
}

void add_si(Interval &r, const Interval &a, long v) {
    mpfr_add_si(r.lo(), a.lo(), v, MPFR_RNDD);
    mpfr_add_si(r.hi(), a.hi(), v, MPFR_RNDU);
}

void add_z(Interval &r, const Interval &a, const mpz_class &v) {
    mpfr_add_z(r.lo(), a.lo(), v.get_mpz_t(), MPFR_RNDD);
    mpfr_add_z(r.hi(), a.hi(), v.get_mpz_t(), MPFR_RNDU);
}

void add_q(Interval &r, const Interval &a, const mpq_class &v) {
    mpfr_add_q(r.lo(), a.lo(), v.get_mpq_t(), MPFR_RNDD);
    mpfr_add_q(r.hi(), a.hi(), v.get_mpq_t(), MPFR_RNDU);
}

void mul_si(Interval &r, const Interval &a, long v) {
    if (v >= 0) {
        mpfr_mul_si(r.lo(), a.lo(), v, MPFR_RNDD);
        mpfr_mul_si(r.hi(), a.hi(), v, MPFR_RNDU);
    } else {
        Interval t(a);
        mpfr_mul_si(r.lo(), t.hi(), v, MPFR_RNDD);
        mpfr_mul_si(r.hi(), t.lo(), v, MPFR_RNDU);
    }
}

void mul_z(Interval &r, const Interval &a, const mpz_class &v) {
    if (sgn(v) >= 0) {
        mpfr_mul_z(r.lo(), a.lo(), v.get_mpz_t(), MPFR_RNDD);
        mpfr_mul_z(r.hi(), a.hi(), v.get_mpz_t(), MPFR_RNDU);
    } else {
        Interval t(a);
        mpfr_mul_z(r.lo(), t.hi(), v.get_mpz_t(), MPFR_RNDD);
        mpfr_mul_z(r.hi(), t.lo(), v.get_mpz_t(), MPFR_RNDU);
    }
}

static mpfr_prec_t pmax(const Interval &a, const Interval &b) {
    return std::max(a.precision(), b.precision());
}

Interval operator+(const Interval &a, const Interval &b) {
    Interval r(pmax(a, b));
    add(r, a, b);
    return r;
}

Interval operator-(const Interval &a, const Interval &b) {
    Interval r(pmax(a, b));
    sub(r, a, b);
    return r;
}

Interval operator*(const Interval &a, const Interval &b) {
    Interval r(pmax(a, b));
    mul(r, a, b);
    return r;
}

Interval operator/(const Interval &a, const Interval &b) {
    Interval r(pmax(a, b));
    div(r, a, b);
    return r;
}

Interval operator-(const Interval &a) {
    Interval r(a.precision());
    neg(r, a);
    return r;
}

Interval abs(const Interval &a) {
    if (a.positive())
        return a;
    if (a.negative())
        return -a;
    Interval r(a.precision());
    mpfr_set_zero(r.lo(), 1);
    mpfr_t t;
    mpfr_init2(t, a.precision());
    mpfr_neg(t, a.lo(), MPFR_RNDU);
    mpfr_max(r.hi(), t, a.hi(), MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

Interval sqrt(const Interval &a) {
    if (mpfr_sgn(a.lo()) < 0)
        throw DomainError("sqrt of an interval reaching below zero");
    Interval r(a.precision());
    mpfr_sqrt(r.lo(), a.lo(), MPFR_RNDD);
    mpfr_sqrt(r.hi(), a.hi(), MPFR_RNDU);
    return r;
}

Interval log(const Interval &a) {
    if (!a.positive())
        throw DomainError("log of a non-positive interval");
    Interval r(a.precision());
    mpfr_log(r.lo(), a.lo(), MPFR_RNDD);
    mpfr_log(r.hi(), a.hi(), MPFR_RNDU);
    return r;
}

Interval cos_0pi(const Interval &a) {
    // cos is decreasing on [0, pi].
    Interval r(a.precision());
    mpfr_cos(r.lo(), a.hi(), MPFR_RNDD);
    mpfr_cos(r.hi(), a.lo(), MPFR_RNDU);
    return r;
}

Interval sin_0pi(const Interval &a) {
    Interval r(a.precision());
    mpfr_t s1, s2;
    mpfr_inits2(a.precision(), s1, s2, (mpfr_ptr)nullptr);
    mpfr_sin(s1, a.lo(), MPFR_RNDD);
    mpfr_sin(s2, a.hi(), MPFR_RNDD);
    mpfr_min(r.lo(), s1, s2, MPFR_RNDD);
    mpfr_sin(s1, a.lo(), MPFR_RNDU);
    mpfr_sin(s2, a.hi(), MPFR_RNDU);
    mpfr_max(r.hi(), s1, s2, MPFR_RNDU);
    // The maximum 1 is attained at pi/2.
    Interval half_pi = Interval::pi(a.precision());
    mpfr_div_2ui(half_pi.lo(), half_pi.lo(), 1, MPFR_RNDD);
    mpfr_div_2ui(half_pi.hi(), half_pi.hi(), 1, MPFR_RNDU);
    if (mpfr_lessequal_p(a.lo(), half_pi.hi()) && mpfr_greaterequal_p(a.hi(), half_pi.lo()))
        mpfr_set_ui(r.hi(), 1, MPFR_RNDU);
    mpfr_clears(s1, s2, (mpfr_ptr)nullptr);
    return r;
}

bool certainly_less(const Interval &a, const Interval &b) {
    return mpfr_less_p(a.hi(), b.lo());
}

Interval hull(const Interval &a, const Interval &b) {
    Interval r(pmax(a, b));
    mpfr_min(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_max(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
    return r;
}

}
