#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace tcf {

// Closed real interval with MPFR endpoints, always rounded outward.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 64);
    Interval(const Interval &o);
    Interval(Interval &&o) noexcept;
    Interval &operator=(const Interval &o);
    Interval &operator=(Interval &&o) noexcept;
    ~Interval();

    static Interval from_q(const mpq_class &q, mpfr_prec_t prec);
    static Interval from_z(const mpz_class &z, mpfr_prec_t prec);
    static Interval from_si(long v, mpfr_prec_t prec);
    static Interval from_bounds(const mpq_class &lo, const mpq_class &hi, mpfr_prec_t prec);
    static Interval pi(mpfr_prec_t prec);

    mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
    // Re-round both endpoints outward to a new precision.
    void round_to(mpfr_prec_t prec);

    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }
    mpfr_ptr lo() { return lo_; }
    mpfr_ptr hi() { return hi_; }

    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_d() const;
    long double mid_ld() const;
    mpq_class lo_q() const;
    mpq_class hi_q() const;

    bool positive() const { return mpfr_sgn(lo_) > 0; }
    bool negative() const { return mpfr_sgn(hi_) < 0; }
    bool contains_zero() const { return !positive() && !negative(); }
    // +1 / -1 when certain, 0 when the interval straddles zero.
    int certain_sign() const { return positive() ? 1 : (negative() ? -1 : 0); }

    // Number of correct leading bits relative to the magnitude (0 if it straddles 0).
    long accuracy_bits() const;
    double width_d() const;

    std::string str(int digits = 20) const;

private:
    mpfr_t lo_, hi_;
};

void add(Interval &r, const Interval &a, const Interval &b);
void sub(Interval &r, const Interval &a, const Interval &b);
void mul(Interval &r, const Interval &a, const Interval &b);
void div(Interval &r, const Interval &a, const Interval &b);
void inv(Interval &r, const Interval &a);
void neg(Interval &r, const Interval &a);
void add_si(Interval &r, const Interval &a, long v);
void mul_si(Interval &r, const Interval &a, long v);
void mul_z(Interval &r, const Interval &a, const mpz_class &v);
void add_z(Interval &r, const Interval &a, const mpz_class &v);
void add_q(Interval &r, const Interval &a, const mpq_class &v);

Interval operator+(const Interval &a, const Interval &b);
Interval operator-(const Interval &a, const Interval &b);
Interval operator*(const Interval &a, const Interval &b);
Interval operator/(const Interval &a, const Interval &b);
Interval operator-(const Interval &a);

Interval abs(const Interval &a);
Interval sqrt(const Interval &a);
Interval log(const Interval &a);
// cos on an interval contained in [0, pi].
Interval cos_0pi(const Interval &a);
Interval sin_0pi(const Interval &a);

bool certainly_less(const Interval &a, const Interval &b);
Interval hull(const Interval &a, const Interval &b);

}
