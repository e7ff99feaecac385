#pragma once

#include "tcf/interval.hpp"

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace tcf {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/*
 * The real cyclotomic field K = Q(lambda), lambda = 2cos(pi/n), n >= 4.
 *
 * Elements are coefficient vectors in the power basis 1, lambda, ...,
 * lambda^(d-1).  The minimal polynomial is obtained from the 2n-th
 * cyclotomic polynomial by the substitution y = x + 1/x.
 */
class Field {
public:
    static FieldPtr build(int n);

    int n() const { return n_; }
    int degree() const { return d_; }
    // Monic, coefficients of y^0 .. y^d.
    const std::vector<mpz_class> &min_poly() const { return poly_; }
    std::string min_poly_string() const;

    // Enclosure of lambda with at least prec bits; cached and shared.
    const Interval &lambda(mpfr_prec_t prec) const;
    const Interval &tau(mpfr_prec_t prec) const;
    // The k with gcd(k, 2n) = 1, 0 < k < n; k = 1 is the identity embedding.
    const std::vector<int> &conjugate_ks() const { return ks_; }
    // 2cos(k pi/n).
    const Interval &lambda_conjugate(int k, mpfr_prec_t prec) const;

    Field(const Field &) = delete;
    Field &operator=(const Field &) = delete;

private:
    Field() = default;
    int n_ = 0;
    int d_ = 0;
    std::vector<mpz_class> poly_;
    std::vector<int> ks_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, mpfr_prec_t>, std::unique_ptr<Interval>> cache_;
    mutable std::map<mpfr_prec_t, std::unique_ptr<Interval>> tau_cache_;
};

FieldPtr build_field(int n);

// Integer coefficients of the 2n-th cyclotomic polynomial, constant term first.
std::vector<mpz_class> cyclotomic(int m);

struct Enclosure {
    mpq_class lo, hi;
};

class FieldElement {
public:
    FieldElement() = default;
    explicit FieldElement(FieldPtr F);
    FieldElement(FieldPtr F, std::vector<mpq_class> coeffs);
    FieldElement(FieldPtr F, const mpq_class &q);
    FieldElement(FieldPtr F, long v);

    static FieldElement lambda(FieldPtr F);
    static FieldElement tau(FieldPtr F);

    const FieldPtr &field() const { return F_; }
    const std::vector<mpq_class> &coeffs() const { return c_; }
    bool is_zero() const;
    bool is_rational() const;
    bool valid() const { return static_cast<bool>(F_); }

    FieldElement inverse() const;
    // Sign under lambda -> 2cos(pi/n).
    int sign() const;
    // Interval with at least rel_bits correct bits (exact zero gives [0, 0]).
    Interval enclose(long rel_bits) const;
    // Evaluate under lambda -> 2cos(k pi/n).
    Interval enclose_conjugate(int k, long rel_bits) const;
    Enclosure embed(long precision) const;
    double to_double() const;

    FieldElement &operator+=(const FieldElement &o);
    FieldElement &operator-=(const FieldElement &o);
    FieldElement &operator*=(const FieldElement &o);
    FieldElement &operator/=(const FieldElement &o);

    // "1/2 -3/4" style: coefficient list.
    std::string str() const;
    // Human readable polynomial in lambda.
    std::string pretty() const;

private:
    Interval eval_at(const Interval &lam, mpfr_prec_t w) const;
    FieldPtr F_;
    std::vector<mpq_class> c_;
};

FieldElement operator+(FieldElement a, const FieldElement &b);
FieldElement operator-(FieldElement a, const FieldElement &b);
FieldElement operator*(FieldElement a, const FieldElement &b);
FieldElement operator/(FieldElement a, const FieldElement &b);
FieldElement operator-(const FieldElement &a);
FieldElement operator+(FieldElement a, long b);
FieldElement operator-(FieldElement a, long b);
FieldElement operator*(FieldElement a, long b);
FieldElement operator+(long a, const FieldElement &b);
FieldElement operator-(long a, const FieldElement &b);
FieldElement operator*(long a, FieldElement b);
FieldElement operator/(long a, const FieldElement &b);
bool operator==(const FieldElement &a, const FieldElement &b);
bool operator!=(const FieldElement &a, const FieldElement &b);
// Order under the real embedding, decided exactly.
int compare(const FieldElement &a, const FieldElement &b);
bool operator<(const FieldElement &a, const FieldElement &b);
bool operator<=(const FieldElement &a, const FieldElement &b);
bool operator>(const FieldElement &a, const FieldElement &b);
bool operator>=(const FieldElement &a, const FieldElement &b);

int sign(const FieldElement &a);
Enclosure embed(const FieldElement &a, long precision);
std::vector<Enclosure> galois_conjugate_values(const FieldElement &a, long precision = 64);
FieldElement abs(const FieldElement &a);
// Exact floor and ceiling of a real embedding value.
mpz_class floor(const FieldElement &a);
mpz_class ceil(const FieldElement &a);
FieldElement pow(const FieldElement &a, unsigned e);

// Parse a rational literal: "p/q", "p", or a decimal such as "-1.25".
mpq_class parse_rational(const std::string &s);
std::string rational_string(const mpq_class &q);

}
