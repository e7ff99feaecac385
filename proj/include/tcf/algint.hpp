#pragma once

#include "tcf/field.hpp"

#include <gmpxx.h>

#include <vector>

namespace tcf {

// Element of Z[lambda] in the power basis.  Convergent matrices live here.
struct AlgInt {
    std::vector<mpz_class> c;

    AlgInt() = default;
    explicit AlgInt(int d) : c(d) {}
    static AlgInt from_field(const FieldElement &e);
    FieldElement to_field(const FieldPtr &F) const;
    bool is_zero() const;
    // Bit length of the largest coefficient.
    size_t bits() const;
};

// r = a * b reduced by the minimal polynomial; r must not alias a or b.
void mul_into(AlgInt &r, const AlgInt &a, const AlgInt &b, const Field &F);
void sub_into(AlgInt &r, const AlgInt &a, const AlgInt &b);
void add_into(AlgInt &r, const AlgInt &a, const AlgInt &b);
void neg_in_place(AlgInt &a);

// Horner evaluation at lambda with working precision w.
Interval eval(const AlgInt &a, const Field &F, mpfr_prec_t w);
// a*x + b for an interval x, evaluated at working precision w.
Interval eval_affine(const AlgInt &a, const AlgInt &b, const Interval &x, const Field &F,
                     mpfr_prec_t w);

struct AlgMatrix {
    AlgInt a, b, c, d;
    static AlgMatrix identity(int deg);
    bool operator==(const AlgMatrix &o) const;
};

// P <- M P in place.
void left_multiply(AlgMatrix &P, const AlgMatrix &M, const Field &F);

}
