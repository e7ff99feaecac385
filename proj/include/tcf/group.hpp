#pragma once

#include "tcf/algint.hpp"
#include "tcf/field.hpp"
#include "tcf/report.hpp"

#include <cstdint>
#include <variant>

namespace tcf {

struct Infinity {
    bool operator==(const Infinity &) const { return true; }
};

using ExtendedPoint = std::variant<FieldElement, Interval, Infinity>;

// Determinant-one matrix over K acting by fractional linear maps.
class Mobius {
public:
    Mobius(FieldElement a, FieldElement b, FieldElement c, FieldElement d);
    static Mobius identity(const FieldPtr &F);

    const FieldElement &a() const { return a_; }
    const FieldElement &b() const { return b_; }
    const FieldElement &c() const { return c_; }
    const FieldElement &d() const { return d_; }
    const FieldPtr &field() const { return a_.field(); }

    FieldElement trace() const { return a_ + d_; }
    Mobius inverse() const;
    Mobius operator*(const Mobius &o) const;
    Mobius operator-() const;
    // Representative with first nonzero entry positive.
    Mobius canonical() const;
    bool projectively_equal(const Mobius &o) const;
    bool operator==(const Mobius &o) const;
    bool operator!=(const Mobius &o) const { return !(*this == o); }

    // Integer-entry copy; entries must lie in Z[lambda].
    AlgMatrix to_alg() const;
    std::string str() const;

private:
    FieldElement a_, b_, c_, d_;
};

Mobius pow(const Mobius &M, long e);

ExtendedPoint apply(const Mobius &M, const ExtendedPoint &x);
// Exact action on a finite point; throws if the image is infinity.
FieldElement apply(const Mobius &M, const FieldElement &x);
// Enclosure of the action at working precision w; throws PrecisionExhausted if the pole is not excluded.
Interval apply(const Mobius &M, const Interval &x, mpfr_prec_t w);
bool is_infinity(const ExtendedPoint &p);

// y-coordinate companion S M S^-1 with S = [[0,-1],[1,0]].
Mobius y_companion(const Mobius &M);

struct Generators {
    Mobius A, B, C, W;
};

Generators generators(const FieldPtr &F);
// A^-k C = [[1 - k tau, -1], [1, 0]].
Mobius M_k(const FieldPtr &F, std::int64_t k);
// [[0, -1], [1, 1 - k tau]].
Mobius N_k(const FieldPtr &F, std::int64_t k);
// Closed form [[1 + j tau^2, j tau^3], [-j tau, 1 - j tau^2]].
Mobius W_power(const FieldPtr &F, std::int64_t j);
Mobius power_B(const FieldPtr &F, long j);
// B_0 = 0, B_1 = 1, B_{k+1} = lambda B_k - B_{k-1}.
FieldElement b_sequence(const FieldPtr &F, long k);

Report ward_conjugation_check(const FieldPtr &F, long precision = 53);
// Group relations, cusp checks, B^j closed form, W forms.
Report relations_check(const FieldPtr &F);
// |tr| >= |sigma(tr)| on random hyperbolic words in A, B, C.
Report domination_check(const FieldPtr &F, int words, std::uint64_t seed);
// M x = 1/(M^-1 (1/x)) for M = [[a, b], [-b, 0]] on random samples.
Report inverses_action_check(const FieldPtr &F, int samples, std::uint64_t seed);

}
