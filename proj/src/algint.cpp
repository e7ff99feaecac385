#include "tcf/algint.hpp"

#include "tcf/errors.hpp"

#include <algorithm>

namespace tcf {

AlgInt AlgInt::from_field(const FieldElement &e) {
    AlgInt r(static_cast<int>(e.coeffs().size()));
    for (size_t i = 0; i < r.c.size(); ++i) {
        const mpq_class &q = e.coeffs()[i];
        if (q.get_den() != 1)
            throw DomainError("element is not in Z[lambda]");
        r.c[i] = q.get_num();
    }
    return r;
}

FieldElement AlgInt::to_field(const FieldPtr &F) const {
    std::vector<mpq_class> q(c.size());
    for (size_t i = 0; i < c.size(); ++i)
        q[i] = c[i];
    return FieldElement(F, std::move(q));
}

bool AlgInt::is_zero() const {
    return std::all_of(c.begin(), c.end(), [](const mpz_class &z) { return z == 0; });
}

size_t AlgInt::bits() const {
    size_t b = 0;
    for (const auto &z : c)
        if (z != 0)
            b = std::max(b, mpz_sizeinbase(z.get_mpz_t(), 2));
    return b;
}

void mul_into(AlgInt &r, const AlgInt &a, const AlgInt &b, const Field &F) {
    int d = F.degree();
    const auto &m = F.min_poly();
    thread_local std::vector<mpz_class> t;
    t.resize(2 * d - 1);
    for (auto &z : t)
        z = 0;
    for (int i = 0; i < d; ++i) {
        if (a.c[i] == 0)
            continue;
        for (int j = 0; j < d; ++j)
            if (b.c[j] != 0)
                mpz_addmul(t[i + j].get_mpz_t(), a.c[i].get_mpz_t(), b.c[j].get_mpz_t());
    }
    for (int i = 2 * d - 2; i >= d; --i) {
        if (t[i] == 0)
            continue;
        for (int j = 0; j < d; ++j)
            if (m[j] != 0)
                mpz_submul(t[i - d + j].get_mpz_t(), t[i].get_mpz_t(), m[j].get_mpz_t());
        t[i] = 0;
    }
    r.c.resize(d);
    for (int i = 0; i < d; ++i)
        mpz_swap(r.c[i].get_mpz_t(), t[i].get_mpz_t());
}

void sub_into(AlgInt &r, const AlgInt &a, const AlgInt &b) {
    r.c.resize(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i)
        mpz_sub(r.c[i].get_mpz_t(), a.c[i].get_mpz_t(), b.c[i].get_mpz_t());
}

void add_into(AlgInt &r, const AlgInt &a, const AlgInt &b) {
    r.c.resize(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i)
        mpz_add(r.c[i].get_mpz_t(), a.c[i].get_mpz_t(), b.c[i].get_mpz_t());
}

void neg_in_place(AlgInt &a) {
    for (auto &z : a.c)
        mpz_neg(z.get_mpz_t(), z.get_mpz_t());
}

Interval eval(const AlgInt &a, const Field &F, mpfr_prec_t w) {
    int d = F.degree();
    const Interval &lam = F.lambda(w);
    Interval acc = Interval::from_z(a.c[d - 1], w);
    Interval t(w);
    for (int i = d - 2; i >= 0; --i) {
        mul(t, acc, lam);
        add_z(acc, t, a.c[i]);
    }
    return acc;
}

Interval eval_affine(const AlgInt &a, const AlgInt &b, const Interval &x, const Field &F,
                     mpfr_prec_t w) {
    Interval ea = eval(a, F, w);
    Interval eb = eval(b, F, w);
    Interval r(w);
    mul(r, ea, x);
    add(r, r, eb);
    return r;
}

AlgMatrix AlgMatrix::identity(int deg) {
    AlgMatrix m{AlgInt(deg), AlgInt(deg), AlgInt(deg), AlgInt(deg)};
    m.a.c[0] = 1;
    m.d.c[0] = 1;
    return m;
}

bool AlgMatrix::operator==(const AlgMatrix &o) const {
    return a.c == o.a.c && b.c == o.b.c && c.c == o.c.c && d.c == o.d.c;
}

void left_multiply(AlgMatrix &P, const AlgMatrix &M, const Field &F) {
    thread_local AlgInt t1, t2;
    AlgMatrix R;
    mul_into(t1, M.a, P.a, F);
    mul_into(t2, M.b, P.c, F);
    add_into(R.a, t1, t2);
    mul_into(t1, M.a, P.b, F);
    mul_into(t2, M.b, P.d, F);
    add_into(R.b, t1, t2);
    mul_into(t1, M.c, P.a, F);
    mul_into(t2, M.d, P.c, F);
    add_into(R.c, t1, t2);
    mul_into(t1, M.c, P.b, F);
    mul_into(t2, M.d, P.d, F);
    add_into(R.d, t1, t2);
    P = std::move(R);
}

}
