#include "tcf/field.hpp"

#include "tcf/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace tcf {

namespace {

using Poly = std::vector<mpz_class>;

void trim(Poly &p) {
    while (p.size() > 1 && p.back() == 0)
        p.pop_back();
}

// Exact division of integer polynomials; the divisor is monic.
Poly divide_monic(const Poly &a, const Poly &b) {
    Poly r = a;
    int db = static_cast<int>(b.size()) - 1;
    int da = static_cast<int>(r.size()) - 1;
    if (da < db)
        return Poly{0};
    Poly q(da - db + 1);
    for (int i = da; i >= db; --i) {
        mpz_class c = r[i];
        q[i - db] = c;
        if (c == 0)
            continue;
        for (int j = 0; j <= db; ++j)
            r[i - db + j] -= c * b[j];
    }
    for (int i = 0; i < db; ++i)
        if (r[i] != 0)
            throw ConsistencyError("cyclotomic division left a remainder");
    return q;
}

mpfr_prec_t bucket(mpfr_prec_t prec) {
    mpfr_prec_t b = 64;
    while (b < prec)
        b *= 2;
    return b;
}

}

std::vector<mpz_class> cyclotomic(int m) {
    if (m < 1)
        throw DomainError("cyclotomic index must be positive");
    // x^m - 1 divided by Phi_e for every proper divisor e of m.
    Poly p(m + 1);
    p[0] = -1;
    p[m] = 1;
    for (int e = 1; e < m; ++e)
        if (m % e == 0)
            p = divide_monic(p, cyclotomic(e));
    trim(p);
    return p;
}

FieldPtr Field::build(int n) {
    if (n < 4)
        throw DomainError("n must be at least 4, got " + std::to_string(n));
    std::shared_ptr<Field> F(new Field());
    F->n_ = n;
    Poly phi = cyclotomic(2 * n);
    int D = (static_cast<int>(phi.size()) - 1) / 2;
    for (int k = 0; k <= 2 * D; ++k)
        if (phi[k] != phi[2 * D - k])
            throw ConsistencyError("cyclotomic polynomial is not palindromic");
    // x^-D Phi(x) = c_D + sum_k c_{D+k} C_k(y), C_k(x + 1/x) = x^k + x^-k.
    std::vector<Poly> C(D + 1);
    C[0] = Poly{2};
    if (D >= 1)
        C[1] = Poly{0, 1};
    for (int k = 2; k <= D; ++k) {
        Poly next(k + 1);
        for (size_t i = 0; i < C[k - 1].size(); ++i)
            next[i + 1] += C[k - 1][i];
        for (size_t i = 0; i < C[k - 2].size(); ++i)
            next[i] -= C[k - 2][i];
        C[k] = next;
    }
    Poly P(D + 1);
    P[0] = phi[D];
    for (int k = 1; k <= D; ++k)
        for (size_t i = 0; i < C[k].size(); ++i)
            P[i] += phi[D + k] * C[k][i];
    trim(P);
    if (P.back() != 1 || static_cast<int>(P.size()) != D + 1)
        throw ConsistencyError("minimal polynomial is not monic of the expected degree");
    F->poly_ = P;
    F->d_ = D;
    for (int k = 1; k < n; ++k)
        if (std::gcd(k, 2 * n) == 1)
            F->ks_.push_back(k);
    if (static_cast<int>(F->ks_.size()) != D)
        throw ConsistencyError("embedding count differs from the degree");

    // min_poly(2cos(pi/n)) must vanish to working precision, and not at other cosines.
    const Interval &lam = F->lambda(256);
    Interval acc = Interval::from_z(P[D], 256);
    for (int i = D - 1; i >= 0; --i) {
        acc = acc * lam;
        add_z(acc, acc, P[i]);
    }
    if (!acc.contains_zero() || acc.width_d() > 1e-60)
        throw ConsistencyError("minimal polynomial does not vanish at 2cos(pi/n)");
    return F;
}

FieldPtr build_field(int n) { return Field::build(n); }

std::string Field::min_poly_string() const {
    std::ostringstream os;
    bool first = true;
    for (int i = d_; i >= 0; --i) {
        const mpz_class &c = poly_[i];
        if (c == 0)
            continue;
        mpz_class a = abs(c);
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        if (a != 1 || i == 0)
            os << a.get_str();
        if (i >= 1)
            os << "x";
        if (i >= 2)
            os << "^" << i;
        first = false;
    }
    return os.str();
}

const Interval &Field::lambda_conjugate(int k, mpfr_prec_t prec) const {
    mpfr_prec_t b = bucket(prec);
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(k, b);
    auto it = cache_.find(key);
    if (it != cache_.end())
        return *it->second;
    mpfr_prec_t w = b + 32;
    Interval angle = Interval::pi(w);
    mpfr_mul_ui(angle.lo(), angle.lo(), static_cast<unsigned long>(k), MPFR_RNDD);
    mpfr_mul_ui(angle.hi(), angle.hi(), static_cast<unsigned long>(k), MPFR_RNDU);
    mpfr_div_ui(angle.lo(), angle.lo(), static_cast<unsigned long>(n_), MPFR_RNDD);
    mpfr_div_ui(angle.hi(), angle.hi(), static_cast<unsigned long>(n_), MPFR_RNDU);
    Interval c = cos_0pi(angle);
    mpfr_mul_2ui(c.lo(), c.lo(), 1, MPFR_RNDD);
    mpfr_mul_2ui(c.hi(), c.hi(), 1, MPFR_RNDU);
    auto p = std::make_unique<Interval>(std::move(c));
    const Interval &ref = *p;
    cache_.emplace(key, std::move(p));
    return ref;
}

const Interval &Field::lambda(mpfr_prec_t prec) const { return lambda_conjugate(1, prec); }

const Interval &Field::tau(mpfr_prec_t prec) const {
    const Interval &lam = lambda(prec);
    mpfr_prec_t b = bucket(prec);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = tau_cache_.find(b);
    if (it != tau_cache_.end())
        return *it->second;
    auto p = std::make_unique<Interval>(lam.precision());
    add_si(*p, lam, 1);
    const Interval &ref = *p;
    tau_cache_.emplace(b, std::move(p));
    return ref;
}

FieldElement::FieldElement(FieldPtr F) : F_(std::move(F)), c_(F_->degree()) {}

FieldElement::FieldElement(FieldPtr F, std::vector<mpq_class> coeffs)
    : F_(std::move(F)), c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != F_->degree())
        throw DomainError("coefficient vector length differs from field degree");
    for (auto &c : c_)
        c.canonicalize();
}

FieldElement::FieldElement(FieldPtr F, const mpq_class &q) : FieldElement(std::move(F)) {
    c_[0] = q;
    c_[0].canonicalize();
}

FieldElement::FieldElement(FieldPtr F, long v) : FieldElement(std::move(F)) { c_[0] = v; }

FieldElement FieldElement::lambda(FieldPtr F) {
    FieldElement e(F);
    if (F->degree() == 1) {
        // n = 6 would never give degree one, but keep the rational case coherent.
        e.c_[0] = -F->min_poly()[0];
    } else {
        e.c_[1] = 1;
    }
    return e;
}

FieldElement FieldElement::tau(FieldPtr F) { return lambda(F) + 1; }

bool FieldElement::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const mpq_class &q) { return q == 0; });
}

bool FieldElement::is_rational() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](const mpq_class &q) { return q == 0; });
}

static void check_same(const FieldElement &a, const FieldElement &b) {
    if (a.field() != b.field())
        throw DomainError("field elements from different fields");
}

FieldElement &FieldElement::operator+=(const FieldElement &o) {
    check_same(*this, o);
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] += o.c_[i];
    return *this;
}

FieldElement &FieldElement::operator-=(const FieldElement &o) {
    check_same(*this, o);
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] -= o.c_[i];
    return *this;
}

FieldElement &FieldElement::operator*=(const FieldElement &o) {
    check_same(*this, o);
    int d = F_->degree();
    const auto &m = F_->min_poly();
    std::vector<mpq_class> r(2 * d - 1);
    for (int i = 0; i < d; ++i) {
        if (c_[i] == 0)
            continue;
        for (int j = 0; j < d; ++j)
            if (o.c_[j] != 0)
                r[i + j] += c_[i] * o.c_[j];
    }
    for (int i = 2 * d - 2; i >= d; --i) {
        if (r[i] == 0)
            continue;
        mpq_class c = r[i];
        r[i] = 0;
        for (int j = 0; j < d; ++j)
            if (m[j] != 0)
                r[i - d + j] -= c * m[j];
    }
    r.resize(d);
    c_ = std::move(r);
    return *this;
}

FieldElement FieldElement::inverse() const {
    if (is_zero())
        throw DivisionByZero();
    int d = F_->degree();
    // Columns are this * lambda^i; solve M x = e_0.
    std::vector<std::vector<mpq_class>> M(d, std::vector<mpq_class>(d + 1));
    FieldElement col = *this;
    FieldElement lam = lambda(F_);
    for (int i = 0; i < d; ++i) {
        for (int r = 0; r < d; ++r)
            M[r][i] = col.c_[r];
        if (i + 1 < d)
            col *= lam;
    }
    M[0][d] = 1;
    for (int c = 0; c < d; ++c) {
        int piv = c;
        while (piv < d && M[piv][c] == 0)
            ++piv;
        if (piv == d)
            throw ConsistencyError("singular multiplication matrix for a nonzero element");
        std::swap(M[piv], M[c]);
        mpq_class p = M[c][c];
        for (int k = c; k <= d; ++k)
            M[c][k] /= p;
        for (int r = 0; r < d; ++r) {
            if (r == c || M[r][c] == 0)
                continue;
            mpq_class f = M[r][c];
            for (int k = c; k <= d; ++k)
                M[r][k] -= f * M[c][k];
        }
    }
    std::vector<mpq_class> x(d);
    for (int r = 0; r < d; ++r)
        x[r] = M[r][d];
    return FieldElement(F_, std::move(x));
}

FieldElement &FieldElement::operator/=(const FieldElement &o) { return *this *= o.inverse(); }

Interval FieldElement::eval_at(const Interval &lam, mpfr_prec_t w) const {
    int d = F_->degree();
    Interval acc = Interval::from_q(c_[d - 1], w);
    for (int i = d - 2; i >= 0; --i) {
        Interval t(w);
        mul(t, acc, lam);
        add_q(acc, t, c_[i]);
    }
    return acc;
}

Interval FieldElement::enclose_conjugate(int k, long rel_bits) const {
    if (is_zero())
        return Interval(64);
    if (is_rational()) {
        Interval r = Interval::from_q(c_[0], std::max<long>(rel_bits + 8, 64));
        return r;
    }
    mpfr_prec_t w = std::max<long>(rel_bits + 32, 64);
    for (;;) {
        const Interval &lam = F_->lambda_conjugate(k, w);
        Interval v = eval_at(lam, w);
        if (v.accuracy_bits() >= rel_bits)
            return v;
        if (w > (1L << 24))
            throw PrecisionExhausted("field element evaluation", w);
        w *= 2;
    }
}

Interval FieldElement::enclose(long rel_bits) const { return enclose_conjugate(1, rel_bits); }

int FieldElement::sign() const {
    if (is_zero())
        return 0;
    if (is_rational())
        return sgn(c_[0]);
    return enclose(2).certain_sign();
}

Enclosure FieldElement::embed(long precision) const {
    if (precision < 16)
        throw DomainError("embedding precision must be at least 16 bits");
    if (is_zero())
        return Enclosure{0, 0};
    Interval v = enclose(precision + 2);
    return Enclosure{v.lo_q(), v.hi_q()};
}

double FieldElement::to_double() const {
    if (is_zero())
        return 0.0;
    return enclose(60).mid_d();
}

std::string FieldElement::str() const {
    std::string s;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i)
            s += ' ';
        s += rational_string(c_[i]);
    }
    return s;
}

std::string FieldElement::pretty() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        mpq_class a = abs(c_[i]);
        if (first)
            os << (c_[i] < 0 ? "-" : "");
        else
            os << (c_[i] < 0 ? " - " : " + ");
        if (a != 1 || i == 0)
            os << a.get_str();
        if (i >= 1)
            os << (a != 1 ? "*" : "") << "l";
        if (i >= 2)
            os << "^" << i;
        first = false;
    }
    if (first)
        os << "0";
    return os.str();
}

FieldElement operator+(FieldElement a, const FieldElement &b) { return a += b; }
FieldElement operator-(FieldElement a, const FieldElement &b) { return a -= b; }
FieldElement operator*(FieldElement a, const FieldElement &b) { return a *= b; }
FieldElement operator/(FieldElement a, const FieldElement &b) { return a /= b; }

FieldElement operator-(const FieldElement &a) {
    std::vector<mpq_class> c = a.coeffs();
    for (auto &q : c)
        q = -q;
    return FieldElement(a.field(), std::move(c));
}

FieldElement operator+(FieldElement a, long b) { return a += FieldElement(a.field(), b); }
FieldElement operator-(FieldElement a, long b) { return a -= FieldElement(a.field(), b); }

FieldElement operator*(FieldElement a, long b) {
    std::vector<mpq_class> c = a.coeffs();
    for (auto &q : c)
        q *= b;
    return FieldElement(a.field(), std::move(c));
}

FieldElement operator+(long a, const FieldElement &b) { return b + a; }
FieldElement operator-(long a, const FieldElement &b) { return FieldElement(b.field(), a) - b; }
FieldElement operator*(long a, FieldElement b) { return std::move(b) * a; }
FieldElement operator/(long a, const FieldElement &b) { return b.inverse() * a; }

bool operator==(const FieldElement &a, const FieldElement &b) {
    return a.field() == b.field() && a.coeffs() == b.coeffs();
}

bool operator!=(const FieldElement &a, const FieldElement &b) { return !(a == b); }

int compare(const FieldElement &a, const FieldElement &b) { return (a - b).sign(); }
bool operator<(const FieldElement &a, const FieldElement &b) { return compare(a, b) < 0; }
bool operator<=(const FieldElement &a, const FieldElement &b) { return compare(a, b) <= 0; }
bool operator>(const FieldElement &a, const FieldElement &b) { return compare(a, b) > 0; }
bool operator>=(const FieldElement &a, const FieldElement &b) { return compare(a, b) >= 0; }

int sign(const FieldElement &a) { return a.sign(); }

Enclosure embed(const FieldElement &a, long precision) { return a.embed(precision); }

std::vector<Enclosure> galois_conjugate_values(const FieldElement &a, long precision) {
    std::vector<Enclosure> out;
    for (int k : a.field()->conjugate_ks()) {
        if (a.is_zero()) {
            out.push_back(Enclosure{0, 0});
            continue;
        }
        Interval v = a.enclose_conjugate(k, precision);
        out.push_back(Enclosure{v.lo_q(), v.hi_q()});
    }
    return out;
}

FieldElement abs(const FieldElement &a) { return a.sign() < 0 ? -a : a; }

mpz_class floor(const FieldElement &a) {
    if (a.is_rational()) {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), a.coeffs()[0].get_num_mpz_t(), a.coeffs()[0].get_den_mpz_t());
        return r;
    }
    // a is irrational, so it is never an integer; the enclosure decides.
    for (long bits = 64;; bits *= 2) {
        Interval v = a.enclose(bits);
        mpz_class lo, hi;
        mpfr_get_z(lo.get_mpz_t(), v.lo(), MPFR_RNDD);
        mpfr_get_z(hi.get_mpz_t(), v.hi(), MPFR_RNDD);
        if (lo == hi)
            return lo;
    }
}

mpz_class ceil(const FieldElement &a) { return -floor(-a); }

FieldElement pow(const FieldElement &a, unsigned e) {
    FieldElement r(a.field(), 1L);
    FieldElement b = a;
    while (e) {
        if (e & 1)
            r *= b;
        e >>= 1;
        if (e)
            b *= b;
    }
    return r;
}

mpq_class parse_rational(const std::string &raw) {
    std::string s;
    // Accept the unicode minus sign as well as '-'.
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw.compare(i, 3, "\xE2\x88\x92") == 0) {
            s += '-';
            i += 2;
        } else if (!isspace(static_cast<unsigned char>(raw[i]))) {
            s += raw[i];
        }
    }
    if (s.empty())
        throw DomainError("empty rational literal");
    auto bad = [&]() { return DomainError("unparsable rational literal '" + raw + "'"); };
    size_t slash = s.find('/');
    if (slash != std::string::npos) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw bad();
        if (q.get_den() == 0)
            throw bad();
        q.canonicalize();
        return q;
    }
    size_t dot = s.find_first_of(".eE");
    if (dot == std::string::npos) {
        mpz_class z;
        if (z.set_str(s, 10) != 0)
            throw bad();
        return mpq_class(z);
    }
    // Decimal literal with optional exponent, converted exactly.
    std::string mant = s;
    long exp10 = 0;
    size_t epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        mant = s.substr(0, epos);
        try {
            size_t used = 0;
            exp10 = std::stol(s.substr(epos + 1), &used);
            if (used != s.size() - epos - 1)
                throw bad();
        } catch (const std::logic_error &) {
            throw bad();
        }
    }
    bool negative = false;
    size_t start = 0;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
        negative = mant[0] == '-';
        start = 1;
    }
    std::string digits;
    long frac = 0;
    bool seen_dot = false;
    for (size_t i = start; i < mant.size(); ++i) {
        char c = mant[i];
        if (c == '.') {
            if (seen_dot)
                throw bad();
            seen_dot = true;
        } else if (isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            if (seen_dot)
                ++frac;
        } else {
            throw bad();
        }
    }
    if (digits.empty())
        throw bad();
    mpz_class num(digits, 10);
    long e = exp10 - frac;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    mpq_class q = e < 0 ? mpq_class(num, p) : mpq_class(num * p);
    q.canonicalize();
    return negative ? mpq_class(-q) : q;
}

std::string rational_string(const mpq_class &q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}
