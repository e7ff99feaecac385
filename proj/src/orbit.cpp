#include "tcf/orbit.hpp"

#include "tcf/errors.hpp"

#include <array>
#include <cmath>
#include <algorithm>
#include <map>
#include <random>
#include <tuple>
#include <limits>

namespace tcf {

PointSource PointSource::rational(const FieldPtr &F, const mpq_class &q) {
    return element(FieldElement(F, q));
}

PointSource PointSource::element(const FieldElement &x) {
    PointSource p;
    p.kind_ = Kind::Exact;
    p.F_ = x.field();
    mpz_class D = 1;
    for (const auto &c : x.coeffs())
        mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), c.get_den_mpz_t());
    p.D_ = D;
    p.X_ = AlgInt(p.F_->degree());
    for (size_t i = 0; i < x.coeffs().size(); ++i) {
        mpq_class s = x.coeffs()[i] * D;
        p.X_.c[i] = s.get_num();
    }
    return p;
}

PointSource PointSource::quadratic(const QuadElement &x) {
    PointSource p;
    p.kind_ = Kind::Quadratic;
    p.F_ = x.quad()->F;
    p.q_ = x;
    return p;
}

PointSource PointSource::enclosure(const FieldPtr &F, const Interval &x) {
    PointSource p;
    p.kind_ = Kind::Enclosure;
    p.F_ = F;
    p.box_ = x;
    return p;
}

namespace {

// First `chunks` 64-bit words of the stream, most significant first.
mpz_class random_bits(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt, long chunks) {
    // splitmix64 finalizer; seeding through std::seed_seq costs more than a short orbit.
    auto mix = [](std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t key = mix(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ index) ^ attempt);
    std::mt19937_64 g(key);
    mpz_class z = 0;
    for (long i = 0; i < chunks; ++i) {
        z <<= 64;
        mpz_class c;
        std::uint64_t r = g();
        mpz_import(c.get_mpz_t(), 1, 1, sizeof r, 0, 0, &r);
        z += c;
    }
    return z;
}

}

PointSource PointSource::random(const FieldPtr &F, std::uint64_t seed, std::uint64_t index) {
    PointSource p;
    p.kind_ = Kind::Random;
    p.F_ = F;
    p.seed_ = seed;
    p.index_ = index;
    FieldElement t = FieldElement(F, 1L) + FieldElement::lambda(F);
    for (;; ++p.attempt_) {
        // x >= -tau iff 3u <= tau; decide on a growing prefix of u.
        for (long chunks = 1;; chunks *= 2) {
            mpz_class N = random_bits(seed, index, p.attempt_, chunks);
            mpz_class one = mpz_class(1) << (64 * chunks);
            mpq_class lo(3 * N, one), hi(3 * (N + 1), one);
            lo.canonicalize();
            hi.canonicalize();
            if (FieldElement(F, hi) <= t)
                return p;
            if (FieldElement(F, lo) > t)
                break;
            if (chunks > 64)
                break;
        }
    }
}

mpq_class PointSource::random_truncation(long bits) const {
    long chunks = (bits + 63) / 64;
    mpz_class N = random_bits(seed_, index_, attempt_, chunks) >> (64 * chunks - bits);
    mpq_class q(-3 * N, mpz_class(1) << bits);
    q.canonicalize();
    return q;
}

std::optional<FieldElement> PointSource::field_value() const {
    if (kind_ != Kind::Exact)
        return std::nullopt;
    FieldElement x = X_.to_field(F_);
    return x * FieldElement(F_, mpq_class(1, D_) );
}

Interval PointSource::enclose(long rel_bits) const {
    switch (kind_) {
    case Kind::Exact:
        return field_value()->enclose(rel_bits);
    case Kind::Quadratic:
        return q_->enclose(rel_bits);
    case Kind::Random: {
        // Exact endpoints: -3(N + 1) 2^-b and -3N 2^-b.
        long chunks = (rel_bits + 72) / 64 + 1;
        mpz_class N = random_bits(seed_, index_, attempt_, chunks);
        Interval r(static_cast<mpfr_prec_t>(64 * chunks + 8));
        mpfr_set_z(r.lo(), N.get_mpz_t(), MPFR_RNDD);
        mpfr_add_ui(r.hi(), r.lo(), 1, MPFR_RNDU);
        mul_si(r, r, -3);
        mpfr_mul_2si(r.lo(), r.lo(), -64 * chunks, MPFR_RNDD);
        mpfr_mul_2si(r.hi(), r.hi(), -64 * chunks, MPFR_RNDU);
        return r;
    }
    default:
        return *box_;
    }
}

double PointSource::to_double() const { return kind_ == Kind::Enclosure ? box_->mid_d() : enclose(64).mid_d(); }

Interval eval_rel(const AlgInt &a, const Field &F, long rel_bits, long hint_cancel) {
    if (a.is_zero())
        return Interval::from_si(0, static_cast<mpfr_prec_t>(rel_bits));
    long w = rel_bits + 32 + hint_cancel;
    for (;;) {
        Interval r = eval(a, F, static_cast<mpfr_prec_t>(w));
        long acc = r.accuracy_bits();
        if (acc >= rel_bits)
            return r;
        w += acc > 0 ? rel_bits - acc + 32 : std::max<long>(w, 64);
    }
}

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr mpfr_prec_t low = 128;
// Accuracy (bits) below which the floating state is re-anchored.
constexpr long min_acc = 96;
// Accuracy requested from an ordinary anchor.
constexpr long block_acc = 640;

// r = lambda * a.
void mul_lambda(AlgInt &r, const AlgInt &a, const Field &F) {
    const auto &p = F.min_poly();
    int d = F.degree();
    r.c.resize(d);
    const mpz_class &top = a.c[d - 1];
    for (int i = d - 1; i >= 1; --i)
        mpz_set(r.c[i].get_mpz_t(), a.c[i - 1].get_mpz_t());
    r.c[0] = 0;
    for (int i = 0; i < d; ++i)
        mpz_submul(r.c[i].get_mpz_t(), p[i].get_mpz_t(), top.get_mpz_t());
}

// (r1, r2) <- ((1 - k tau) r1 - r2, r1), with tau = 1 + lambda.
void row_update_k(AlgInt &r1, AlgInt &r2, long k, const Field &F) {
    thread_local AlgInt lam, n1;
    mul_lambda(lam, r1, F);
    n1.c.resize(r1.c.size());
    for (size_t i = 0; i < r1.c.size(); ++i) {
        mpz_mul_si(n1.c[i].get_mpz_t(), r1.c[i].get_mpz_t(), 1 - k);
        mpz_submul_ui(n1.c[i].get_mpz_t(), lam.c[i].get_mpz_t(), static_cast<unsigned long>(k));
        mpz_sub(n1.c[i].get_mpz_t(), n1.c[i].get_mpz_t(), r2.c[i].get_mpz_t());
    }
    std::swap(r2, r1);
    std::swap(r1, n1);
}

// (r1, r2) <- (M.a r1 + M.b r2, M.c r1 + M.d r2).
void row_update(AlgInt &r1, AlgInt &r2, const AlgMatrix &M, const Field &F) {
    thread_local AlgInt t1, t2, n1;
    mul_into(t1, M.a, r1, F);
    mul_into(t2, M.b, r2, F);
    add_into(n1, t1, t2);
    mul_into(t1, M.c, r1, F);
    mul_into(t2, M.d, r2, F);
    add_into(r2, t1, t2);
    std::swap(r1, n1);
}

// Mantissa and binary exponent of the midpoint, for magnitudes beyond double range.
std::pair<double, long> split(const Interval &a) {
    long e;
    double m = mpfr_get_d_2exp(&e, a.hi(), MPFR_RNDN);
    long e2;
    double m2 = mpfr_get_d_2exp(&e2, a.lo(), MPFR_RNDN);
    m = (m + std::ldexp(m2, static_cast<int>(std::clamp<long>(e2 - e, -2000, 2000)))) / 2;
    return {std::fabs(m), e};
}

struct Consts {
    AlgMatrix exact;
    Interval lo[4]; // entries at the low precision
};

class Engine {
public:
    Engine(const System &S, const PointSource &x, const ExpandOptions &opt)
        : S_(S), F_(*S.field()), x_(x), opt_(opt), P_(AlgMatrix::identity(S.field()->degree())),
          alpha_(Interval::from_si(1, low)), v_(Interval::from_si(0, low)), tl_(low), nl_(low), dl_(low),
          g_(low), h_(low) {
        if (x.kind() == PointSource::Kind::Exact)
            xf_ = x.field_value();
    }

    Expansion run() {
        if (!anchor(block_acc))
            enter_exact();
        for (long m = 0;; ++m) {
            if (exact_mode_ ? record_exact(m) : record_float(m))
                return std::move(out_);
            if (m == opt_.steps)
                return std::move(out_);
            Digit k = exact_mode_ ? decide_exact() : decide_float();
            out_.digits.push_back(k);
            if (opt_.stop && opt_.stop(out_))
                return std::move(out_);
            advance(k);
        }
    }

private:
    const System &S_;
    const Field &F_;
    const PointSource &x_;
    const ExpandOptions &opt_;
    std::optional<FieldElement> xf_;
    AlgMatrix P_;
    // Floating state: (num, den) = P (x, 1) at precision wb_.
    Interval num_, den_;
    mpfr_prec_t wb_ = 0;
    // alpha = q_m, v = q_{m-1}/q_m; both forward stable.
    Interval alpha_, v_;
    Interval tl_, nl_, dl_, g_, h_;
    Interval tmp1_, tmp2_;
    bool exact_mode_ = false;
    std::optional<FieldElement> te_;
    std::optional<QuadElement> tq_;
    Expansion out_;

    bool refinable() const { return x_.kind() != PointSource::Kind::Enclosure; }

    // Digit data shared by all orbits of a thread; fields of equal n are identical.
    Consts &consts(Digit k) {
        thread_local std::map<std::pair<int, Digit>, Consts> cache;
        auto key = std::make_pair(F_.n(), k);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
        Consts c;
        c.exact = S_.alg_matrix(k);
        Mobius M = S_.matrix(k);
        const FieldElement *f[4] = {&M.a(), &M.b(), &M.c(), &M.d()};
        for (int i = 0; i < 4; ++i) {
            c.lo[i] = f[i]->enclose(low);
            c.lo[i].round_to(low);
        }
        return cache.emplace(key, std::move(c)).first->second;
    }

    /*
     * (num, den) = P (x, 1) to relative accuracy rel.  The working precision
     * covers the cancellation in alpha x + beta, roughly twice the bit length
     * of P.  Returns false when the source cannot supply the accuracy.
     */
    bool anchor(long rel) {
        long pb = static_cast<long>(std::max({P_.a.bits(), P_.b.bits(), P_.c.bits(), P_.d.bits()}));
        long w = 2 * pb + rel + 64;
        long limit = 2 * pb + std::max(rel, opt_.precision_cap) + 4096;
        for (;;) {
            Interval xe = x_.enclose(w);
            mpfr_prec_t ww = static_cast<mpfr_prec_t>(w);
            Interval a = eval_affine(P_.a, P_.b, xe, F_, ww);
            Interval b = eval_affine(P_.c, P_.d, xe, F_, ww);
            out_.max_precision = std::max<long>(out_.max_precision, w);
            long acc = std::min(a.accuracy_bits(), b.accuracy_bits());
            if (acc >= rel) {
                wb_ = static_cast<mpfr_prec_t>(rel + 64);
                a.round_to(wb_);
                b.round_to(wb_);
                num_ = std::move(a);
                den_ = std::move(b);
                tmp1_ = Interval(wb_);
                tmp2_ = Interval(wb_);
                return true;
            }
            if (!refinable() || w > limit)
                return false;
            w += acc > 0 ? rel - acc + 64 : w;
        }
    }

    const Interval &block_entry(Digit k, int i) {
        thread_local std::map<std::tuple<int, Digit, mpfr_prec_t>, std::array<Interval, 4>> cache;
        auto key = std::make_tuple(F_.n(), k, wb_);
        auto it = cache.find(key);
        if (it == cache.end()) {
            Mobius M = S_.matrix(k);
            const FieldElement *f[4] = {&M.a(), &M.b(), &M.c(), &M.d()};
            std::array<Interval, 4> e;
            for (int j = 0; j < 4; ++j) {
                e[j] = f[j]->enclose(wb_);
                e[j].round_to(wb_);
            }
            it = cache.emplace(key, std::move(e)).first;
        }
        return it->second[i];
    }

    long accuracy() const { return std::min(num_.accuracy_bits(), den_.accuracy_bits()) - 2; }

    // Theta from (t, v) in long double: 1 + t v cancels when Theta is large.
    void push(long double t, double theta_direct) {
        long double v = v_.mid_ld();
        long double den = 1 + t * v;
        out_.t.push_back(static_cast<double>(t));
        out_.v.push_back(static_cast<double>(v));
        out_.theta.push_back(static_cast<double>(std::fabs(t / den)));
        out_.theta_bis.push_back(nan);
        auto [ma, ea] = split(alpha_);
        out_.log_q.push_back(std::log(ma) + static_cast<double>(ea) * std::log(2.0));
        out_.theta_direct.push_back(theta_direct);
        size_t m = out_.t.size() - 1;
        if (m > 0 && out_.digits[m - 1] >= 1)
            out_.theta_bis[m - 1] = static_cast<double>(std::fabs(v / den));
        if (opt_.keep_convergents)
            out_.convergents.push_back(P_);
    }

    double direct_from(const Interval &num) const {
        if (!opt_.direct)
            return nan;
        auto [ma, ea] = split(alpha_);
        auto [mn, en] = split(num);
        return std::ldexp(ma * mn, static_cast<int>(ea + en));
    }

    bool record_float(long) {
        if (accuracy() < min_acc && !anchor(block_acc)) {
            if (!refinable())
                throw PrecisionExhausted("enclosure too wide for the orbit", accuracy());
            enter_exact();
            return record_exact(static_cast<long>(out_.t.size()));
        }
        mpfr_set(nl_.lo(), num_.lo(), MPFR_RNDD);
        mpfr_set(nl_.hi(), num_.hi(), MPFR_RNDU);
        mpfr_set(dl_.lo(), den_.lo(), MPFR_RNDD);
        mpfr_set(dl_.hi(), den_.hi(), MPFR_RNDU);
        div(tl_, nl_, dl_);
        push(tl_.mid_ld(), direct_from(num_));
        return false;
    }

    // Returns true when the orbit has reached the cusp 0.
    bool record_exact(long) {
        int sign = te_ ? te_->sign() : tq_->sign();
        if (out_.cusp_index < 0 && (sign == 0 || (te_ && *te_ == S_.minus_tau())))
            out_.cusp_index = static_cast<long>(out_.t.size());
        if (sign == 0) {
            push(0.0, 0.0);
            out_.cusp = true;
            return true;
        }
        long double t = (te_ ? te_->enclose(128) : tq_->enclose(128)).mid_ld();
        double direct = nan;
        if (opt_.direct) {
            anchor_direct();
            direct = direct_from(num_);
        }
        push(t, direct);
        return false;
    }

    // num_ to low accuracy for the direct Theta in exact mode.
    void anchor_direct() {
        long pb = static_cast<long>(std::max(P_.a.bits(), P_.b.bits()));
        for (long w = 2 * pb + 192;; w *= 2) {
            Interval a = eval_affine(P_.a, P_.b, x_.enclose(w), F_, static_cast<mpfr_prec_t>(w));
            if (a.accuracy_bits() >= 64) {
                num_ = std::move(a);
                return;
            }
        }
    }

    /*
     * Digit from the double value of t when every boundary is farther than
     * the margin; double error here is below 1e-14 relative, so the margins
     * leave the interval decision unchanged.
     */
    std::optional<Digit> quick_digit(double t) const {
        struct Dbl {
            double tau, inv_tau, inv_tau2, eps0;
        };
        thread_local std::map<int, Dbl> cache;
        auto it = cache.find(F_.n());
        if (it == cache.end())
            it = cache.emplace(F_.n(), Dbl{S_.tau().to_double(), 1 / S_.tau().to_double(),
                                           1 / (S_.tau().to_double() * S_.tau().to_double()),
                                           S_.eps0().to_double()})
                     .first;
        const Dbl &c = it->second;
        constexpr double margin = 1e-9;
        if (std::fabs(t - c.eps0) < margin)
            return std::nullopt;
        if (t > c.eps0) {
            double q = (1 - 1 / t) * c.inv_tau;
            double f = std::floor(q);
            if (q - f < margin * std::max(1.0, q) || f + 1 - q < margin * std::max(1.0, q))
                return std::nullopt;
            return static_cast<Digit>(f) + 1;
        }
        double s = t + c.tau;
        if (s < 1e-4)
            return std::nullopt;
        double v = 1 / (c.tau * s) - c.inv_tau2;
        double f = std::ceil(v);
        if (f < 2 || f - v < margin * std::max(1.0, v) || v - (f - 1) < margin * std::max(1.0, v))
            return std::nullopt;
        return -(static_cast<Digit>(f) - 1);
    }

    Digit decide_float() {
        if (auto k = quick_digit(out_.t.back()))
            return *k;
        try {
            return cylinder_of_f(S_, tl_);
        } catch (const PrecisionExhausted &) {
        }
        for (;;) {
            try {
                Interval t(wb_);
                div(t, num_, den_);
                return cylinder_of_f(S_, t);
            } catch (const PrecisionExhausted &) {
            }
            long acc = accuracy();
            if (acc >= opt_.precision_cap || !anchor(std::min(2 * acc, opt_.precision_cap))) {
                if (!refinable() || x_.kind() == PointSource::Kind::Random)
                    throw PrecisionExhausted("digit decision at the precision cap", opt_.precision_cap);
                enter_exact();
                return decide_exact();
            }
        }
    }

    Digit decide_exact() { return te_ ? cylinder_of_f(S_, *te_) : cylinder_of_f(S_, *tq_); }

    // Switch to exact arithmetic on t_m; only Exact and Quadratic sources can.
    void enter_exact() {
        if (x_.kind() == PointSource::Kind::Exact) {
            const FieldPtr &K = S_.field();
            FieldElement n = P_.a.to_field(K) * *xf_ + P_.b.to_field(K);
            FieldElement d = P_.c.to_field(K) * *xf_ + P_.d.to_field(K);
            te_ = n / d;
        } else if (x_.kind() == PointSource::Kind::Quadratic) {
            const FieldPtr &K = S_.field();
            const QuadElement &q = *x_.quad_value();
            te_.reset();
            tq_ = (P_.a.to_field(K) * q + P_.b.to_field(K)) / (P_.c.to_field(K) * q + P_.d.to_field(K));
        } else {
            throw PrecisionExhausted("point cannot be refined", opt_.precision_cap);
        }
        exact_mode_ = true;
    }

    void advance(Digit k) {
        const Consts &c = consts(k);
        if (k >= 1) {
            row_update_k(P_.a, P_.c, k, F_);
            row_update_k(P_.b, P_.d, k, F_);
        } else {
            row_update(P_.a, P_.c, c.exact, F_);
            row_update(P_.b, P_.d, c.exact, F_);
        }
        // alpha' = alpha (a - b v), v' = -(c - d v)/(a - b v).
        mul(h_, c.lo[1], v_);
        sub(g_, c.lo[0], h_);
        mul(h_, c.lo[3], v_);
        sub(h_, c.lo[2], h_);
        div(v_, h_, g_);
        neg(v_, v_);
        mul(alpha_, alpha_, g_);

        if (exact_mode_) {
            if (te_)
                te_ = act(S_, k, *te_);
            else
                tq_ = tcf::apply(S_.matrix(k), *tq_);
            return;
        }
        const Interval &a = block_entry(k, 0);
        if (k >= 1) {
            mul(tmp1_, a, num_);
            sub(tmp1_, tmp1_, den_);
            std::swap(den_, num_);
            std::swap(num_, tmp1_);
        } else {
            const Interval &b = block_entry(k, 1), &cc = block_entry(k, 2), &d = block_entry(k, 3);
            mul(tmp1_, a, num_);
            mul(tmp2_, b, den_);
            add(tmp1_, tmp1_, tmp2_);
            mul(tmp2_, cc, num_);
            mul(den_, d, den_);
            add(den_, tmp2_, den_);
            std::swap(num_, tmp1_);
        }
    }
};

}

Expansion expand(const System &S, const PointSource &x, const ExpandOptions &opt) {
    if (x.field() != S.field())
        throw DomainError("point and system use different fields");
    if (opt.steps < 0)
        throw DomainError("negative step count");
    if (x.kind() == PointSource::Kind::Exact) {
        FieldElement v = *x.field_value();
        if (v.sign() >= 0 || v < S.minus_tau())
            throw DomainError("point outside [-tau, 0)");
    } else if (x.kind() == PointSource::Kind::Quadratic) {
        const QuadElement &q = *x.quad_value();
        if (q.sign() >= 0 || compare(q, S.minus_tau()) < 0)
            throw DomainError("point outside [-tau, 0)");
    } else {
        Interval x0 = x.enclose(64);
        if (certainly_less(x0, S.numeric(x0.precision()).minus_tau) || !x0.negative())
            throw DomainError("point outside [-tau, 0)");
    }
    return Engine(S, x, opt).run();
}

}
