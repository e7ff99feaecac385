#include "tcf/dynamics.hpp"

#include "tcf/errors.hpp"

#include <limits>

namespace tcf {

System::System(FieldPtr F) : F_(std::move(F)) {
    tau_ = FieldElement::tau(F_);
    minus_tau_ = -tau_;
    FieldElement t2 = tau_ * tau_;
    eps0_ = -(t2 * tau_) / (t2 + 1);
    b1_ = (1 - tau_).inverse();
    b2_ = (1 - tau_ * 2).inverse();
}

Mobius System::matrix(Digit k) const {
    if (k == 0)
        throw DomainError("digit zero does not exist");
    return k > 0 ? M_k(F_, k) : W_power(F_, -k);
}

Mobius System::y_matrix(Digit k) const {
    if (k == 0)
        throw DomainError("digit zero does not exist");
    return k > 0 ? N_k(F_, k) : y_companion(W_power(F_, -k));
}

AlgMatrix System::alg_matrix(Digit k) const { return matrix(k).to_alg(); }

std::pair<FieldElement, FieldElement> System::g_cylinder(Digit k) const {
    if (k < 1)
        throw DomainError("g-cylinders are indexed by k >= 1");
    if (k == 1)
        return {minus_tau_, b1_};
    FieldElement lo = (1 - tau_ * static_cast<long>(k - 1)).inverse();
    FieldElement hi = (1 - tau_ * static_cast<long>(k)).inverse();
    return {lo, hi};
}

std::pair<FieldElement, FieldElement> System::f_cylinder(Digit k) const {
    if (k == 0)
        throw DomainError("digit zero does not exist");
    if (k == 1)
        return {eps0_, b1_};
    if (k > 1)
        return g_cylinder(k);
    long j = static_cast<long>(-k);
    FieldElement t2 = tau_ * tau_;
    FieldElement lo = minus_tau_ + tau_ / (t2 * (j + 1) + 1);
    FieldElement hi = minus_tau_ + tau_ / (t2 * j + 1);
    return {lo, hi};
}

const System::Numeric &System::numeric(mpfr_prec_t w) const {
    mpfr_prec_t b = 64;
    while (b < w)
        b *= 2;
    std::lock_guard<std::mutex> lock(mu_);
    auto it = numeric_.find(b);
    if (it != numeric_.end())
        return *it->second;
    long bits = static_cast<long>(b) + 16;
    auto N = std::make_unique<Numeric>(Numeric{
        tau_.enclose(bits), eps0_.enclose(bits), b1_.enclose(bits), b2_.enclose(bits),
        minus_tau_.enclose(bits), tau_.inverse().enclose(bits), (tau_ * tau_).inverse().enclose(bits)});
    const Numeric &ref = *N;
    numeric_.emplace(b, std::move(N));
    return ref;
}

void require_in_I(const System &S, const FieldElement &x) {
    if (x.sign() >= 0 || x < S.minus_tau())
        throw DomainError("point outside [-tau, 0): " + x.pretty());
}

namespace {

// Domain test for an enclosure; throws on certain exclusion, or when a bound is undecided.
void require_in_I(const System &S, const Interval &x) {
    const auto &N = S.numeric(x.precision());
    if (mpfr_sgn(x.lo()) >= 0 || certainly_less(x, N.minus_tau))
        throw DomainError("point outside [-tau, 0): " + x.str(10));
    if (mpfr_sgn(x.hi()) >= 0)
        throw PrecisionExhausted("0", x.precision());
    if (!certainly_less(N.minus_tau, x) && mpfr_cmp(x.lo(), N.minus_tau.hi()) <= 0)
        throw PrecisionExhausted("-tau", x.precision());
}

std::int64_t to_i64(const mpz_class &z) {
    if (!z.fits_slong_p())
        throw DomainError("digit exceeds the 64-bit range");
    return z.get_si();
}

}

Digit cylinder_of_g(const System &S, const FieldElement &x) {
    require_in_I(S, x);
    FieldElement u = 1 - x.inverse();
    return to_i64(floor(u / S.tau())) + 1;
}

Digit cylinder_of_g(const System &S, const Interval &x) {
    require_in_I(S, x);
    mpfr_prec_t w = x.precision();
    const auto &N = S.numeric(w);
    Interval u(w);
    inv(u, x);
    neg(u, u);
    add_si(u, u, 1);
    Interval q(w);
    mul(q, u, N.inv_tau);
    mpz_class klo, khi;
    mpfr_get_z(klo.get_mpz_t(), q.lo(), MPFR_RNDD);
    mpfr_get_z(khi.get_mpz_t(), q.hi(), MPFR_RNDD);
    if (klo != khi)
        throw PrecisionExhausted("1/(1 - " + khi.get_str() + " tau)", w);
    return to_i64(klo) + 1;
}

std::int64_t j_of(const System &S, const FieldElement &x) {
    if (!(S.minus_tau() < x) || !(x < S.eps0()))
        throw DomainError("j(x) needs -tau < x < eps_0");
    const FieldElement &t = S.tau();
    FieldElement v = (t * (t + x)).inverse() - (t * t).inverse();
    return to_i64(ceil(v)) - 1;
}

std::int64_t j_of(const System &S, const Interval &x) {
    mpfr_prec_t w = x.precision();
    const auto &N = S.numeric(w);
    if (!certainly_less(N.minus_tau, x))
        throw PrecisionExhausted("-tau", w);
    if (!certainly_less(x, N.eps0))
        throw PrecisionExhausted("eps_0", w);
    Interval s(w), v(w);
    add(s, x, N.tau);
    mul(v, s, N.tau);
    inv(v, v);
    sub(v, v, N.inv_tau2);
    mpz_class clo, chi;
    mpfr_get_z(clo.get_mpz_t(), v.lo(), MPFR_RNDU);
    mpfr_get_z(chi.get_mpz_t(), v.hi(), MPFR_RNDU);
    if (clo != chi)
        throw PrecisionExhausted("acceleration cylinder " + clo.get_str(), w);
    return to_i64(clo) - 1;
}

Digit cylinder_of_f(const System &S, const FieldElement &x) {
    require_in_I(S, x);
    if (x == S.minus_tau())
        return 1;
    if (x < S.eps0())
        return -j_of(S, x);
    return cylinder_of_g(S, x);
}

Digit cylinder_of_f(const System &S, const Interval &x) {
    require_in_I(S, x);
    const auto &N = S.numeric(x.precision());
    if (certainly_less(x, N.eps0))
        return -j_of(S, x);
    if (mpfr_cmp(x.lo(), N.eps0.hi()) > 0)
        return cylinder_of_g(S, x);
    throw PrecisionExhausted("eps_0", x.precision());
}

Digit cylinder_of_g(const System &S, const ExtendedPoint &x) {
    if (const auto *e = std::get_if<FieldElement>(&x))
        return cylinder_of_g(S, *e);
    if (const auto *v = std::get_if<Interval>(&x))
        return cylinder_of_g(S, *v);
    throw DomainError("infinity is not in [-tau, 0)");
}

Digit cylinder_of_f(const System &S, const ExtendedPoint &x) {
    if (const auto *e = std::get_if<FieldElement>(&x))
        return cylinder_of_f(S, *e);
    if (const auto *v = std::get_if<Interval>(&x))
        return cylinder_of_f(S, *v);
    throw DomainError("infinity is not in [-tau, 0)");
}

FieldElement act(const System &S, Digit k, const FieldElement &x) {
    if (k > 0)
        return 1 - S.tau() * static_cast<long>(k) - x.inverse();
    return tcf::apply(S.matrix(k), x);
}

FieldElement act_y(const System &S, Digit k, const FieldElement &y) {
    if (k > 0)
        return -(y + 1 - S.tau() * static_cast<long>(k)).inverse();
    return tcf::apply(S.y_matrix(k), y);
}

Step g_step(const System &S, const FieldElement &x) {
    Digit k = cylinder_of_g(S, x);
    FieldElement y = act(S, k, x);
    return Step{y, k, S.matrix(k)};
}

Step f_step(const System &S, const FieldElement &x) {
    Digit k = cylinder_of_f(S, x);
    FieldElement y = act(S, k, x);
    return Step{y, k, S.matrix(k)};
}

OrbitTables build_orbit_tables(const System &S) {
    int n = S.n();
    OrbitTables T;
    FieldElement x = S.minus_tau();
    for (int j = 0; j <= 2 * n - 4; ++j) {
        T.phi.push_back(x);
        if (x.is_zero())
            throw ConsistencyError("phi orbit reached the cusp 0");
        Step s = g_step(S, x);
        T.phi_digits.push_back(s.digit);
        x = s.x;
    }
    FieldElement e = S.eps0();
    for (int i = 0; i <= 2 * n - 4; ++i) {
        T.eps.push_back(e);
        Step s = f_step(S, e);
        T.eps_digits.push_back(s.digit);
        e = s.x;
    }
    // Backwards from 0 through inverse branches: M_2, then M_1 (n-3 times), M_2, M_1 (n-2 times).
    FieldElement a = tcf::apply(S.matrix(2).inverse(), FieldElement(S.field()));
    T.alpha.push_back(a);
    for (int i = 2; i <= 2 * n - 3; ++i) {
        Digit k = (i == n - 1) ? 2 : 1;
        a = tcf::apply(S.matrix(k).inverse(), a);
        T.alpha.push_back(a);
    }
    for (int i = 0; i <= n - 3; ++i) {
        T.chain.push_back(i);
        T.chain.push_back(n - 1 + i);
    }
    T.chain.push_back(n - 2);
    Report r = check_orbit_tables(S, T);
    if (!r.passed()) {
        for (const auto &c : r.checks())
            if (!c.passed)
                throw ConsistencyError("orbit table identity failed: " + c.name + " " + c.detail);
    }
    return T;
}

Report check_orbit_tables(const System &S, const OrbitTables &T) {
    Report r;
    int n = S.n();
    const FieldElement &tau = S.tau();
    FieldPtr F = S.field();

    std::vector<Digit> want;
    for (int i = 0; i < n - 2; ++i)
        want.push_back(1);
    want.push_back(2);
    for (int i = 0; i < n - 3; ++i)
        want.push_back(1);
    want.push_back(2);
    r.add("phi digit pattern 1^(n-2) 2 1^(n-3) 2", "g-orbit of -tau", T.phi_digits == want);
    r.add("phi_{2n-3} = phi_0", "g-orbit closure",
          g_step(S, T.phi.back()).x == T.phi.front());
    bool ordered = true;
    for (size_t i = 0; i + 1 < T.chain.size(); ++i)
        ordered = ordered && T.phi[T.chain[i]] < T.phi[T.chain[i + 1]];
    ordered = ordered && T.phi[n - 2].sign() < 0;
    r.add("phi_0 < phi_{n-1} < phi_1 < ... < phi_{2n-4} < phi_{n-2} < 0", "ordering chain", ordered);
    r.add("phi_{n-1} = 1 - tau", "g-orbit values", T.phi[n - 1] == 1 - tau);
    r.add("phi_{n-2} = -1/tau", "g-orbit values", T.phi[n - 2] == -tau.inverse());
    r.add("phi_{2n-4} = 1/(1 - tau)", "g-orbit values", T.phi[2 * n - 4] == S.b1());
    if (n % 2 == 0) {
        r.add("phi_{n/2-1} = -1", "even n midpoint", T.phi[n / 2 - 1] == FieldElement(F, -1L));
    } else {
        int m = (n - 3) / 2;
        r.add("phi_{3m+2} = -1 (n = 2m+3)", "odd n midpoint",
              T.phi[3 * m + 2] == FieldElement(F, -1L));
    }

    FieldElement zero(F);
    r.add("eps_0 = W^-1(0) = -tau^3/(1 + tau^2)", "left end of the f-domain",
          tcf::apply(S.matrix(-1).inverse(), zero) == S.eps0());
    std::vector<Digit> ewant;
    for (int i = 0; i <= n - 3; ++i)
        ewant.push_back(1);
    ewant.push_back(2);
    for (int i = n - 1; i <= 2 * n - 5; ++i)
        ewant.push_back(1);
    std::vector<Digit> got(T.eps_digits.begin(), T.eps_digits.end() - 1);
    r.add("eps digit pattern 1^(n-2) 2 1^(n-3)", "f-orbit of eps_0", got == ewant);
    r.add("eps_{2n-4} = 1/(1 - 2 tau)", "f-orbit of eps_0", T.eps[2 * n - 4] == S.b2());
    bool alpha_ok = static_cast<int>(T.alpha.size()) == 2 * n - 3;
    for (int i = 1; alpha_ok && i <= 2 * n - 3; ++i)
        alpha_ok = T.alpha[i - 1] == T.eps[2 * n - 3 - i];
    r.add("alpha_i = eps_{2n-3-i}, alpha_{2n-3} = eps_0", "backwards orbit of 0", alpha_ok);
    bool inter = true;
    for (int l = 1; l <= n - 3; ++l)
        inter = inter && T.phi[l] < T.eps[l] && T.eps[l] < T.eps[n - 2 + l] &&
                T.eps[n - 2 + l] < T.phi[n - 1 + l];
    r.add("phi_l < eps_l < eps_{n-2+l} < phi_{n-1+l}", "interleaving", inter);
    r.add("phi_0 < eps_0 < phi_{n-1}", "interleaving",
          T.phi[0] < S.eps0() && S.eps0() < T.phi[n - 1]);
    return r;
}

Report product_relations_check(const System &S, const OrbitTables &T) {
    Report r;
    int n = S.n();
    FieldElement one(S.field(), 1L);
    auto prod = [&](int i, int j) { return T.phi[i] * T.phi[j] == one; };
    if (n % 2 == 0) {
        int h = n / 2 - 1;
        for (int j = 0; j <= h; ++j)
            r.add("phi_" + std::to_string(h - j) + " phi_" + std::to_string(h + j) + " = 1",
                  "even product relation", prod(h - j, h + j));
        for (int j = 0; j <= (n - 2) / 2 - 1; ++j)
            r.add("phi_" + std::to_string(n - 1 + j) + " phi_" + std::to_string(2 * n - 4 - j) +
                      " = 1",
                  "even complementary product relation", prod(n - 1 + j, 2 * n - 4 - j));
    } else {
        int m = (n - 3) / 2;
        int c = 3 * m + 2;
        for (int j = 0; j <= m; ++j)
            r.add("phi_" + std::to_string(c - j) + " phi_" + std::to_string(c + j) + " = 1",
                  "odd product relation", prod(c - j, c + j));
        for (int j = 0; j <= m; ++j)
            r.add("phi_" + std::to_string(j) + " phi_" + std::to_string(n - 2 - j) + " = 1",
                  "odd product relation", prod(j, n - 2 - j));
    }
    return r;
}

Report cylinder_check(const System &S, int depth) {
    Report r;
    FieldPtr F = S.field();
    FieldElement zero(F);
    bool full = true;
    for (Digit k = 2; k <= depth; ++k) {
        auto [lo, hi] = S.g_cylinder(k);
        full = full && act(S, k, lo) == S.minus_tau() && act(S, k, hi).is_zero();
        if (k > 2)
            full = full && S.g_cylinder(k - 1).second == lo;
    }
    r.add("Delta_k, k >= 2, map onto [-tau, 0)", "full cylinders", full);
    r.add("g(Delta_1) = [phi_1, 0)", "slow map image",
          act(S, 1, S.minus_tau()) == 1 - S.tau() + S.tau().inverse() && act(S, 1, S.b1()).is_zero());
    bool accel = S.f_cylinder(-1).second == S.eps0();
    for (Digit j = 1; j <= depth; ++j) {
        auto [lo, hi] = S.f_cylinder(-j);
        accel = accel && act(S, -j, lo) == S.eps0() && act(S, -j, hi).is_zero();
        accel = accel && S.f_cylinder(-j - 1).second == lo;
        accel = accel && j_of(S, lo) == j;
        if (j > 1)
            accel = accel && j_of(S, S.f_cylinder(-(j - 1)).first) == j - 1;
    }
    r.add("W^j maps the j-th acceleration cylinder onto [eps_0, 0)", "acceleration cylinders", accel);
    return r;
}

}
