#include "tcf/dioph.hpp"

#include "tcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tcf {

FieldElement theta_fn(const PlanarPoint &p) {
    FieldElement den = 1 + p.x * p.y;
    if (den.is_zero())
        throw DomainError("theta is undefined on the hyperbola 1 + xy = 0");
    return -(p.x / den);
}

double theta_fn(double x, double y) {
    double den = 1 + x * y;
    if (den == 0)
        throw DomainError("theta is undefined on the hyperbola 1 + xy = 0");
    return -x / den;
}

QuadElement theta_fn(const QuadElement &x, const QuadElement &y) {
    QuadElement den = x * y + FieldElement(x.quad()->F, 1L);
    if (den.is_zero())
        throw DomainError("theta is undefined on the hyperbola 1 + xy = 0");
    return -(x / den);
}

FieldElement theta_sup(const GammaSystem &G) {
    std::optional<FieldElement> best;
    for (const Rect &r : G.gamma().rects) {
        FieldElement v = theta_fn(PlanarPoint{r.x1, r.y2});
        if (!best || *best < v)
            best = v;
    }
    return *best;
}

bool danger_region_contains(const GammaSystem &G, const PlanarPoint &p) {
    if (!contains(G.gamma(), p))
        return false;
    const FieldElement &tau = G.system().tau();
    if (!(tau < theta_fn(p)))
        return false;
    return tau < theta_fn(G.inverse(p));
}

bool danger_curves_contain(const System &S, const PlanarPoint &p) {
    if (p.x.is_zero())
        return false;
    const FieldElement &tau = S.tau();
    FieldElement c1 = -(p.x.inverse()) - tau.inverse();
    FieldElement c2 = tau / (1 - tau * p.x);
    return c1 < p.y && c2 < p.y;
}

BorelScan borel_scan(const System &S, const Expansion &e, long M, double tolerance) {
    const int n = S.n();
    const double tau = S.tau().to_double();
    const double bound = tau + tolerance;
    const auto &th = e.theta;
    const long avail = static_cast<long>(th.size());
    if (!e.cusp && avail < M + n)
        throw DomainError("borel_scan needs Theta_0 .. Theta_{M+n-1}");
    BorelScan r;
    r.n = n;
    r.M = M;
    r.tolerance = tolerance;
    for (long m = 1; m <= M && m + n - 1 < avail; ++m) {
        double w = th[m - 1];
        for (long i = m; i <= m + n - 1; ++i)
            w = std::min(w, th[i]);
        r.window_min.push_back(w);
        r.max_window_min = std::max(r.max_window_min, w);
        if (w > bound) {
            if (r.violations++ == 0)
                r.first_violation = m;
        }
    }
    long run = 0;
    for (long m = 0; m < std::min(avail, M + n); ++m) {
        r.max_theta = std::max(r.max_theta, th[m]);
        if (th[m] > bound) {
            if (++run > r.longest_run) {
                r.longest_run = run;
                r.run_start = m - run + 1;
            }
        } else {
            run = 0;
        }
    }
    const double tie = 1e-9;
    long drun = 0;
    for (long m = 0; m <= M && m < avail; ++m) {
        bool in = m >= 1 && th[m - 1] > tau && th[m] > tau;
        r.danger.push_back(in ? 1 : 0);
        drun = in ? drun + 1 : 0;
        if (drun > r.longest_danger_run) {
            r.longest_danger_run = drun;
            r.danger_run_start = m - drun + 1;
        }
        if (m == 0 || e.digits[m - 1] < 1)
            continue;
        if (std::fabs(th[m - 1] - tau) < tie || std::fabs(th[m] - tau) < tie)
            continue;
        double x = e.t[m], y = e.v[m];
        if (x == 0)
            continue;
        bool curves = y > -1 / x - 1 / tau && y > tau / (1 - tau * x);
        if (curves != in)
            ++r.danger_mismatches;
    }
    return r;
}

ThetaAgreement theta_agreement(const Expansion &e) {
    auto rel = [](double a, double b) {
        double s = std::max(std::fabs(a), std::fabs(b));
        return s == 0 ? 0.0 : std::fabs(a - b) / s;
    };
    ThetaAgreement a;
    for (size_t m = 0; m < e.theta.size(); ++m) {
        if (!std::isnan(e.theta_direct[m]))
            a.direct = std::max(a.direct, rel(e.theta[m], e.theta_direct[m]));
        if (!std::isnan(e.theta_bis[m]))
            a.bis = std::max(a.bis, rel(e.theta[m], e.theta_bis[m]));
    }
    return a;
}

namespace {

Mobius power(const Mobius &M, int e) {
    Mobius r = Mobius::identity(M.field());
    for (int i = 0; i < e; ++i)
        r = M * r;
    return r;
}

// Follows the given digits exactly from (x, y); returns false if a digit disagrees.
bool follow(const System &S, const std::vector<Digit> &digits, QuadElement &x, QuadElement &y,
            std::vector<QuadElement> *theta) {
    for (Digit k : digits) {
        if (theta)
            theta->push_back(theta_fn(x, y));
        if (x.sign() >= 0 || compare(x, S.minus_tau()) < 0 || cylinder_of_f(S, x) != k)
            return false;
        x = tcf::apply(S.matrix(k), x);
        y = tcf::apply(S.y_matrix(k), y);
    }
    return true;
}

}

PeriodicPoint periodic_point(const System &S, int j) {
    if (j < 1)
        throw DomainError("periodic_point needs j >= 1");
    const int n = S.n();
    // Digits act left to right in time, so the first digit is the rightmost factor.
    PeriodicPoint P{.j = j, .G = power(S.matrix(1), n - 3) * S.matrix(-j) * S.matrix(2)};
    P.digits.push_back(2);
    P.digits.push_back(-j);
    for (int i = 0; i < n - 3; ++i)
        P.digits.push_back(1);
    auto [r1, r2] = fixed_points(P.G);
    P.Q = r1.quad();
    const FieldElement &c = P.G.c(), &d = P.G.d();
    std::optional<QuadElement> chosen, other;
    for (const auto &[x, xc] : {std::pair{r1, r2}, std::pair{r2, r1}}) {
        if (x.sign() >= 0 || compare(x, S.minus_tau()) < 0 || cylinder_of_f(S, x) != 2)
            continue;
        // Forward iteration expands, so x_j repels under G: |c x + d| < 1.
        QuadElement cxd = c * x + d;
        if (compare(cxd * cxd, FieldElement(S.field(), 1L)) >= 0)
            continue;
        chosen = x;
        other = xc;
    }
    if (!chosen)
        throw ConsistencyError("no repelling fixed point of M_1^(n-3) W^j M_2 in the cylinder of 2");
    P.x = *chosen;
    P.y = -(other->inverse());
    QuadElement x = P.x, y = P.y;
    if (!follow(S, P.digits, x, y, &P.theta))
        throw ConsistencyError("P_j does not follow the digits 2, -j, 1^(n-3)");
    if (!(x == P.x) || !(y == P.y))
        throw ConsistencyError("T^(n-1) P_j differs from P_j");
    return P;
}

std::vector<FieldElement> min_poly_over_K(const PeriodicPoint &P) {
    // c x^2 + (d - a) x - b = 0.
    const Mobius &G = P.G;
    FieldElement ci = G.c().inverse();
    return {-(G.b() * ci), (G.d() - G.a()) * ci, FieldElement(G.field(), 1L)};
}

ConvergenceReport convergence_check(const Expansion &e, double target) {
    ConvergenceReport r;
    r.target = target;
    r.steps = e.length();
    const double log_target = std::log(target);
    std::vector<double> ms, logs;
    double last = 0;
    for (size_t m = 0; m < e.theta.size(); ++m) {
        double th = std::isnan(e.theta_direct[m]) ? e.theta[m] : e.theta_direct[m];
        if (th <= 0)
            break;
        double le = std::log(th) - 2 * e.log_q[m];
        last = le;
        if (r.first_below < 0 && le < log_target)
            r.first_below = static_cast<long>(m);
        ms.push_back(static_cast<double>(m));
        logs.push_back(le);
        if (m >= 1) {
            double v = std::fabs(e.v[m]);
            r.max_q_ratio = std::max(r.max_q_ratio, v);
            if (r.non_monotone_witness < 0 && v > 1)
                r.non_monotone_witness = static_cast<long>(m);
            double ratio = std::fabs(e.t[m] * e.v[m]);
            if (e.digits[m - 1] >= 1)
                r.max_slow_ratio = std::max(r.max_slow_ratio, ratio);
            else
                r.max_accel_ratio = std::max(r.max_accel_ratio, ratio);
        }
        if (m + 1 < e.v.size() && e.v[m + 1] != 0)
            r.c_empirical = std::max(r.c_empirical, e.theta[m] / std::fabs(e.v[m + 1]));
    }
    r.final_error = std::exp(last);
    r.delta = 1 - r.max_slow_ratio;
    if (ms.size() >= 2) {
        double mx = 0, my = 0;
        for (size_t i = 0; i < ms.size(); ++i) {
            mx += ms[i];
            my += logs[i];
        }
        mx /= static_cast<double>(ms.size());
        my /= static_cast<double>(ms.size());
        double sxy = 0, sxx = 0;
        for (size_t i = 0; i < ms.size(); ++i) {
            sxy += (ms[i] - mx) * (logs[i] - my);
            sxx += (ms[i] - mx) * (ms[i] - mx);
        }
        r.fitted_rate = std::exp(sxy / sxx);
    }
    return r;
}

TranscendenceResult transcendence_indicator(const std::vector<double> &log_q, int d, double margin) {
    if (d < 1)
        throw DomainError("degree must be positive");
    std::vector<std::pair<long, double>> usable;
    for (size_t m = 1; m < log_q.size(); ++m)
        if (log_q[m] > 0 && std::isfinite(log_q[m]))
            usable.emplace_back(static_cast<long>(m), log_q[m]);
    if (usable.size() < 10)
        throw DomainError("transcendence indicator needs at least 10 convergents with q_m > 1");
    TranscendenceResult r;
    r.margin = margin;
    r.threshold = std::log(2.0 * d - 1);
    r.statistic = -std::numeric_limits<double>::infinity();
    for (size_t i = usable.size() / 2; i < usable.size(); ++i) {
        auto [m, lq] = usable[i];
        r.statistic = std::max(r.statistic, std::log(lq) / static_cast<double>(m));
        ++r.used;
    }
    r.flagged = r.statistic > r.threshold + margin;
    return r;
}

std::vector<double> parse_q_history(const std::string &text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            continue;
        auto e = line.find_last_not_of(" \t\r");
        std::string s = line.substr(b, e - b + 1);
        auto bad = [&]() { return DomainError("q history line " + std::to_string(lineno) + ": cannot parse '" + s + "'"); };
        if (s.rfind("ln:", 0) == 0) {
            size_t used = 0;
            double v;
            try {
                v = std::stod(s.substr(3), &used);
            } catch (const std::exception &) {
                throw bad();
            }
            if (used != s.size() - 3)
                throw bad();
            out.push_back(v);
            continue;
        }
        mpfr_t q, l;
        mpfr_inits2(128, q, l, (mpfr_ptr)nullptr);
        char *end = nullptr;
        mpfr_strtofr(q, s.c_str(), &end, 10, MPFR_RNDN);
        bool ok = end && *end == '\0';
        double v = 0;
        if (ok) {
            mpfr_abs(q, q, MPFR_RNDN);
            mpfr_log(l, q, MPFR_RNDN);
            v = mpfr_get_d(l, MPFR_RNDN);
        }
        mpfr_clears(q, l, (mpfr_ptr)nullptr);
        if (!ok)
            throw bad();
        out.push_back(v);
    }
    return out;
}

}
