#include "tcf/ergodic.hpp"

#include "tcf/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace tcf {

Admissibility is_admissible(int n, const DigitWord &w) {
    if (n < 4)
        throw DomainError("admissibility needs n >= 4");
    const long L = static_cast<long>(w.size());
    auto fail = [](int rule, long i) { return Admissibility{false, rule, i}; };
    // ones: length of the current run of 1s.
    // after: run of 1s following a maximal 1^{n-2} 2, or -1 if not in that pattern.
    long ones = 0, after = -1;
    for (long i = 0; i < L; ++i) {
        Digit d = w[i];
        if (d == 0)
            return fail(0, i);
        if (d < 0 && i > 0 && w[i - 1] <= 1)
            return fail(1, i);
        if (d == 1) {
            if (++ones > n - 2)
                return fail(2, i);
            if (after >= 0 && ++after > n - 3)
                return fail(3, i);
        } else {
            if (after == 0 && d < 0)
                return fail(5, i);
            if (after == n - 3 && d < 3)
                return fail(4, i);
            after = (d == 2 && ones == n - 2) ? 0 : -1;
            ones = 0;
        }
    }
    return {};
}

CylinderAutomaton::CylinderAutomaton(const System &S) : S_(S) {
    intern(S.minus_tau(), FieldElement(S.field(), 0L));
}

int CylinderAutomaton::intern(const FieldElement &lo, const FieldElement &hi) {
    for (size_t i = 0; i < states_.size(); ++i)
        if (states_[i].first == lo && states_[i].second == hi)
            return static_cast<int>(i);
    states_.emplace_back(lo, hi);
    return static_cast<int>(states_.size() - 1);
}

int CylinderAutomaton::next(int state, Digit d) {
    if (state < 0)
        return -1;
    auto key = std::make_pair(state, d);
    auto it = edges_.find(key);
    if (it != edges_.end())
        return it->second;
    auto [clo, chi] = S_.f_cylinder(d);
    const auto &[slo, shi] = states_.at(static_cast<size_t>(state));
    FieldElement lo = clo < slo ? slo : clo;
    FieldElement hi = chi < shi ? chi : shi;
    int r = -1;
    if (lo < hi) {
        Mobius M = S_.matrix(d);
        FieldElement a = apply(M, lo), b = apply(M, hi);
        if (!(a < b))
            throw ConsistencyError("branch is not increasing on its cylinder");
        r = intern(a, b);
    }
    edges_.emplace(key, r);
    return r;
}

bool CylinderAutomaton::accepts(const DigitWord &w) {
    int s = start;
    for (Digit d : w)
        if ((s = next(s, d)) < 0)
            return false;
    return true;
}

ObservedWords observed_words(int n, const std::vector<std::vector<Digit>> &orbits, int L) {
    ObservedWords r;
    r.length = L;
    for (size_t o = 0; o < orbits.size(); ++o) {
        const auto &d = orbits[o];
        for (size_t i = 0; i + static_cast<size_t>(L) <= d.size(); ++i) {
            DigitWord w(d.begin() + static_cast<long>(i), d.begin() + static_cast<long>(i) + L);
            ++r.occurrences;
            if (!is_admissible(n, w).ok) {
                if (r.inadmissible++ == 0) {
                    r.witness = w;
                    r.witness_orbit = static_cast<long>(o);
                    r.witness_step = static_cast<long>(i);
                }
            }
            r.words.insert(std::move(w));
        }
    }
    return r;
}

double branch_derivative(const System &S, Digit k, double x) {
    if (k >= 1)
        return 1 / (x * x);
    // W^j = [[1 + j tau^2, j tau^3], [-j tau, 1 - j tau^2]].
    const double tau = S.tau().to_double();
    const double j = static_cast<double>(-k);
    double den = -j * tau * x + 1 - j * tau * tau;
    return 1 / (den * den);
}

std::optional<InducedRecord> induced_step_Y(const System &S, const Expansion &e, long m0) {
    const long L = static_cast<long>(e.digits.size());
    if (m0 < 0 || m0 >= L || e.digits[m0] < 3)
        return std::nullopt;
    InducedRecord r;
    r.y = e.t[m0];
    for (long m = m0; m < L; ++m) {
        if (m > m0 && e.digits[m] >= 3) {
            r.m = m - m0;
            return r;
        }
        r.word.push_back(e.digits[m]);
        r.log_derivative += std::log(branch_derivative(S, e.digits[m], e.t[m]));
    }
    return std::nullopt;
}

AdlerReport adler_experiment(const System &S, long samples, std::uint64_t seed, long max_steps, long precision_cap) {
    AdlerReport r;
    r.min_log_derivative = std::numeric_limits<double>::infinity();
    r.return_histogram.assign(65, 0);
    const FieldElement &b2 = S.b2();
    const double b2d = b2.to_double();
    for (std::uint64_t i = 0; r.samples < samples; ++i) {
        PointSource src = PointSource::random(S.field(), seed, i);
        Interval x = src.enclose(64);
        // Keep the sample only if it lies in Y = [b2, 0); near-boundary cases are decided exactly.
        if (x.hi_d() < b2d)
            continue;
        if (x.lo_d() < b2d) {
            Interval b = b2.enclose(200), xx = src.enclose(200);
            if (mpfr_cmp(xx.hi(), b.lo()) < 0)
                continue;
            if (mpfr_cmp(xx.lo(), b.hi()) < 0) {
                ++r.skipped;
                continue;
            }
        }
        ExpandOptions o;
        o.steps = max_steps;
        o.precision_cap = precision_cap;
        o.direct = false;
        o.stop = [](const Expansion &e) { return e.digits.size() > 1 && e.digits.back() >= 3; };
        Expansion e = expand(S, src, o);
        std::optional<InducedRecord> rec = induced_step_Y(S, e, 0);
        if (!rec) {
            ++r.skipped;
            continue;
        }
        ++r.samples;
        r.max_return = std::max(r.max_return, rec->m);
        ++r.return_histogram[static_cast<size_t>(std::min<long>(rec->m, 64))];
        r.min_log_derivative = std::min(r.min_log_derivative, rec->log_derivative);
    }
    r.min_derivative = std::exp(r.min_log_derivative);
    return r;
}

namespace {

FieldElement fmax(const FieldElement &a, const FieldElement &b) { return a < b ? b : a; }
FieldElement fmin(const FieldElement &a, const FieldElement &b) { return a < b ? a : b; }

}

UniformReport uniform_distribution_experiment(const GammaSystem &G, const std::vector<long> &checkpoints,
                                              std::uint64_t seed, long orbit_length, int rows, int cols,
                                              int birkhoff_parts, long precision_cap) {
    const System &S = G.system();
    const FieldPtr &F = S.field();
    if (checkpoints.empty() || orbit_length < 1 || rows < 1 || cols < 1 || birkhoff_parts < 1)
        throw DomainError("uniform distribution experiment needs checkpoints and positive sizes");
    UniformReport r;
    r.n = S.n();
    r.seed = seed;
    r.orbit_length = orbit_length;

    // Grid over the bounding box of Gamma with rational lines.
    const auto &rects = G.gamma().rects;
    FieldElement y_top = rects.front().y2;
    for (const Rect &q : rects)
        y_top = fmax(y_top, q.y2);
    const double tau = S.tau().to_double(), ytop = y_top.to_double();
    // Rational grid lines just outside the box, so every cell edge is exact.
    mpq_class x0(-static_cast<long>(std::ceil(tau * 1024)), 1024), y1(static_cast<long>(std::ceil(ytop * 1024)), 1024);
    std::vector<FieldElement> xs, ys;
    std::vector<double> xd, yd;
    for (int i = 0; i <= cols; ++i) {
        mpq_class v = x0 - x0 * i / cols;
        xs.emplace_back(F, v);
        xd.push_back(v.get_d());
    }
    for (int i = 0; i <= rows; ++i) {
        mpq_class v = y1 * i / rows;
        ys.emplace_back(F, v);
        yd.push_back(v.get_d());
    }
    double total = mu_region(G.gamma()).mid_d();
    for (int i = 0; i < cols; ++i)
        for (int j = 0; j < rows; ++j) {
            UniformCell c;
            c.box = Rect{xs[i], xs[i + 1], ys[j], ys[j + 1]};
            double m = 0;
            for (const Rect &q : rects) {
                Rect s{fmax(q.x1, c.box.x1), fmin(q.x2, c.box.x2), fmax(q.y1, c.box.y1), fmin(q.y2, c.box.y2)};
                if (s.x1 < s.x2 && s.y1 < s.y2)
                    m += mu_rect(s).mid_d();
            }
            c.mass = m / total;
            r.cells.push_back(std::move(c));
        }

    Marginal nu(G);
    for (int p = 0; p < birkhoff_parts; ++p) {
        BirkhoffInterval b;
        b.a = -tau + tau * p / birkhoff_parts;
        b.b = p + 1 == birkhoff_parts ? 0.0 : -tau + tau * (p + 1) / birkhoff_parts;
        b.nu = nu.mass(b.a, b.b);
        r.birkhoff.push_back(b);
    }
    std::vector<long> bhits(static_cast<size_t>(birkhoff_parts), 0);
    std::vector<std::array<double, 4>> rd;
    for (const Rect &q : rects)
        rd.push_back({q.x1.to_double(), q.x2.to_double(), q.y1.to_double(), q.y2.to_double()});

    std::vector<long> cps = checkpoints;
    std::sort(cps.begin(), cps.end());
    const long N = cps.back();
    long seen = 0;
    size_t next_cp = 0;
    auto record = [&](long at) {
        DiscrepancyPoint d;
        d.N = at;
        for (size_t c = 0; c < r.cells.size(); ++c) {
            double dev = std::fabs(static_cast<double>(r.cells[c].hits) / static_cast<double>(at) - r.cells[c].mass);
            if (dev > d.max_discrepancy) {
                d.max_discrepancy = dev;
                d.worst_cell = static_cast<long>(c);
            }
        }
        r.discrepancy.push_back(d);
    };
    for (std::uint64_t o = 0; seen < N; ++o) {
        ExpandOptions opt;
        opt.steps = orbit_length;
        opt.precision_cap = precision_cap;
        opt.direct = false;
        Expansion e = expand(S, PointSource::random(F, seed, o), opt);
        ++r.orbits;
        for (long m = 0; m < orbit_length && m < static_cast<long>(e.t.size()) && seen < N; ++m) {
            double t = e.t[m], v = e.v[m];
            auto ci = std::upper_bound(xd.begin(), xd.end(), t) - xd.begin() - 1;
            auto ri = std::upper_bound(yd.begin(), yd.end(), v) - yd.begin() - 1;
            if (ci < 0 || ci >= cols || ri < 0 || ri >= rows)
                ++r.outside_gamma;
            else {
                ++r.cells[static_cast<size_t>(ci * rows + ri)].hits;
                bool in = false;
                for (const auto &q : rd)
                    if (q[0] <= t && t <= q[1] && q[2] <= v && v <= q[3]) {
                        in = true;
                        break;
                    }
                r.outside_gamma += !in;
            }
            auto bi = static_cast<long>(std::floor((t + tau) / tau * birkhoff_parts));
            ++bhits[static_cast<size_t>(std::clamp<long>(bi, 0, birkhoff_parts - 1))];
            ++seen;
            while (next_cp < cps.size() && cps[next_cp] == seen)
                record(cps[next_cp++]);
        }
    }
    for (int p = 0; p < birkhoff_parts; ++p) {
        auto &b = r.birkhoff[static_cast<size_t>(p)];
        b.average = static_cast<double>(bhits[static_cast<size_t>(p)]) / static_cast<double>(N);
        r.max_birkhoff_error = std::max(r.max_birkhoff_error, std::fabs(b.average - b.nu));
    }
    return r;
}

}
