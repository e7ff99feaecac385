#include "tcf/planar.hpp"

#include "tcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tcf {

namespace {

const FieldElement &fmax(const FieldElement &a, const FieldElement &b) { return a < b ? b : a; }
const FieldElement &fmin(const FieldElement &a, const FieldElement &b) { return a < b ? a : b; }

Rect map_rect(const Mobius &M, const Mobius &N, const Rect &r) {
    Rect out{tcf::apply(M, r.x1), tcf::apply(M, r.x2), tcf::apply(N, r.y1), tcf::apply(N, r.y2)};
    if (!(out.x1 < out.x2) || !(out.y1 < out.y2))
        throw ConsistencyError("piece image is not an increasing rectangle");
    return out;
}

std::string rect_str(const Rect &r) {
    std::ostringstream os;
    os << "[" << r.x1.to_double() << ", " << r.x2.to_double() << ") x [" << r.y1.to_double() << ", "
       << r.y2.to_double() << "]";
    return os.str();
}

struct Cylinder {
    FieldElement lo, hi;
    Digit digit; // 0 marks a tail
    std::string tail;
};

// Cut every rectangle along the cylinders and map the finite-digit pieces.
Tiling cut_and_map(const System &S, const PlanarRegion &R, const std::vector<Cylinder> &cyl,
                   const std::vector<TailPiece> &tail_templates) {
    Tiling t;
    std::vector<bool> tail_seen(tail_templates.size(), false);
    for (const Rect &r : R.rects) {
        for (const Cylinder &c : cyl) {
            const FieldElement &lo = fmax(r.x1, c.lo);
            const FieldElement &hi = fmin(r.x2, c.hi);
            if (!(lo < hi))
                continue;
            Rect piece{lo, hi, r.y1, r.y2};
            if (c.digit != 0) {
                t.pieces.push_back({piece, c.digit, map_rect(S.matrix(c.digit), S.y_matrix(c.digit), piece)});
                continue;
            }
            size_t i = 0;
            while (i < tail_templates.size() && tail_templates[i].what != c.tail)
                ++i;
            const TailPiece &tp = tail_templates.at(i);
            if (piece.x1 != tp.src.x1 || piece.x2 != tp.src.x2 || piece.y1 != tp.src.y1 ||
                piece.y2 != tp.src.y2)
                throw ConsistencyError(R.name + ": tail " + c.tail + " meets " + rect_str(piece));
            tail_seen[i] = true;
        }
    }
    for (size_t i = 0; i < tail_templates.size(); ++i) {
        if (!tail_seen[i])
            throw ConsistencyError(R.name + ": tail " + tail_templates[i].what + " not found");
        t.tails.push_back(tail_templates[i]);
    }
    return t;
}

std::vector<Cylinder> g_cylinders(const System &S, int K) {
    std::vector<Cylinder> c;
    for (Digit k = 1; k <= K; ++k) {
        auto [lo, hi] = S.g_cylinder(k);
        c.push_back({lo, hi, k, {}});
    }
    c.push_back({S.g_cylinder(K).second, FieldElement(S.field()), 0, "digits > K"});
    return c;
}

TailPiece digit_tail(const System &S, int K) {
    FieldPtr F = S.field();
    FieldElement zero(F);
    Rect src{S.g_cylinder(K).second, zero, zero, S.tau()};
    Rect img{S.minus_tau(), zero, zero, (S.tau() * static_cast<long>(K) - 1).inverse()};
    return {"digits > K", src, img};
}

size_t find_value(const std::vector<FieldElement> &v, const FieldElement &x) {
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] == x)
            return i;
    throw ConsistencyError("breakpoint missing");
}

void push_unique(std::vector<FieldElement> &v, const FieldElement &x) {
    for (const auto &e : v)
        if (e == x)
            return;
    v.push_back(x);
}

struct Grid {
    std::vector<FieldElement> xs, ys;
    size_t nx() const { return xs.size() - 1; }
    size_t ny() const { return ys.size() - 1; }
};

Grid make_grid(const std::vector<const std::vector<Rect> *> &sets) {
    Grid g;
    for (const auto *s : sets)
        for (const Rect &r : *s) {
            push_unique(g.xs, r.x1);
            push_unique(g.xs, r.x2);
            push_unique(g.ys, r.y1);
            push_unique(g.ys, r.y2);
        }
    auto less = [](const FieldElement &a, const FieldElement &b) { return compare(a, b) < 0; };
    std::sort(g.xs.begin(), g.xs.end(), less);
    std::sort(g.ys.begin(), g.ys.end(), less);
    return g;
}

std::vector<int> coverage(const Grid &g, const std::vector<Rect> &rs) {
    std::vector<int> c(g.nx() * g.ny(), 0);
    for (const Rect &r : rs) {
        size_t i1 = find_value(g.xs, r.x1), i2 = find_value(g.xs, r.x2);
        size_t j1 = find_value(g.ys, r.y1), j2 = find_value(g.ys, r.y2);
        for (size_t i = i1; i < i2; ++i)
            for (size_t j = j1; j < j2; ++j)
                ++c[i * g.ny() + j];
    }
    return c;
}

std::string cell_str(const Grid &g, size_t cell) {
    size_t i = cell / g.ny(), j = cell % g.ny();
    return rect_str({g.xs[i], g.xs[i + 1], g.ys[j], g.ys[j + 1]});
}

std::vector<Rect> sources(const Tiling &t) {
    std::vector<Rect> v;
    for (const auto &p : t.pieces)
        v.push_back(p.src);
    for (const auto &p : t.tails)
        v.push_back(p.src);
    return v;
}

std::vector<Rect> images(const Tiling &t) {
    std::vector<Rect> v;
    for (const auto &p : t.pieces)
        v.push_back(p.image);
    for (const auto &p : t.tails)
        v.push_back(p.image);
    return v;
}

// (J+1) tau / ((J+1) tau^2 + 1), the bottom of the J+1-th acceleration band.
FieldElement band(const System &S, long j) {
    const FieldElement &t = S.tau();
    return t * j / (t * t * j + 1);
}

}

Heights build_heights(const System &S, const OrbitTables &T) {
    (void)T;
    const int n = S.n();
    const FieldElement &t = S.tau();
    Mobius N1 = S.y_matrix(1);
    Heights H;
    H.L.resize(static_cast<size_t>(2 * n - 4));
    H.L[0] = t.inverse();
    for (int i = 1; i <= n - 3; ++i)
        H.L[2 * i] = tcf::apply(N1, H.L[2 * i - 2]);
    H.L[1] = (t - 1).inverse();
    for (int j = 2; j <= n - 2; ++j)
        H.L[2 * j - 1] = tcf::apply(N1, H.L[2 * j - 3]);
    H.R = t;
    for (const auto &l : H.L)
        if (l.sign() <= 0)
            throw ConsistencyError("height recursion left the upper half plane");
    return H;
}

Report heights_check(const System &S, const OrbitTables &T, const Heights &H) {
    Report r;
    const int n = S.n();
    FieldPtr F = S.field();
    const FieldElement &t = S.tau();
    FieldElement one(F, 1L), zero(F);
    r.add("L_1 = 1/tau, L_2 = 1/(tau - 1), R = tau", "heights",
          H.at(1) == t.inverse() && H.at(2) == (t - 1).inverse() && H.R == t);

    bool nk = true;
    for (long k = 1; k <= 6; ++k) {
        Mobius N = S.y_matrix(k);
        nk = nk && tcf::apply(N, t) == (t * (k - 1) - 1).inverse();
        nk = nk && tcf::apply(N, zero) == (t * k - 1).inverse();
    }
    r.add("N_k tau = 1/((k-1)tau - 1) and N_k 0 = 1/(k tau - 1), k <= 6", "heights", nk);

    Mobius N1 = S.y_matrix(1), N2 = S.y_matrix(2);
    r.add("N_1^(n-2) (1/tau) = tau", "heights", tcf::apply(pow(N1, n - 2), t.inverse()) == t);
    r.add("N_2 L_(2n-4) = L_1", "heights", tcf::apply(N2, H.at(2 * n - 4)) == H.at(1));
    r.add("N_2 L_(2n-5) = tau/(tau^2 + 1)", "heights",
          tcf::apply(N2, H.at(2 * n - 5)) == t / (t * t + 1));
    r.add("L_(2n-5) = N_1^-1 tau", "heights", H.at(2 * n - 5) == tcf::apply(N1.inverse(), t));

    bool inc = true;
    for (size_t i = 0; i + 1 < H.L.size(); ++i)
        inc = inc && H.L[i] < H.L[i + 1];
    inc = inc && H.L.back() < H.R;
    r.add("L_1 < L_2 < ... < L_(2n-4) < R", "heights", inc);

    FieldElement prod = H.R;
    for (const auto &l : H.L)
        prod *= l;
    r.add("R prod L_j = 1", "heights", prod == one);

    bool corners = H.R == -T.phi[n - 2].inverse();
    for (int i = 0; i <= n - 3; ++i)
        corners = corners && H.at(2 * i + 1) == -T.phi[i].inverse();
    for (int j = 1; j <= n - 2; ++j)
        corners = corners && H.at(2 * j) == -T.phi[n - 2 + j].inverse();
    r.add("top left corners of Omega lie on y = -1/x", "heights", corners);
    return r;
}

PlanarRegion build_omega(const System &S, const OrbitTables &T, const Heights &H) {
    const int n = S.n();
    FieldElement zero(S.field());
    PlanarRegion R{"Omega", {}};
    for (int i = 0; i <= n - 3; ++i) {
        R.rects.push_back({T.phi[i], T.phi[n - 1 + i], zero, H.at(2 * i + 1)});
        R.rects.push_back({T.phi[n - 1 + i], T.phi[i + 1], zero, H.at(2 * i + 2)});
    }
    R.rects.push_back({T.phi[n - 2], zero, zero, H.R});
    return R;
}

PlanarRegion build_gamma(const System &S, const OrbitTables &T, const Heights &H) {
    const int n = S.n();
    const FieldElement &t = S.tau();
    FieldElement zero(S.field());
    const auto &e = T.eps;
    PlanarRegion R{"Gamma", {}};
    R.rects.push_back({S.minus_tau(), S.eps0(), zero, t / (t * t + 1)});
    R.rects.push_back({e[0], e[1], zero, H.at(1)});
    for (int j = 1; j <= n - 3; ++j) {
        R.rects.push_back({e[j], e[n - 2 + j], zero, H.at(2 * j - 1)});
        R.rects.push_back({e[j], e[n - 2 + j], H.at(2 * j), H.at(2 * j + 1)});
        R.rects.push_back({e[n - 2 + j], e[j + 1], zero, H.at(2 * j + 1)});
    }
    R.rects.push_back({e[n - 2], S.b2(), zero, H.at(2 * n - 5)});
    R.rects.push_back({e[n - 2], S.b2(), H.at(2 * n - 4), t});
    R.rects.push_back({S.b2(), zero, zero, t});
    return R;
}

bool contains(const Rect &r, const PlanarPoint &p) {
    return r.x1 <= p.x && p.x < r.x2 && r.y1 <= p.y && p.y <= r.y2;
}

bool contains(const PlanarRegion &R, const PlanarPoint &p) {
    for (const auto &r : R.rects)
        if (contains(r, p))
            return true;
    return false;
}

PlanarPoint S_step(const System &S, const PlanarPoint &p) {
    Digit k = cylinder_of_g(S, p.x);
    return {act(S, k, p.x), act_y(S, k, p.y)};
}

Tiling omega_tiling(const System &S, const PlanarRegion &omega, int K) {
    return cut_and_map(S, omega, g_cylinders(S, K), {digit_tail(S, K)});
}

Tiling gamma_tiling(const System &S, const PlanarRegion &gamma, int K, int J) {
    FieldPtr F = S.field();
    const FieldElement &t = S.tau();
    FieldElement zero(F);
    std::vector<Cylinder> cyl;
    FieldElement aJ = S.f_cylinder(-J).first;
    cyl.push_back({S.minus_tau(), aJ, 0, "exponents > J"});
    for (Digit j = J; j >= 1; --j) {
        auto [lo, hi] = S.f_cylinder(-j);
        cyl.push_back({lo, hi, -j, {}});
    }
    for (Digit k = 1; k <= K; ++k) {
        auto [lo, hi] = S.f_cylinder(k);
        cyl.push_back({lo, hi, k, {}});
    }
    cyl.push_back({S.g_cylinder(K).second, zero, 0, "digits > K"});
    TailPiece accel{"exponents > J",
                    {S.minus_tau(), aJ, zero, t / (t * t + 1)},
                    {S.eps0(), zero, band(S, J + 1), t.inverse()}};
    return cut_and_map(S, gamma, cyl, {accel, digit_tail(S, K)});
}

bool tiles(const std::vector<Rect> &parts, const std::vector<Rect> &whole, std::string *why) {
    Grid g = make_grid({&parts, &whole});
    std::vector<int> cp = coverage(g, parts), cw = coverage(g, whole);
    for (size_t c = 0; c < cp.size(); ++c) {
        if (cw[c] > 1 || cp[c] != cw[c]) {
            if (why)
                *why = "cell " + cell_str(g, c) + " covered " + std::to_string(cp[c]) + " times, expected " +
                       std::to_string(cw[c]);
            return false;
        }
    }
    return true;
}

bool covered_by(const std::vector<Rect> &inner, const std::vector<Rect> &outer) {
    Grid g = make_grid({&inner, &outer});
    std::vector<int> ci = coverage(g, inner), co = coverage(g, outer);
    for (size_t c = 0; c < ci.size(); ++c)
        if (ci[c] > 0 && co[c] == 0)
            return false;
    return true;
}

GammaSystem::GammaSystem(const System &S, int K, int J)
    : S_(S.field()), T_(build_orbit_tables(S_)), H_(build_heights(S_, T_)),
      omega_(build_omega(S_, T_, H_)), gamma_(build_gamma(S_, T_, H_)), K_(K), J_(J) {
    tiling_ = gamma_tiling(S_, gamma_, K_, J_);
}

PlanarPoint GammaSystem::step(const PlanarPoint &p) const {
    if (!contains(gamma_, p))
        throw DomainError("point outside Gamma");
    Digit k = cylinder_of_f(S_, p.x);
    return {act(S_, k, p.x), act_y(S_, k, p.y)};
}

Digit GammaSystem::inverse_digit(const PlanarPoint &p) const {
    if (!contains(gamma_, p))
        throw DomainError("point outside Gamma");
    for (const auto &pc : tiling_.pieces) {
        const Rect &r = pc.image;
        if (r.x1 <= p.x && p.x < r.x2 && r.y1 <= p.y && p.y < r.y2)
            return pc.digit;
    }
    if (p.y.sign() == 0)
        throw DomainError("points on y = 0 have no preimage in Gamma");
    const FieldElement &t = S_.tau();
    const TailPiece &accel = tiling_.tails[0];
    if (accel.image.x1 <= p.x && accel.image.y1 <= p.y && p.y < accel.image.y2) {
        FieldElement q = p.y / (t * (1 - t * p.y));
        return -floor(q).get_si();
    }
    if (p.y <= tiling_.tails[1].image.y2) {
        FieldElement q = (p.y.inverse() + 1) / t;
        return floor(q).get_si() + 1;
    }
    // Upper boundaries of the finite images.
    for (const auto &pc : tiling_.pieces) {
        const Rect &r = pc.image;
        if (r.x1 <= p.x && p.x < r.x2 && r.y1 <= p.y && p.y <= r.y2)
            return pc.digit;
    }
    throw ConsistencyError("no preimage band found");
}

PlanarPoint GammaSystem::inverse(const PlanarPoint &p) const {
    Digit k = inverse_digit(p);
    return {tcf::apply(S_.matrix(k).inverse(), p.x), tcf::apply(S_.y_matrix(k).inverse(), p.y)};
}

Interval mu_rect(const Rect &r, long bits) {
    if (r.x1 == r.x2 || r.y1 == r.y2)
        return Interval::from_si(0, static_cast<mpfr_prec_t>(bits));
    FieldElement f11 = 1 + r.x1 * r.y1, f22 = 1 + r.x2 * r.y2;
    FieldElement f12 = 1 + r.x1 * r.y2, f21 = 1 + r.x2 * r.y1;
    if (f11.sign() <= 0 || f22.sign() <= 0 || f12.sign() <= 0 || f21.sign() <= 0)
        throw DomainError("rectangle meets the curve 1 + xy = 0: " + rect_str(r));
    FieldElement ratio = f11 * f22 / (f12 * f21);
    return log(ratio.enclose(bits));
}

Interval mu_region(const PlanarRegion &R, long bits) {
    std::vector<Interval> v;
    for (const auto &r : R.rects)
        v.push_back(mu_rect(r, bits));
    if (v.empty())
        return Interval::from_si(0, static_cast<mpfr_prec_t>(bits));
    // Pairwise tree sum.
    while (v.size() > 1) {
        std::vector<Interval> next;
        for (size_t i = 0; i + 1 < v.size(); i += 2)
            next.push_back(v[i] + v[i + 1]);
        if (v.size() % 2)
            next.push_back(v.back());
        v = std::move(next);
    }
    return v[0];
}

FieldElement hyperbola_gap(const PlanarRegion &R) {
    FieldElement best;
    bool first = true;
    for (const auto &r : R.rects) {
        for (const FieldElement *x : {&r.x1, &r.x2})
            for (const FieldElement *y : {&r.y1, &r.y2}) {
                FieldElement v = 1 + *x * *y;
                if (first || v < best)
                    best = v;
                first = false;
            }
    }
    return best;
}

DivergenceResult omega_divergence(const System &S, const Heights &H, double target) {
    FieldPtr F = S.field();
    FieldElement zero(F);
    DivergenceResult res{0, 0.0};
    Interval sum = Interval::from_si(0, 128);
    mpq_class hi(1, 2);
    while (sum.lo_d() <= target) {
        mpq_class lo = hi / 2;
        Rect r{S.minus_tau() + FieldElement(F, lo), S.minus_tau() + FieldElement(F, hi), zero, H.at(1)};
        sum = sum + mu_rect(r, 96);
        ++res.rectangles;
        hi = lo;
        if (res.rectangles > 100000)
            break;
    }
    res.sum = sum.mid_d();
    return res;
}

Report verify_bijectivity(const System &S, int K, int J) {
    Report r;
    const int n = S.n();
    FieldPtr F = S.field();
    const FieldElement &t = S.tau();
    FieldElement zero(F);
    OrbitTables T = build_orbit_tables(S);
    Heights H = build_heights(S, T);
    r.append(heights_check(S, T, H));

    PlanarRegion omega = build_omega(S, T, H), gamma = build_gamma(S, T, H);
    std::string why;

    bool ok = tiles(omega.rects, omega.rects, &why);
    r.add("Omega rectangles are disjoint", "Omega", ok, why);

    Tiling to = omega_tiling(S, omega, K);
    ok = tiles(sources(to), omega.rects, &why);
    r.add("cylinder pieces tile Omega", "S tiling", ok, ok ? "" : why);
    ok = tiles(images(to), omega.rects, &why);
    r.add("S-images of the pieces tile Omega", "S tiling", ok, ok ? "" : why);

    ok = tiles(gamma.rects, gamma.rects, &why);
    r.add("Gamma rectangles are disjoint", "Gamma", ok, ok ? "" : why);
    Tiling tg = gamma_tiling(S, gamma, K, J);
    ok = tiles(sources(tg), gamma.rects, &why);
    r.add("cylinder pieces tile Gamma", "T tiling", ok, ok ? "" : why);
    ok = tiles(images(tg), gamma.rects, &why);
    r.add("T-images of the pieces tile Gamma", "T tiling", ok, ok ? "" : why);

    bool tails = true;
    std::string tail_detail;
    for (const auto &tl : to.tails)
        tg.tails.push_back(tl);
    for (const auto &tl : tg.tails) {
        Interval d = mu_rect(tl.src, 128) - mu_rect(tl.image, 128);
        bool eq = std::fabs(d.lo_d()) < 1e-30 && std::fabs(d.hi_d()) < 1e-30;
        tails = tails && eq;
        if (!eq)
            tail_detail += tl.what + " ";
    }
    r.add("tail pieces carry equal mu-mass to their images", "tails", tails, tail_detail);

    bool bands = true;
    Rect accel_src{zero, zero, zero, t / (t * t + 1)};
    for (long j = 1; j <= J; ++j) {
        Mobius Nj = S.y_matrix(-j);
        bands = bands && tcf::apply(Nj, zero) == band(S, j);
        bands = bands && tcf::apply(Nj, accel_src.y2) == band(S, j + 1);
        auto [lo, hi] = S.f_cylinder(-j);
        Mobius Wj = S.matrix(-j);
        bands = bands && tcf::apply(Wj, lo) == S.eps0() && tcf::apply(Wj, hi).is_zero();
    }
    r.add("acceleration bands: W^j maps its cylinder onto [eps_0, 0), heights j tau/(j tau^2 + 1)",
          "acceleration bands", bands);

    r.add("Gamma is contained in Omega", "Gamma", covered_by(gamma.rects, omega.rects));
    r.add("(phi_0, L_1) is outside Gamma", "Gamma", !contains(gamma, {T.phi[0], H.at(1)}));
    FieldElement gap = hyperbola_gap(gamma);
    r.add("Gamma is bounded away from y = -1/x", "Gamma", gap.sign() > 0,
          "min 1 + xy = " + std::to_string(gap.to_double()));
    const Rect &first = gamma.rects.front(), &last = gamma.rects.back();
    r.add("Gamma slabs at both ends", "Gamma",
          first.x1 == S.minus_tau() && first.x2 == S.eps0() && first.y2 == t / (t * t + 1) &&
              last.x1 == S.b2() && last.x2.is_zero() && last.y2 == t);
    (void)n;
    return r;
}

Marginal::Marginal(const GammaSystem &G) {
    const System &S = G.system();
    for (const auto &r : G.gamma().rects) {
        rects_.push_back({r.x1.to_double(), r.x2.to_double(), r.y1.to_double(), r.y2.to_double()});
        breaks_.push_back(r.x1.to_double());
        breaks_.push_back(r.x2.to_double());
    }
    std::sort(breaks_.begin(), breaks_.end());
    breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
    tau_ = S.tau().to_double();
    eps0_ = S.eps0().to_double();
    eps1_ = G.tables().eps[1].to_double();
    b1_ = S.b1().to_double();
    b2_ = S.b2().to_double();
    mu_ = static_cast<double>(raw_mass(-tau_, 0));
}

long double Marginal::raw_mass(long double a, long double b) const {
    long double s = 0;
    for (const auto &r : rects_) {
        long double xa = std::max(a, r.x1), xb = std::min(b, r.x2);
        if (!(xa < xb))
            continue;
        s += std::log((1 + xb * r.y2) / (1 + xa * r.y2)) - std::log((1 + xb * r.y1) / (1 + xa * r.y1));
    }
    return s;
}

double Marginal::density(double x) const {
    long double s = 0, X = x;
    for (const auto &r : rects_)
        if (r.x1 <= X && X < r.x2)
            s += (r.y2 - r.y1) / ((1 + X * r.y1) * (1 + X * r.y2));
    return static_cast<double>(s / mu_);
}

double Marginal::mass(double a, double b) const { return static_cast<double>(raw_mass(a, b) / mu_); }

double Marginal::preimage_mass(double a, double b) const {
    long double A = a, B = b, s = 0;
    // Digit 1: Delta'_1 maps onto [eps_1, 0).
    long double a1 = std::max(A, eps1_);
    if (a1 < B)
        s += raw_mass(1 / (1 - tau_ - a1), 1 / (1 - tau_ - B));
    // Digit 2: onto [-tau, 0).
    s += raw_mass(1 / (1 - 2 * tau_ - A), 1 / (1 - 2 * tau_ - B));
    // Digits >= 3, fiber [0, tau], telescoped.
    s += std::log((1 - 2 * tau_ - B) / (1 - 2 * tau_ - A));
    // Acceleration branches onto [eps_0, 0), fiber [0, tau/(tau^2 + 1)], telescoped.
    long double a0 = std::max(A, eps0_);
    if (a0 < B) {
        long double sa = a0 + tau_, sb = B + tau_;
        s += std::log(sb * (1 + tau_ * sa) / (sa * (1 + tau_ * sb)));
    }
    return static_cast<double>(s / mu_);
}

}
