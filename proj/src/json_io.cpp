#include "tcf/json_io.hpp"

#include "tcf/version.hpp"

#include <cmath>

namespace tcf::io {

namespace {

// NaN and infinities become null so every document is valid JSON.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json rect(const Rect &r) {
    return {{"x1", element(r.x1)}, {"x2", element(r.x2)}, {"y1", element(r.y1)}, {"y2", element(r.y2)}};
}

json elements(const std::vector<FieldElement> &v) {
    json a = json::array();
    for (const auto &x : v)
        a.push_back(element(x));
    return a;
}

}

json meta(int n, std::uint64_t seed, long precision_cap) {
    return {{"version", tcf::version}, {"n", n}, {"seed", seed}, {"precision_cap", precision_cap}};
}

json element(const FieldElement &x) {
    json c = json::array();
    for (const auto &q : x.coeffs())
        c.push_back(q.get_str());
    return {{"coeffs", c}, {"decimal", num(x.to_double())}};
}

json quad_element(const QuadElement &x) {
    return {{"a", element(x.a())}, {"b", element(x.b())}, {"D", element(x.quad()->D)}, {"decimal", num(x.to_double())}};
}

json matrix(const Mobius &M) {
    return json::array({json::array({element(M.a()), element(M.b())}), json::array({element(M.c()), element(M.d())})});
}

json report(const Report &r) {
    json checks = json::array();
    for (const auto &c : r.checks()) {
        json j = {{"name", c.name}, {"anchor", c.anchor}, {"passed", c.passed}};
        if (!c.detail.empty())
            j["detail"] = c.detail;
        checks.push_back(std::move(j));
    }
    return {{"passed", r.passed()}, {"failures", r.failures()}, {"checks", checks}};
}

json field_info(const System &S) {
    const Field &F = *S.field();
    json poly = json::array();
    for (const auto &c : F.min_poly())
        poly.push_back(c.get_str());
    return {{"degree", F.degree()},
            {"min_poly", poly},
            {"min_poly_string", F.min_poly_string()},
            {"lambda", element(FieldElement::lambda(S.field()))},
            {"tau", element(S.tau())},
            {"eps0", element(S.eps0())},
            {"b1", element(S.b1())},
            {"b2", element(S.b2())}};
}

json orbit_tables(const OrbitTables &T, const std::string &table) {
    json j = json::object();
    if (table == "phi" || table == "all") {
        j["phi"] = elements(T.phi);
        j["phi_digits"] = T.phi_digits;
        j["chain"] = T.chain;
    }
    if (table == "eps" || table == "all") {
        j["eps"] = elements(T.eps);
        j["eps_digits"] = T.eps_digits;
    }
    if (table == "alpha" || table == "all")
        j["alpha"] = elements(T.alpha);
    return j;
}

json region(const PlanarRegion &R) {
    json rs = json::array();
    for (const auto &r : R.rects)
        rs.push_back(rect(r));
    return {{"name", R.name}, {"rects", rs}};
}

json tiling(const Tiling &T) {
    json ps = json::array(), ts = json::array();
    for (const auto &p : T.pieces)
        ps.push_back({{"digit", p.digit}, {"src", rect(p.src)}, {"image", rect(p.image)}});
    for (const auto &t : T.tails)
        ts.push_back({{"what", t.what}, {"src", rect(t.src)}, {"image", rect(t.image)}});
    return {{"pieces", ps}, {"tails", ts}};
}

double convergent_value(const AlgMatrix &P, const Field &F) {
    if (P.a.is_zero())
        return std::nan("");
    Interval a = eval_rel(P.a, F, 64), b = eval_rel(P.b, F, 64);
    return 0.0 - (b / a).mid_d();
}

json expansion_step(const Expansion &e, long m, const Field &F) {
    const auto i = static_cast<size_t>(m);
    json j = {{"m", m},
              {"digit", m < e.length() ? json(e.digits[i]) : json(nullptr)},
              {"t", num(e.t[i])},
              {"v", num(e.v[i])},
              {"theta", num(e.theta[i])},
              {"theta_direct", num(e.theta_direct[i])},
              {"theta_bis", num(e.theta_bis[i])},
              {"log_q", num(e.log_q[i])}};
    if (i < e.convergents.size())
        j["p_over_q"] = num(convergent_value(e.convergents[i], F));
    return j;
}

json expansion_summary(const Expansion &e) {
    return {{"length", e.length()},
            {"digits", e.digits},
            {"cusp", e.cusp},
            {"cusp_index", e.cusp_index},
            {"max_precision", e.max_precision}};
}

json borel(const BorelScan &b) {
    return {{"M", b.M},
            {"tolerance", b.tolerance},
            {"violations", b.violations},
            {"first_violation", b.first_violation},
            {"max_window_min", num(b.max_window_min)},
            {"longest_theta_run", b.longest_run},
            {"theta_run_start", b.run_start},
            {"longest_danger_run", b.longest_danger_run},
            {"danger_run_start", b.danger_run_start},
            {"max_theta", num(b.max_theta)},
            {"danger_mismatches", b.danger_mismatches}};
}

json theta_agreement(const ThetaAgreement &a) { return {{"direct", num(a.direct)}, {"bis", num(a.bis)}}; }

json periodic(const PeriodicPoint &P) {
    json th = json::array();
    for (const auto &t : P.theta)
        th.push_back(quad_element(t));
    return {{"j", P.j},
            {"matrix", matrix(P.G)},
            {"digits", P.digits},
            {"min_poly_over_K", elements(min_poly_over_K(P))},
            {"x", quad_element(P.x)},
            {"y", quad_element(P.y)},
            {"theta", th}};
}

json convergence(const ConvergenceReport &c) {
    return {{"steps", c.steps},
            {"target", c.target},
            {"first_below", c.first_below},
            {"final_error", num(c.final_error)},
            {"max_q_ratio", num(c.max_q_ratio)},
            {"max_slow_ratio", num(c.max_slow_ratio)},
            {"delta", num(c.delta)},
            {"max_accel_ratio", num(c.max_accel_ratio)},
            {"fitted_rate", num(c.fitted_rate)},
            {"c_empirical", num(c.c_empirical)},
            {"non_monotone_witness", c.non_monotone_witness}};
}

json transcendence(const TranscendenceResult &t) {
    return {{"statistic", num(t.statistic)},
            {"threshold", num(t.threshold)},
            {"margin", t.margin},
            {"used", t.used},
            {"flagged", t.flagged},
            {"verdict", t.flagged ? "transcendence-certified growth" : "not certified"}};
}

json adler(const AdlerReport &a) {
    return {{"samples", a.samples},
            {"skipped", a.skipped},
            {"min_derivative", num(a.min_derivative)},
            {"min_log_derivative", num(a.min_log_derivative)},
            {"max_return", a.max_return},
            {"return_histogram", a.return_histogram}};
}

json uniform(const UniformReport &u) {
    json cells = json::array(), disc = json::array(), birk = json::array();
    for (const auto &c : u.cells)
        cells.push_back({{"x1", num(c.box.x1.to_double())},
                         {"x2", num(c.box.x2.to_double())},
                         {"y1", num(c.box.y1.to_double())},
                         {"y2", num(c.box.y2.to_double())},
                         {"mass", num(c.mass)},
                         {"hits", c.hits}});
    for (const auto &d : u.discrepancy)
        disc.push_back({{"N", d.N}, {"max_discrepancy", num(d.max_discrepancy)}, {"worst_cell", d.worst_cell}});
    for (const auto &b : u.birkhoff)
        birk.push_back({{"a", num(b.a)}, {"b", num(b.b)}, {"nu", num(b.nu)}, {"average", num(b.average)}});
    return {{"orbit_length", u.orbit_length},
            {"orbits", u.orbits},
            {"cells", cells},
            {"discrepancy", disc},
            {"outside_gamma", u.outside_gamma},
            {"birkhoff", birk},
            {"max_birkhoff_error", num(u.max_birkhoff_error)}};
}

json measure(const MeasureInvariance &m) {
    return {{"samples", m.samples},
            {"worst", num(m.worst)},
            {"mu_gamma", num(m.mu_gamma)},
            {"mu_gamma_width", num(m.mu_gamma_width)},
            {"divergence_rectangles", m.divergence_rectangles},
            {"divergence_sum", num(m.divergence_sum)}};
}

}
