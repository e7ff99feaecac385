#include "tcf/dioph.hpp"
#include "tcf/ergodic.hpp"
#include "tcf/errors.hpp"
#include "tcf/json_io.hpp"
#include "tcf/verify.hpp"
#include "tcf/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace tcf;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0, exit_failed = 1, exit_usage = 2, exit_precision = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    int n = 0;
    std::string n_range;
    long steps = -1;
    long samples = -1;
    std::uint64_t seed = 1;
    long precision = 0;
    std::string format = "json";
    std::string out;

    std::string table = "all";
    std::string which = "gamma";
    std::string x;
    int j = 1;
    std::string q_file;
    int d = 2;
    double margin = 0.05;
    long adler_samples = 100000;
    int seeded_j = 3;
};

long default_precision() {
    const char *env = std::getenv("TCF_PRECISION_CAP");
    if (!env || !*env)
        return 4096;
    long v = 0;
    const char *end = env + std::char_traits<char>::length(env);
    auto [p, ec] = std::from_chars(env, end, v);
    if (ec != std::errc() || p != end)
        throw UsageError("TCF_PRECISION_CAP is not an integer: " + std::string(env));
    return v;
}

std::vector<int> n_values(const Config &c) {
    if (c.n && !c.n_range.empty())
        throw UsageError("give either --n or --n-range");
    std::vector<int> ns;
    if (!c.n_range.empty()) {
        // a..b, a-b or a:b
        std::string s = c.n_range;
        size_t sep = s.find("..");
        size_t len = 2;
        if (sep == std::string::npos) {
            sep = s.find_first_of("-:");
            len = 1;
        }
        if (sep == std::string::npos)
            throw UsageError("--n-range must look like 4..8");
        int a = 0, b = 0;
        try {
            size_t pa = 0, pb = 0;
            a = std::stoi(s.substr(0, sep), &pa);
            b = std::stoi(s.substr(sep + len), &pb);
            if (pa != sep || pb != s.size() - sep - len)
                throw UsageError("");
        } catch (const std::exception &) {
            throw UsageError("--n-range must look like 4..8");
        }
        if (a > b)
            throw UsageError("--n-range is empty");
        for (int n = a; n <= b; ++n)
            ns.push_back(n);
    } else if (c.n) {
        ns.push_back(c.n);
    } else {
        throw UsageError("--n or --n-range is required");
    }
    for (int n : ns)
        if (n < 4)
            throw UsageError("n must be at least 4, got " + std::to_string(n));
    return ns;
}

std::string fmt(double v) {
    if (!std::isfinite(v))
        return "";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

json with_meta(const Config &c, int n, const char *type) {
    json j = io::meta(n, c.seed, c.precision);
    j["type"] = type;
    return j;
}

std::string csv_meta(const Config &c, int n) {
    return "# tcf " + std::string(tcf::version) + " n=" + std::to_string(n) + " seed=" + std::to_string(c.seed) +
           " precision_cap=" + std::to_string(c.precision) + "\n";
}

void require_json(const Config &c, const std::string &cmd) {
    if (c.format != "json")
        throw UsageError(cmd + " only has JSON output");
}

struct XSpec {
    bool random = false;
    long count = 1;
    std::string text;
};

XSpec parse_xspec(const std::string &s) {
    XSpec x;
    x.text = s;
    if (s.rfind("random:", 0) == 0) {
        x.random = true;
        try {
            size_t pos = 0;
            x.count = std::stol(s.substr(7), &pos);
            if (pos != s.size() - 7 || x.count < 1)
                throw UsageError("");
        } catch (const std::exception &) {
            throw UsageError("bad x-spec " + s + ": random:<count> needs a positive count");
        }
    }
    return x;
}

// Exact points: "coeffs:c0,c1,..." in the basis 1, lambda, ..., or a decimal / p/q rational.
PointSource make_point(const System &S, const XSpec &x, std::uint64_t seed, long i) {
    if (x.random)
        return PointSource::random(S.field(), seed, static_cast<std::uint64_t>(i));
    try {
        if (x.text.rfind("coeffs:", 0) == 0) {
            std::vector<mpq_class> cs;
            std::stringstream ss(x.text.substr(7));
            std::string part;
            while (std::getline(ss, part, ','))
                cs.push_back(parse_rational(part));
            if (cs.empty() || static_cast<int>(cs.size()) > S.field()->degree())
                throw UsageError("bad x-spec " + x.text + ": expected 1 to " + std::to_string(S.field()->degree()) +
                                 " coefficients");
            cs.resize(static_cast<size_t>(S.field()->degree()));
            return PointSource::element(FieldElement(S.field(), cs));
        }
        return PointSource::rational(S.field(), parse_rational(x.text));
    } catch (const UsageError &) {
        throw;
    } catch (const std::exception &e) {
        throw UsageError("bad x-spec " + x.text + ": " + e.what());
    }
}

struct Output {
    std::ostringstream buf;
    int code = exit_ok;
    void line(const json &j) { buf << j.dump() << '\n'; }
};

void cmd_field(const Config &c, Output &out) {
    require_json(c, "field");
    for (int n : n_values(c)) {
        System S(n);
        json j = with_meta(c, n, "field");
        j["field"] = io::field_info(S);
        out.line(j);
    }
}

void cmd_verify(const Config &c, Output &out) {
    require_json(c, "verify");
    for (int n : n_values(c)) {
        Report r = identity_suite(n, c.seed);
        json j = with_meta(c, n, "verify");
        j["report"] = io::report(r);
        out.line(j);
        if (!r.passed())
            out.code = exit_failed;
    }
}

void cmd_orbit(const Config &c, Output &out) {
    require_json(c, "orbit");
    for (int n : n_values(c)) {
        System S(n);
        OrbitTables T = build_orbit_tables(S);
        json j = with_meta(c, n, "orbit");
        j["table"] = c.table;
        j["values"] = io::orbit_tables(T, c.table);
        out.line(j);
    }
}

void cmd_region(const Config &c, Output &out) {
    require_json(c, "region");
    for (int n : n_values(c)) {
        System S(n);
        GammaSystem G(S);
        json j = with_meta(c, n, "region");
        j["which"] = c.which;
        if (c.which == "omega")
            j["region"] = io::region(G.omega());
        else if (c.which == "gamma")
            j["region"] = io::region(G.gamma());
        else
            j["tiling"] = io::tiling(G.tiling());
        out.line(j);
    }
}

void cmd_expand(const Config &c, Output &out) {
    XSpec x = parse_xspec(c.x);
    const long steps = c.steps < 0 ? 100 : c.steps;
    const bool csv = c.format == "csv";
    for (int n : n_values(c)) {
        System S(n);
        ExpandOptions o;
        o.steps = steps;
        o.precision_cap = c.precision;
        o.keep_convergents = true;
        if (csv)
            out.buf << csv_meta(c, n) << "sample,m,digit,t,v,p_over_q,theta,theta_direct,theta_bis,log_q\n";
        for (long i = 0; i < x.count; ++i) {
            PointSource src = make_point(S, x, c.seed, i);
            Expansion e = expand(S, src, o);
            if (csv) {
                for (long m = 0; m < e.length(); ++m) {
                    const auto k = static_cast<size_t>(m);
                    out.buf << i << ',' << m << ',' << e.digits[k] << ',' << fmt(e.t[k]) << ',' << fmt(e.v[k]) << ','
                            << fmt(io::convergent_value(e.convergents[k], *S.field())) << ',' << fmt(e.theta[k])
                            << ',' << fmt(e.theta_direct[k]) << ',' << fmt(e.theta_bis[k]) << ',' << fmt(e.log_q[k])
                            << '\n';
                }
                continue;
            }
            json h = with_meta(c, n, "expand_header");
            h["x"] = x.text;
            h["sample"] = i;
            h["x_decimal"] = src.to_double();
            h["steps"] = steps;
            out.line(h);
            for (long m = 0; m < e.length(); ++m) {
                json r = io::expansion_step(e, m, *S.field());
                r["type"] = "step";
                r["sample"] = i;
                out.line(r);
            }
            json s = with_meta(c, n, "expand_summary");
            s["sample"] = i;
            s["summary"] = io::expansion_summary(e);
            s["convergence"] = io::convergence(convergence_check(e));
            s["theta_agreement"] = io::theta_agreement(theta_agreement(e));
            out.line(s);
        }
    }
}

void cmd_scan_borel(const Config &c, Output &out) {
    const long M = c.steps < 0 ? 1000 : c.steps;
    const long samples = c.samples < 0 ? 1000 : c.samples;
    if (M < 1 || samples < 1)
        throw UsageError("--steps and --samples must be positive");
    const bool csv = c.format == "csv";
    for (int n : n_values(c)) {
        System S(n);
        GammaSystem G(S);
        const double tau = S.tau().to_double();
        ExpandOptions o;
        o.steps = M + n;
        o.precision_cap = c.precision;
        if (csv)
            out.buf << csv_meta(c, n) << "sample,m,digit,theta,window_min,in_danger\n";
        long violations = 0, mismatches = 0, cusps = 0, longest_theta = 0, longest_danger = 0;
        json first = nullptr;
        double max_window_min = -INFINITY, max_theta = 0;
        ThetaAgreement agree;
        for (long i = 0; i < samples; ++i) {
            Expansion e = expand(S, PointSource::random(S.field(), c.seed, static_cast<std::uint64_t>(i)), o);
            cusps += e.cusp;
            BorelScan b = borel_scan(S, e, M);
            ThetaAgreement a = theta_agreement(e);
            agree.direct = std::max(agree.direct, a.direct);
            agree.bis = std::max(agree.bis, a.bis);
            if (b.violations && first.is_null())
                first = {{"sample", i}, {"m", b.first_violation}};
            violations += b.violations;
            mismatches += b.danger_mismatches;
            max_window_min = std::max(max_window_min, b.max_window_min);
            max_theta = std::max(max_theta, b.max_theta);
            longest_theta = std::max(longest_theta, b.longest_run);
            longest_danger = std::max(longest_danger, b.longest_danger_run);
            if (csv)
                for (size_t m = 1; m <= b.window_min.size(); ++m)
                    out.buf << i << ',' << m << ',' << e.digits[m] << ',' << fmt(e.theta[m]) << ','
                            << fmt(b.window_min[m - 1]) << ',' << int(b.danger[m]) << '\n';
        }
        if (violations || mismatches)
            out.code = exit_failed;
        if (csv)
            continue;
        PeriodicPoint P = periodic_point(S, c.seeded_j);
        ExpandOptions po;
        po.steps = 60 * (n - 1) + n;
        po.precision_cap = c.precision;
        Expansion pe = expand(S, PointSource::quadratic(P.x), po);
        BorelScan pb = borel_scan(S, pe, 60 * (n - 1));

        json j = with_meta(c, n, "scan_borel");
        j["samples"] = samples;
        j["steps"] = M;
        j["tau"] = tau;
        j["tolerance"] = 1e-10;
        j["violations"] = violations;
        j["first_violation"] = first;
        j["max_window_min"] = max_window_min;
        j["max_theta"] = max_theta;
        j["theta_sup"] = theta_sup(G).to_double();
        j["longest_theta_run"] = longest_theta;
        j["longest_danger_run"] = longest_danger;
        j["danger_mismatches"] = mismatches;
        j["cusp_orbits"] = cusps;
        j["theta_agreement"] = io::theta_agreement(agree);
        j["seeded"] = {{"j", c.seeded_j},
                       {"longest_theta_run", pb.longest_run},
                       {"longest_danger_run", pb.longest_danger_run},
                       {"violations", pb.violations}};
        out.line(j);
    }
}

void cmd_periodic(const Config &c, Output &out) {
    require_json(c, "periodic");
    if (c.j < 1)
        throw UsageError("--j must be at least 1");
    for (int n : n_values(c)) {
        System S(n);
        PeriodicPoint P = periodic_point(S, c.j);
        json j = with_meta(c, n, "periodic");
        j["periodic"] = io::periodic(P);
        j["tau"] = S.tau().to_double();
        out.line(j);
    }
}

void cmd_transcendence(const Config &c, Output &out) {
    require_json(c, "transcendence");
    if (c.d < 1)
        throw UsageError("--d must be at least 1");
    if (c.q_file.empty() == c.x.empty())
        throw UsageError("give exactly one of --q-file and --x");
    std::vector<double> log_q;
    std::string source;
    if (!c.q_file.empty()) {
        std::ifstream in(c.q_file);
        if (!in)
            throw UsageError("cannot read " + c.q_file);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            log_q = parse_q_history(ss.str());
        } catch (const std::exception &e) {
            throw UsageError(c.q_file + ": " + e.what());
        }
        source = c.q_file;
        json j = with_meta(c, c.n, "transcendence");
        if (!c.n)
            j["n"] = nullptr;
        j["source"] = source;
        j["d"] = c.d;
        j["log_threshold_base"] = 2 * c.d - 1;
        j["result"] = io::transcendence(transcendence_indicator(log_q, c.d, c.margin));
        out.line(j);
        return;
    }
    XSpec x = parse_xspec(c.x);
    for (int n : n_values(c)) {
        System S(n);
        ExpandOptions o;
        o.steps = c.steps < 0 ? 1000 : c.steps;
        o.precision_cap = c.precision;
        o.direct = false;
        for (long i = 0; i < x.count; ++i) {
            Expansion e = expand(S, make_point(S, x, c.seed, i), o);
            json j = with_meta(c, n, "transcendence");
            j["source"] = x.text;
            j["sample"] = i;
            j["d"] = c.d;
            j["log_threshold_base"] = 2 * c.d - 1;
            j["steps"] = e.length();
            j["cusp"] = e.cusp;
            j["result"] = io::transcendence(transcendence_indicator(e.log_q, c.d, c.margin));
            out.line(j);
        }
    }
}

void cmd_ergodic(const Config &c, Output &out) {
    require_json(c, "ergodic-test");
    const long N = c.samples < 0 ? 1000000 : c.samples;
    if (N < 10 || c.adler_samples < 1)
        throw UsageError("--samples must be at least 10 and --adler-samples positive");
    for (int n : n_values(c)) {
        System S(n);
        GammaSystem G(S);
        UniformReport u = uniform_distribution_experiment(G, {N / 10, N / 2, N}, c.seed, c.steps < 0 ? 1000 : c.steps,
                                                          10, 10, 8, c.precision);
        AdlerReport a = adler_experiment(S, c.adler_samples, c.seed, 4096, c.precision);
        json j = with_meta(c, n, "ergodic");
        j["N"] = N;
        j["cells"] = u.cells.size();
        j["max_discrepancy"] = u.discrepancy.back().max_discrepancy;
        j["adler_min_derivative"] = a.min_derivative;
        j["uniform"] = io::uniform(u);
        j["adler"] = io::adler(a);
        out.line(j);
    }
}

void common(CLI::App *s, Config &c) {
    s->add_option("--n", c.n, "Parameter n >= 4 of the group");
    s->add_option("--n-range", c.n_range, "Inclusive range of n, e.g. 4..8");
    s->add_option("--steps", c.steps, "Steps per orbit");
    s->add_option("--samples", c.samples, "Number of sample points");
    s->add_option("--seed", c.seed, "Seed for random points")->capture_default_str();
    s->add_option("--precision", c.precision, "Precision cap in bits (default: TCF_PRECISION_CAP or 4096)");
    s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    s->add_option("--out", c.out, "Write to this file instead of stdout");
}

int run(int argc, char **argv) {
    CLI::App app{"Continued fractions for the (3, n, infinity) triangle groups"};
    app.set_version_flag("--version", std::string(tcf::version));
    app.require_subcommand(1);
    Config c;
    using Handler = void (*)(const Config &, Output &);
    std::vector<std::pair<CLI::App *, Handler>> cmds;
    auto add = [&](const char *name, const char *help, Handler h) {
        CLI::App *s = app.add_subcommand(name, help);
        common(s, c);
        cmds.emplace_back(s, h);
        return s;
    };
    add("field", "Minimal polynomial and constants of K", cmd_field);
    add("verify", "Run the exact identity suite", cmd_verify);
    add("orbit", "Orbit tables", cmd_orbit)
        ->add_option("--table", c.table)
        ->check(CLI::IsMember({"phi", "eps", "alpha", "all"}))
        ->capture_default_str();
    add("region", "Exact rectangles of Omega, Gamma or the tiling of Gamma", cmd_region)
        ->add_option("--which", c.which)
        ->check(CLI::IsMember({"omega", "gamma", "tiling"}))
        ->capture_default_str();
    add("expand", "Digits, convergents and Theta along an orbit", cmd_expand)
        ->add_option("--x", c.x, "Decimal, p/q, coeffs:c0,c1,... or random:<count>")
        ->required();
    add("scan-borel", "Window minima of Theta over random orbits", cmd_scan_borel)
        ->add_option("--seeded-j", c.seeded_j, "j of the periodic orbit used for the run check")
        ->capture_default_str();
    add("periodic", "The periodic point P_j", cmd_periodic)->add_option("--j", c.j)->capture_default_str();
    CLI::App *tr = add("transcendence", "Growth statistic of log log q_m / m", cmd_transcendence);
    tr->add_option("--q-file", c.q_file, "One q per line: an integer or ln:<log q>");
    tr->add_option("--x", c.x, "Expand this point instead of reading q");
    tr->add_option("--d", c.d, "Degree bound")->capture_default_str();
    tr->add_option("--margin", c.margin, "Margin over log(2d - 1)")->capture_default_str();
    add("ergodic-test", "Uniform distribution in Gamma and the Adler derivative bound", cmd_ergodic)
        ->add_option("--adler-samples", c.adler_samples)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        c.precision = c.precision ? c.precision : default_precision();
        if (c.precision < 64)
            throw UsageError("precision cap must be at least 64 bits");
        Output out;
        for (auto &[s, h] : cmds)
            if (s->parsed())
                h(c, out);
        if (c.out.empty()) {
            std::cout << out.buf.str() << std::flush;
        } else {
            std::ofstream f(c.out, std::ios::binary);
            if (!(f << out.buf.str()))
                throw UsageError("cannot write " + c.out);
        }
        return out.code;
    } catch (const UsageError &e) {
        std::cerr << "tcf: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError &e) {
        std::cerr << "tcf: " << e.what() << "\n";
        return exit_usage;
    } catch (const PrecisionExhausted &e) {
        std::cerr << json{{"error", "precision exhausted"}, {"boundary", e.boundary}, {"bits", e.bits}}.dump() << "\n";
        return exit_precision;
    } catch (const ConsistencyError &e) {
        std::cerr << json{{"error", "consistency"}, {"detail", e.what()}}.dump() << "\n";
        return exit_failed;
    }
}

}

int main(int argc, char **argv) { return run(argc, argv); }
