#include "tcf/dioph.hpp"
#include "tcf/ergodic.hpp"
#include "tcf/errors.hpp"
#include "tcf/json_io.hpp"
#include "tcf/verify.hpp"
#include "tcf/version.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace tcf;
using nlohmann::json;

namespace {

// Results cross the boundary as JSON text; the Python side decodes them.
std::string dump(const json &j) { return j.dump(); }

// A decimal or p/q string, or a list of rational strings for the coordinates in 1, lambda, ...
PointSource point(const System &S, const py::object &x) {
    if (py::isinstance<py::str>(x))
        return PointSource::rational(S.field(), parse_rational(x.cast<std::string>()));
    std::vector<mpq_class> cs;
    for (const auto &c : x.cast<std::vector<std::string>>())
        cs.push_back(parse_rational(c));
    if (cs.empty() || static_cast<int>(cs.size()) > S.field()->degree())
        throw DomainError("wrong number of coefficients");
    cs.resize(static_cast<size_t>(S.field()->degree()));
    return PointSource::element(FieldElement(S.field(), cs));
}

json expansion(const System &S, const Expansion &e) {
    json steps = json::array();
    for (long m = 0; m < e.length(); ++m)
        steps.push_back(io::expansion_step(e, m, *S.field()));
    return {{"steps", steps},
            {"summary", io::expansion_summary(e)},
            {"convergence", io::convergence(convergence_check(e))},
            {"theta_agreement", io::theta_agreement(theta_agreement(e))}};
}

std::string expand_impl(const System &S, const PointSource &src, long steps, long cap, std::uint64_t seed) {
    ExpandOptions o;
    o.steps = steps;
    o.precision_cap = cap;
    o.keep_convergents = true;
    json j = io::meta(S.n(), seed, cap);
    j.update(expansion(S, expand(S, src, o)));
    return dump(j);
}

}

PYBIND11_MODULE(_core, m) {
    m.doc() = "Continued fractions for the (3, n, infinity) triangle groups";
    m.attr("__version__") = std::string(tcf::version);

    static py::exception<PrecisionExhausted> precision_exc(m, "PrecisionExhausted", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const PrecisionExhausted &e) {
            PyErr_SetString(precision_exc.ptr(), e.what());
        } catch (const DomainError &e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const DivisionByZero &e) {
            PyErr_SetString(PyExc_ZeroDivisionError, e.what());
        } catch (const ConsistencyError &e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    m.def("field_info", [](int n) {
        System S(n);
        json j = io::meta(n, 0, 0);
        j["field"] = io::field_info(S);
        return dump(j);
    }, py::arg("n"));

    m.def("verify", [](int n, std::uint64_t seed) {
        json j = io::meta(n, seed, 0);
        j["report"] = io::report(identity_suite(n, seed));
        return dump(j);
    }, py::arg("n"), py::arg("seed") = 1);

    m.def("orbit_tables", [](int n, const std::string &table) {
        System S(n);
        return dump(io::orbit_tables(build_orbit_tables(S), table));
    }, py::arg("n"), py::arg("table") = "all");

    m.def("region", [](int n, const std::string &which) {
        System S(n);
        GammaSystem G(S);
        if (which == "omega")
            return dump(io::region(G.omega()));
        if (which == "gamma")
            return dump(io::region(G.gamma()));
        if (which == "tiling")
            return dump(io::tiling(G.tiling()));
        throw DomainError("which must be omega, gamma or tiling");
    }, py::arg("n"), py::arg("which") = "gamma");

    m.def("expand", [](int n, const py::object &x, long steps, long cap) {
        System S(n);
        return expand_impl(S, point(S, x), steps, cap, 0);
    }, py::arg("n"), py::arg("x"), py::arg("steps") = 100, py::arg("precision_cap") = 4096);

    m.def("expand_random", [](int n, std::uint64_t seed, std::uint64_t index, long steps, long cap) {
        System S(n);
        return expand_impl(S, PointSource::random(S.field(), seed, index), steps, cap, seed);
    }, py::arg("n"), py::arg("seed"), py::arg("index") = 0, py::arg("steps") = 100, py::arg("precision_cap") = 4096);

    m.def("borel_scan", [](int n, std::uint64_t seed, std::uint64_t index, long M, double tolerance) {
        System S(n);
        ExpandOptions o;
        o.steps = M + n;
        BorelScan b = borel_scan(S, expand(S, PointSource::random(S.field(), seed, index), o), M, tolerance);
        return dump(io::borel(b));
    }, py::arg("n"), py::arg("seed"), py::arg("index") = 0, py::arg("M") = 1000, py::arg("tolerance") = 1e-10);

    m.def("periodic_point", [](int n, int j) {
        System S(n);
        return dump(io::periodic(periodic_point(S, j)));
    }, py::arg("n"), py::arg("j"));

    m.def("theta", [](double x, double y) { return theta_fn(x, y); }, py::arg("x"), py::arg("y"));

    m.def("transcendence", [](const std::vector<double> &log_q, int d, double margin) {
        return dump(io::transcendence(transcendence_indicator(log_q, d, margin)));
    }, py::arg("log_q"), py::arg("d") = 2, py::arg("margin") = 0.05);

    m.def("is_admissible", [](int n, const std::vector<Digit> &w) {
        Admissibility a = is_admissible(n, w);
        return py::make_tuple(a.ok, a.rule, a.position);
    }, py::arg("n"), py::arg("word"));

    m.def("adler", [](int n, long samples, std::uint64_t seed) {
        System S(n);
        return dump(io::adler(adler_experiment(S, samples, seed)));
    }, py::arg("n"), py::arg("samples"), py::arg("seed") = 1);

    m.def("uniform", [](int n, const std::vector<long> &checkpoints, std::uint64_t seed) {
        System S(n);
        GammaSystem G(S);
        return dump(io::uniform(uniform_distribution_experiment(G, checkpoints, seed)));
    }, py::arg("n"), py::arg("checkpoints"), py::arg("seed") = 1);

    m.def("measure_invariance", [](int n, int samples, std::uint64_t seed) {
        System S(n);
        GammaSystem G(S);
        return dump(io::measure(measure_invariance(G, samples, seed)));
    }, py::arg("n"), py::arg("samples") = 100, py::arg("seed") = 1);
}
