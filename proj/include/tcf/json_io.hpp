#pragma once

// JSON views of the library's results, shared by the command-line tool and the Python module.

#include "tcf/dioph.hpp"
#include "tcf/ergodic.hpp"
#include "tcf/verify.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace tcf::io {

using nlohmann::json;

// {version, n, seed, precision_cap}: embedded in every report.
json meta(int n, std::uint64_t seed, long precision_cap);

// {"coeffs": ["p/q", ...], "decimal": double}; coefficients in the basis 1, lambda, lambda^2, ...
json element(const FieldElement &x);
// a + b sqrt(D) with the element D.
json quad_element(const QuadElement &x);
// 2 x 2 array of elements.
json matrix(const Mobius &M);

json report(const Report &r);
json field_info(const System &S);
// table: "phi", "eps", "alpha" or "all".
json orbit_tables(const OrbitTables &T, const std::string &table);
json region(const PlanarRegion &R);
json tiling(const Tiling &T);

// One row of an expansion: m, digit (null past the end), t, v, theta values, log q and p/q.
json expansion_step(const Expansion &e, long m, const Field &F);
json expansion_summary(const Expansion &e);

json borel(const BorelScan &b);
json theta_agreement(const ThetaAgreement &a);
json periodic(const PeriodicPoint &P);
json convergence(const ConvergenceReport &c);
json transcendence(const TranscendenceResult &t);
json adler(const AdlerReport &a);
json uniform(const UniformReport &u);
json measure(const MeasureInvariance &m);

// p_m / q_m = -b/a of the convergent matrix, rounded to double.
double convergent_value(const AlgMatrix &P, const Field &F);

}
