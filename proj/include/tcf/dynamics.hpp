#pragma once

#include "tcf/group.hpp"
#include "tcf/report.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace tcf {

// k >= 1 selects A^-k C; k = -j selects W^j.
using Digit = std::int64_t;

/*
 * Constants and matrices of the interval maps on I = [-tau, 0).
 *
 *   g: x -> 1 - k tau - 1/x on Delta_k
 *   f: as g on [eps_0, 0), W^j(x) on the j-th acceleration cylinder of [-tau, eps_0)
 */
class System {
public:
    explicit System(FieldPtr F);
    explicit System(int n) : System(build_field(n)) {}

    const FieldPtr &field() const { return F_; }
    int n() const { return F_->n(); }
    const FieldElement &tau() const { return tau_; }
    const FieldElement &minus_tau() const { return minus_tau_; }
    // -tau^3/(1 + tau^2) = W^-1(0).
    const FieldElement &eps0() const { return eps0_; }
    // 1/(1 - tau) and 1/(1 - 2 tau), the right ends of Delta_1 and Delta_2.
    const FieldElement &b1() const { return b1_; }
    const FieldElement &b2() const { return b2_; }

    Mobius matrix(Digit k) const;
    Mobius y_matrix(Digit k) const;
    AlgMatrix alg_matrix(Digit k) const;

    // Delta_k (k >= 1) as [lo, hi).
    std::pair<FieldElement, FieldElement> g_cylinder(Digit k) const;
    // Delta'_k for the accelerated map, k != 0.
    std::pair<FieldElement, FieldElement> f_cylinder(Digit k) const;

    // Interval enclosures of the constants at (at least) precision w.
    struct Numeric {
        Interval tau, eps0, b1, b2, minus_tau, inv_tau, inv_tau2;
    };
    const Numeric &numeric(mpfr_prec_t w) const;

private:
    FieldPtr F_;
    FieldElement tau_, minus_tau_, eps0_, b1_, b2_;
    mutable std::mutex mu_;
    mutable std::map<mpfr_prec_t, std::unique_ptr<Numeric>> numeric_;
};

void require_in_I(const System &S, const FieldElement &x);

Digit cylinder_of_g(const System &S, const FieldElement &x);
Digit cylinder_of_g(const System &S, const Interval &x);
Digit cylinder_of_f(const System &S, const FieldElement &x);
Digit cylinder_of_f(const System &S, const Interval &x);
Digit cylinder_of_g(const System &S, const ExtendedPoint &x);
Digit cylinder_of_f(const System &S, const ExtendedPoint &x);
// -1 + ceil(-1/tau^2 + 1/(tau (tau + x))) on (-tau, eps_0).
std::int64_t j_of(const System &S, const FieldElement &x);
std::int64_t j_of(const System &S, const Interval &x);

struct Step {
    FieldElement x;
    Digit digit;
    Mobius M;
};

Step g_step(const System &S, const FieldElement &x);
Step f_step(const System &S, const FieldElement &x);
// Image of a point under the matrix of a given digit (no cylinder check).
FieldElement act(const System &S, Digit k, const FieldElement &x);
FieldElement act_y(const System &S, Digit k, const FieldElement &y);

struct OrbitTables {
    std::vector<FieldElement> phi;   // phi_0 .. phi_{2n-4}
    std::vector<Digit> phi_digits;   // g-digit of each phi_j
    std::vector<FieldElement> eps;   // eps_0 .. eps_{2n-4}
    std::vector<Digit> eps_digits;   // f-digit of each eps_i
    std::vector<FieldElement> alpha; // alpha_1 .. alpha_{2n-3} stored from index 0
    // Chain order phi_0 < phi_{n-1} < phi_1 < ... < phi_{n-2}, as indices.
    std::vector<int> chain;
};

// Computes the tables and throws ConsistencyError if any exact identity fails.
OrbitTables build_orbit_tables(const System &S);
Report check_orbit_tables(const System &S, const OrbitTables &T);
Report product_relations_check(const System &S, const OrbitTables &T);
// Cylinder geometry: full branches, acceleration cylinders, j_of against W iteration.
Report cylinder_check(const System &S, int depth);

}
