#pragma once

#include "tcf/orbit.hpp"
#include "tcf/planar.hpp"
#include "tcf/quadratic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tcf {

// theta(x, y) = -x / (1 + xy); DomainError on the hyperbola 1 + xy = 0.
FieldElement theta_fn(const PlanarPoint &p);
double theta_fn(double x, double y);
QuadElement theta_fn(const QuadElement &x, const QuadElement &y);

// sup of theta over Gamma, attained at the top-left corner of some rectangle.
FieldElement theta_sup(const GammaSystem &G);

// p in Gamma with theta(p) > tau and theta(T^-1 p) > tau, decided exactly.
bool danger_region_contains(const GammaSystem &G, const PlanarPoint &p);
// The curve description: y > -1/x - 1/tau and y > tau/(1 - tau x).
bool danger_curves_contain(const System &S, const PlanarPoint &p);

struct BorelScan {
    int n = 0;
    long M = 0;
    double tolerance = 0;
    // Windows m = 1..M over Theta_{m-1} .. Theta_{m+n-1} whose minimum exceeds tau + tolerance.
    long violations = 0;
    long first_violation = -1;
    double max_window_min = 0;
    // Longest run of consecutive Theta_m > tau + tolerance and where it starts.
    long longest_run = 0;
    long run_start = -1;
    // Longest run of consecutive m >= 1 with T^m(x, 0) in D, i.e. Theta_{m-1}, Theta_m > tau.
    long longest_danger_run = 0;
    long danger_run_start = -1;
    double max_theta = 0;
    // Steps where min(Theta_{m-1}, Theta_m) > tau disagrees with the curve test
    // for (t_m, v_m); only steps after a slow digit, away from ties, are compared.
    long danger_mismatches = 0;
    std::vector<double> window_min;   // index m - 1 for m = 1..M
    std::vector<std::uint8_t> danger; // index m for m = 0..M
};

// Needs an expansion of at least M + n - 1 steps (fewer when it ended at a cusp).
BorelScan borel_scan(const System &S, const Expansion &e, long M, double tolerance = 1e-10);

// Largest relative disagreement between the Theta evaluations of an expansion.
struct ThetaAgreement {
    double direct = 0;
    double bis = 0;
};
ThetaAgreement theta_agreement(const Expansion &e);

struct PeriodicPoint {
    int j = 0;
    // x_j is a fixed point of G = M_1^{n-3} W^j M_2 in the cylinder of digit 2.
    Mobius G;
    QuadPtr Q{};
    QuadElement x{}, y{};
    // The f-digits of one period: 2, -j, 1 (n - 3 times).
    std::vector<Digit> digits{};
    // theta along the T-orbit P_j, T P_j, ..., T^{n-2} P_j.
    std::vector<QuadElement> theta{};
};

// Builds P_j and verifies exactly that T^{n-1} P_j = P_j with the stated digits.
PeriodicPoint periodic_point(const System &S, int j);
// Minimal polynomial of x_j over K as [c0, c1, 1]: x^2 + c1 x + c0.
std::vector<FieldElement> min_poly_over_K(const PeriodicPoint &P);

struct ConvergenceReport {
    long steps = 0;
    // First m with |x - p_m/q_m| < target, or -1.
    long first_below = -1;
    double target = 1e-10;
    double final_error = 0;
    // max over m of q_{m-1}/q_m, i.e. |v_m|.
    double max_q_ratio = 0;
    // max |t_m v_m| over slow steps; delta = 1 - that.
    double max_slow_ratio = 0;
    double delta = 0;
    // Largest |t_m v_m| over acceleration steps (bounded by 1).
    double max_accel_ratio = 0;
    // Least-squares slope of log|x - p_m/q_m| per step.
    double fitted_rate = 0;
    // max Theta_m q_{m+1}/q_m, an empirical constant c in |x - p_m/q_m| < c/(q_m q_{m+1}).
    double c_empirical = 0;
    // A step with q_m < q_{m-1}, or -1.
    long non_monotone_witness = -1;
};

ConvergenceReport convergence_check(const Expansion &e, double target = 1e-10);

struct TranscendenceResult {
    double statistic = 0;
    double threshold = 0;
    double margin = 0.05;
    bool flagged = false;
    long used = 0;
};

/*
 * statistic = max over the second half of the usable indices of
 * log(log q_m) / m; flagged iff statistic > log(2d - 1) + margin.
 * log_q[m] = log q_m; indices with q_m <= 1 are skipped.
 */
TranscendenceResult transcendence_indicator(const std::vector<double> &log_q, int d, double margin = 0.05);

// Parses one q per line: a decimal integer or "ln:<log q>".  Blank lines and # comments are skipped.
std::vector<double> parse_q_history(const std::string &text);

}
