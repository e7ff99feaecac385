#pragma once

#include "tcf/dynamics.hpp"

#include <string>
#include <vector>

namespace tcf {

// L_1 .. L_{2n-4} and R.
struct Heights {
    std::vector<FieldElement> L;
    FieldElement R;
    const FieldElement &at(int j) const { return L.at(static_cast<size_t>(j - 1)); }
};

Heights build_heights(const System &S, const OrbitTables &T);
Report heights_check(const System &S, const OrbitTables &T, const Heights &H);

// [x1, x2) x [y1, y2].
struct Rect {
    FieldElement x1, x2, y1, y2;
};

struct PlanarRegion {
    std::string name;
    std::vector<Rect> rects;
};

struct PlanarPoint {
    FieldElement x, y;
};

PlanarRegion build_omega(const System &S, const OrbitTables &T, const Heights &H);
PlanarRegion build_gamma(const System &S, const OrbitTables &T, const Heights &H);

bool contains(const Rect &r, const PlanarPoint &p);
bool contains(const PlanarRegion &R, const PlanarPoint &p);

// Slow system on Omega.
PlanarPoint S_step(const System &S, const PlanarPoint &p);

struct Piece {
    Rect src;
    Digit digit;
    Rect image;
};

// A source/target pair standing for infinitely many pieces.
struct TailPiece {
    std::string what;
    Rect src, image;
};

struct Tiling {
    std::vector<Piece> pieces;
    std::vector<TailPiece> tails;
};

/*
 * The accelerated system on Gamma.  Holds the exact decomposition of Gamma
 * into single-digit pieces and their images, with the two infinite families
 * (digits > K and acceleration exponents > J) collapsed into tail pieces.
 */
class GammaSystem {
public:
    explicit GammaSystem(const System &S, int K = 8, int J = 8);

    const System &system() const { return S_; }
    const OrbitTables &tables() const { return T_; }
    const Heights &heights() const { return H_; }
    const PlanarRegion &omega() const { return omega_; }
    const PlanarRegion &gamma() const { return gamma_; }
    const Tiling &tiling() const { return tiling_; }

    PlanarPoint step(const PlanarPoint &p) const;
    PlanarPoint inverse(const PlanarPoint &p) const;
    // Digit of the T-preimage of p.
    Digit inverse_digit(const PlanarPoint &p) const;

private:
    System S_;
    OrbitTables T_;
    Heights H_;
    PlanarRegion omega_, gamma_;
    int K_, J_;
    Tiling tiling_;
};

// Cut a region along cylinder boundaries and map every piece exactly.
Tiling omega_tiling(const System &S, const PlanarRegion &omega, int K);
Tiling gamma_tiling(const System &S, const PlanarRegion &gamma, int K, int J);

/*
 * True iff the parts have pairwise disjoint interiors and their union is the
 * union of whole (whose rectangles must be disjoint too).  On failure, why
 * names an offending cell.
 */
bool tiles(const std::vector<Rect> &parts, const std::vector<Rect> &whole, std::string *why = nullptr);
bool covered_by(const std::vector<Rect> &inner, const std::vector<Rect> &outer);

// Exact corner tilings for S on Omega and T on Gamma, heights and region relations.
Report verify_bijectivity(const System &S, int K = 8, int J = 8);

// mu of [x1,x2] x [y1,y2] for dmu = dx dy / (1 + xy)^2; throws if 1 + xy vanishes on it.
Interval mu_rect(const Rect &r, long bits = 96);
Interval mu_region(const PlanarRegion &R, long bits = 96);
// Smallest value of 1 + xy on the closure of the region (attained at a corner).
FieldElement hyperbola_gap(const PlanarRegion &R);

/*
 * Dyadic rectangles [-tau + 2^-(k+1), -tau + 2^-k) x [0, L_1] inside Omega,
 * accumulated until the mu-sum exceeds target.
 */
struct DivergenceResult {
    int rectangles;
    double sum;
};
DivergenceResult omega_divergence(const System &S, const Heights &H, double target);

// The marginal of mu on Gamma, normalized to a probability on [-tau, 0).
class Marginal {
public:
    explicit Marginal(const GammaSystem &G);

    double density(double x) const;
    // nu([a, b)).
    double mass(double a, double b) const;
    // nu(f^{-1}[a, b)), summing every branch with the infinite families in closed form.
    double preimage_mass(double a, double b) const;
    double mu_gamma() const { return mu_; }
    // Sorted abscissae where the fiber changes.
    const std::vector<double> &breakpoints() const { return breaks_; }

private:
    struct R {
        long double x1, x2, y1, y2;
    };
    long double raw_mass(long double a, long double b) const;
    std::vector<R> rects_;
    std::vector<double> breaks_;
    long double tau_, eps0_, eps1_, b1_, b2_;
    double mu_;
};

}
