#pragma once

#include "tcf/orbit.hpp"
#include "tcf/planar.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace tcf {

using DigitWord = std::vector<Digit>;

struct Admissibility {
    bool ok = true;
    // Number of the first violated restriction, 0 when admissible.
    int rule = 0;
    // Index of the digit at which the violation is detected.
    long position = -1;
};

/*
 * One pass over the word.  Restrictions:
 *   1. a negative digit is preceded by a digit > 1 (or starts the word);
 *   2. at most n - 2 consecutive 1s;
 *   3. 1^{n-2} 2 is followed by at most n - 3 consecutive 1s;
 *   4. 1^{n-2} 2 1^{n-3} is followed by a digit >= 3;
 *   5. 1^{n-2} 2 is not followed by a negative digit.
 * The fifth is not implied by the others; the cylinder automaton below
 * needs it, since the image of [1^{n-2} 2] misses the acceleration cylinders.
 */
Admissibility is_admissible(int n, const DigitWord &w);

/*
 * Exact cylinder construction.  A state is the image f^m[a_1 .. a_m] of a
 * cylinder, always a half-open interval with endpoints in K; a word is
 * admissible iff every image along it has nonempty interior.  There are
 * finitely many states, so this is a finite automaton for the language.
 */
class CylinderAutomaton {
public:
    explicit CylinderAutomaton(const System &S);

    static constexpr int start = 0;
    // -1 when the extended cylinder has empty interior.
    int next(int state, Digit d);
    bool accepts(const DigitWord &w);
    std::size_t size() const { return states_.size(); }
    const std::pair<FieldElement, FieldElement> &interval(int state) const { return states_.at(state); }

private:
    int intern(const FieldElement &lo, const FieldElement &hi);
    const System &S_;
    std::vector<std::pair<FieldElement, FieldElement>> states_;
    std::map<std::pair<int, Digit>, int> edges_;
};

// Distinct words of length L read off the digit sequences, with the first inadmissible one.
struct ObservedWords {
    int length = 0;
    std::set<DigitWord> words;
    long occurrences = 0;
    long inadmissible = 0;
    std::optional<DigitWord> witness;
    long witness_orbit = -1;
    long witness_step = -1;
};

ObservedWords observed_words(int n, const std::vector<std::vector<Digit>> &orbits, int L);

// Y = [1/(1 - 2 tau), 0), the union of Delta_k for k >= 3.
struct InducedRecord {
    double y = 0;
    // First return time to Y and the digits a_1 .. a_m read on the way.
    long m = 0;
    DigitWord word;
    // log |f_Y'(y)| by the chain rule.
    double log_derivative = 0;
};

// Derivative of the branch with digit k at x.
double branch_derivative(const System &S, Digit k, double x);

// First return from step m0 of an expansion; nullopt if t_{m0} is not in Y or no return is recorded.
std::optional<InducedRecord> induced_step_Y(const System &S, const Expansion &e, long m0);

struct AdlerReport {
    long samples = 0;
    long skipped = 0;
    double min_derivative = 0;
    double min_log_derivative = 0;
    long max_return = 0;
    // Index k holds the number of samples with return time k (last bucket: k and above).
    std::vector<long> return_histogram;
};

// Samples y uniformly in Y from random reals with the given seed and follows each to its first return.
AdlerReport adler_experiment(const System &S, long samples, std::uint64_t seed, long max_steps = 4096,
                             long precision_cap = 4096);

struct UniformCell {
    Rect box;
    double mass = 0; // mu(cell) / mu(Gamma)
    long hits = 0;
};

struct DiscrepancyPoint {
    long N = 0;
    double max_discrepancy = 0;
    long worst_cell = -1;
};

struct BirkhoffInterval {
    double a = 0, b = 0;
    double nu = 0;
    double average = 0;
};

struct UniformReport {
    int n = 0;
    std::uint64_t seed = 0;
    long orbit_length = 0;
    long orbits = 0;
    std::vector<UniformCell> cells;
    std::vector<DiscrepancyPoint> discrepancy;
    long outside_gamma = 0;
    std::vector<BirkhoffInterval> birkhoff;
    double max_birkhoff_error = 0;
};

/*
 * Frequencies of T^m(x, 0) in a grid of rows x cols boxes over the bounding
 * box of Gamma, against mu(box cap Gamma) / mu(Gamma).  Points come from an
 * ensemble of random x, each followed for orbit_length steps; the discrepancy
 * is reported after the first N points for every N in checkpoints.  The
 * Birkhoff averages of indicators of equal parts of [-tau, 0) along the same
 * orbits are compared with nu.
 */
UniformReport uniform_distribution_experiment(const GammaSystem &G, const std::vector<long> &checkpoints,
                                              std::uint64_t seed, long orbit_length = 1000, int rows = 10,
                                              int cols = 10, int birkhoff_parts = 8, long precision_cap = 4096);

}
