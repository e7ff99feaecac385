#pragma once

#include "tcf/algint.hpp"
#include "tcf/dynamics.hpp"
#include "tcf/quadratic.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tcf {

// A point of [-tau, 0) to be expanded.
class PointSource {
public:
    enum class Kind { Exact, Quadratic, Enclosure, Random };

    static PointSource rational(const FieldPtr &F, const mpq_class &q);
    static PointSource element(const FieldElement &x);
    static PointSource quadratic(const QuadElement &x);
    // A real known only through a fixed enclosure.
    static PointSource enclosure(const FieldPtr &F, const Interval &x);

    /*
     * A uniform random real of [-tau, 0): x = -3u where the binary digits of u
     * are drawn lazily from mt19937_64 seeded by (seed, index, attempt), and
     * attempts exceeding -tau are redrawn.  The first 256 bits give the dyadic
     * truncation x_256 = -3 N / 2^256.
     */
    static PointSource random(const FieldPtr &F, std::uint64_t seed, std::uint64_t index);
    // The dyadic truncation of a Random source to `bits` bits of u.
    mpq_class random_truncation(long bits) const;

    Kind kind() const { return kind_; }
    const FieldPtr &field() const { return F_; }
    // Exact points only: x = X / D with X in Z[lambda].
    const AlgInt &X() const { return X_; }
    const mpz_class &D() const { return D_; }
    std::optional<FieldElement> field_value() const;
    const std::optional<QuadElement> &quad_value() const { return q_; }
    // At least rel_bits correct bits where possible; an Enclosure returns its fixed interval.
    Interval enclose(long rel_bits) const;
    double to_double() const;

private:
    Kind kind_ = Kind::Exact;
    FieldPtr F_;
    AlgInt X_;
    mpz_class D_;
    std::optional<QuadElement> q_;
    std::optional<Interval> box_;
    std::uint64_t seed_ = 0, index_ = 0, attempt_ = 0;
};

struct Expansion;

struct ExpandOptions {
    long steps = 100;
    // Largest relative accuracy (bits) requested for one digit decision.
    long precision_cap = 4096;
    // Compute Theta_m = q_m^2 |x - p_m/q_m| from the convergents as well.
    bool direct = true;
    bool keep_convergents = false;
    // Called after each new digit; returning true ends the expansion with that digit.
    std::function<bool(const Expansion &)> stop;
};

/*
 * digits[m] is the digit applied to t_m.  The per-index vectors run over
 * m = 0..length(); theta_bis[m] is NaN when digits[m] is an acceleration
 * digit or not yet known.
 */
struct Expansion {
    std::vector<Digit> digits;
    std::vector<double> t, v, theta, theta_direct, theta_bis, log_q;
    // P_m = M_{k_m} ... M_{k_1} = [[q_m, -p_m], [-q_{m-1}, p_{m-1}]].
    std::vector<AlgMatrix> convergents;
    // The orbit reached 0 after length() steps.
    bool cusp = false;
    // First m with t_m a cusp (0 or -tau), or -1.  From -tau the orbit runs
    // through the parabolic cycle of W with slow digits.
    long cusp_index = -1;
    long max_precision = 0;
    long length() const { return static_cast<long>(digits.size()); }
};

Expansion expand(const System &S, const PointSource &x, const ExpandOptions &opt);

// Enclosure of a with at least rel_bits correct bits, refining the working precision as needed.
Interval eval_rel(const AlgInt &a, const Field &F, long rel_bits, long hint_cancel = 0);

}
