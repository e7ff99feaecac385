#pragma once

#include "tcf/dynamics.hpp"

#include <memory>

namespace tcf {

// K(sqrt D) for a positive non-square D in K.
struct QuadField {
    FieldPtr F;
    FieldElement D;
};
using QuadPtr = std::shared_ptr<const QuadField>;

QuadPtr make_quad_field(const FieldElement &D);

// a + b sqrt(D), exact.
class QuadElement {
public:
    QuadElement() = default;
    QuadElement(QuadPtr Q, FieldElement a, FieldElement b);
    QuadElement(QuadPtr Q, const FieldElement &a);

    const QuadPtr &quad() const { return Q_; }
    const FieldElement &a() const { return a_; }
    const FieldElement &b() const { return b_; }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    QuadElement conjugate() const;
    QuadElement inverse() const;
    // Exact sign under the real embedding with sqrt(D) > 0.
    int sign() const;
    Interval enclose(long rel_bits) const;
    double to_double() const;

private:
    QuadPtr Q_;
    FieldElement a_, b_;
};

QuadElement operator+(const QuadElement &x, const QuadElement &y);
QuadElement operator-(const QuadElement &x, const QuadElement &y);
QuadElement operator*(const QuadElement &x, const QuadElement &y);
QuadElement operator/(const QuadElement &x, const QuadElement &y);
QuadElement operator-(const QuadElement &x);
QuadElement operator+(const QuadElement &x, const FieldElement &c);
QuadElement operator*(const FieldElement &c, const QuadElement &x);
bool operator==(const QuadElement &x, const QuadElement &y);
int compare(const QuadElement &x, const FieldElement &c);

QuadElement apply(const Mobius &M, const QuadElement &x);

// Exact cylinder decisions for points of K(sqrt D).
Digit cylinder_of_f(const System &S, const QuadElement &x);
Digit cylinder_of_g(const System &S, const QuadElement &x);

// The two fixed points of a hyperbolic M over K, as conjugate elements of K(sqrt(tr^2 - 4)).
std::pair<QuadElement, QuadElement> fixed_points(const Mobius &M);

}
