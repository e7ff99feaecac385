#pragma once

// Independent reference computations used by the tests.  These avoid the
// library's own code paths: plain long double trigonometry and brute force.

#include <cmath>
#include <vector>

namespace oracle {

inline long double lambda(int n, int k = 1) {
    return 2.0L * std::cos(static_cast<long double>(k) * M_PIl / n);
}

inline long double tau(int n) { return 1.0L + lambda(n); }

// Evaluate an integer polynomial (constant term first) with long doubles.
template <class Vec> long double horner(const Vec &p, long double x) {
    long double acc = 0;
    for (size_t i = p.size(); i-- > 0;)
        acc = acc * x + static_cast<long double>(p[i]);
    return acc;
}

inline int euler_phi(int m) {
    int r = m;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0)
                m /= p;
            r -= r / p;
        }
    }
    if (m > 1)
        r -= r / m;
    return r;
}

// g(x) = 1 - k tau - 1/x with k from the cylinder bounds, in long double.
inline long double g_map(int n, long double x, int *digit) {
    long double t = tau(n);
    int k = 1;
    while (!(x < 1.0L / (1.0L - k * t)))
        ++k;
    *digit = k;
    return 1.0L - k * t - 1.0L / x;
}

}
