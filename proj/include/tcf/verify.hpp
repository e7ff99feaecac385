#pragma once

#include "tcf/planar.hpp"

#include <cstdint>

namespace tcf {

// Every exact identity for one n: group relations, orbit tables, products, cylinders, heights, tilings.
Report identity_suite(int n, std::uint64_t seed = 1);

struct MeasureInvariance {
    int n = 0;
    int samples = 0;
    // max |mu(T rect) - mu(rect)| over the sampled rectangles.
    double worst = 0;
    // mu(Gamma) as an enclosure midpoint, and its enclosure width.
    double mu_gamma = 0;
    double mu_gamma_width = 0;
    // Rectangles of Omega near (phi_0, L_1) needed to push the mu-sum over the target.
    int divergence_rectangles = 0;
    double divergence_sum = 0;
};

/*
 * Random sub-rectangles with rational interpolation parameters inside single
 * pieces of the T-tiling of Gamma; on a piece T acts as (M x, N y), so the
 * image of a rectangle is a rectangle and both measures are closed forms.
 */
MeasureInvariance measure_invariance(const GammaSystem &G, int samples, std::uint64_t seed,
                                     double divergence_target = 1000.0);

}
