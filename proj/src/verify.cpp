#include "tcf/verify.hpp"

#include <random>

namespace tcf {

Report identity_suite(int n, std::uint64_t seed) {
    System S(n);
    const FieldPtr &F = S.field();
    Report r;
    r.append(relations_check(F));
    r.append(ward_conjugation_check(F));
    r.append(domination_check(F, 50, seed));
    r.append(inverses_action_check(F, 50, seed));
    OrbitTables T = build_orbit_tables(S);
    r.append(check_orbit_tables(S, T));
    r.append(product_relations_check(S, T));
    r.append(cylinder_check(S, 12));
    r.append(verify_bijectivity(S));
    return r;
}

namespace {

FieldElement lerp(const FieldElement &a, const FieldElement &b, std::mt19937_64 &rng) {
    std::uniform_int_distribution<long> u(1, 9999);
    mpq_class t(u(rng), 10000);
    t.canonicalize();
    return a + (b - a) * FieldElement(a.field(), t);
}

}

MeasureInvariance measure_invariance(const GammaSystem &G, int samples, std::uint64_t seed, double divergence_target) {
    const System &S = G.system();
    MeasureInvariance m;
    m.n = S.n();
    m.samples = samples;
    std::mt19937_64 rng(seed);
    const auto &pieces = G.tiling().pieces;
    std::uniform_int_distribution<size_t> pick(0, pieces.size() - 1);
    for (int i = 0; i < samples; ++i) {
        const Piece &pc = pieces[pick(rng)];
        FieldElement x1 = lerp(pc.src.x1, pc.src.x2, rng), x2 = lerp(pc.src.x1, pc.src.x2, rng);
        FieldElement y1 = lerp(pc.src.y1, pc.src.y2, rng), y2 = lerp(pc.src.y1, pc.src.y2, rng);
        if (x2 < x1)
            std::swap(x1, x2);
        if (y2 < y1)
            std::swap(y1, y2);
        Mobius M = S.matrix(pc.digit), N = S.y_matrix(pc.digit);
        Rect r{x1, x2, y1, y2};
        Rect im{apply(M, x1), apply(M, x2), apply(N, y1), apply(N, y2)};
        m.worst = std::max(m.worst, std::fabs((mu_rect(r) - mu_rect(im)).mid_d()));
    }
    Interval mg = mu_region(G.gamma());
    m.mu_gamma = mg.mid_d();
    m.mu_gamma_width = mg.width_d();
    DivergenceResult d = omega_divergence(S, G.heights(), divergence_target);
    m.divergence_rectangles = d.rectangles;
    m.divergence_sum = d.sum;
    return m;
}

}
