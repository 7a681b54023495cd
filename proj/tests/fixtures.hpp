#pragma once

// Shared coefficient-complex fixtures used across the test suites.

#include "fmc/crossed.hpp"

namespace fmc::fixtures {

// Z2 concentrated in dimension 1.
inline CrossedRef C1() {
    static CrossedRef c = crossed_complex_from_group(cyclic_group(2), "C1");
    return c;
}

// Z2 concentrated in dimension 2 over a trivial fundamental group.
inline CrossedRef C3() {
    static CrossedRef c = [] {
        auto one = trivial_group();
        auto z2 = cyclic_group(2);
        return make_crossed_complex({one, z2}, {trivial_hom(z2, one)}, {trivial_action(one, z2)},
                                    "C3");
    }();
    return c;
}

// Z2 -> Z2 identity boundary, trivial action.
inline CrossedRef ZI() {
    static CrossedRef c = [] {
        auto z2 = cyclic_group(2);
        return make_crossed_complex({z2, z2}, {identity_hom(z2)}, {trivial_action(z2, z2)}, "ZI");
    }();
    return c;
}

// S3 -> S3 identity boundary with conjugation action.
inline CrossedRef S3conj() {
    static CrossedRef c = [] {
        auto s3 = symmetric_group(3);
        return make_crossed_complex({s3, s3}, {identity_hom(s3)}, {conjugation_action(s3)},
                                    "S3conj");
    }();
    return c;
}

// Abelian complex in dimensions 2 and 3: C_2 = C_3 = Z4 with delta_3 = x2.
inline CrossedRef Z4x2() {
    static CrossedRef c = [] {
        auto one = trivial_group();
        auto z4 = cyclic_group(4);
        GroupHom times2{z4, z4, {0, 2, 0, 2}};
        return make_crossed_complex({one, z4, z4}, {trivial_hom(z4, one), times2},
                                    {trivial_action(one, z4), trivial_action(one, z4)}, "Z4x2");
    }();
    return c;
}

// C_1 = Z2 acting on C_3 = Z3 by inversion, everything else trivial.
inline CrossedRef Z3inv() {
    static CrossedRef c = [] {
        auto z2 = cyclic_group(2);
        auto one = trivial_group();
        auto z3 = cyclic_group(3);
        auto inv = make_action_fn(z2, z3, [&](int p, int x) { return p == 0 ? x : z3->inv(x); });
        return make_crossed_complex({z2, one, z3},
                                    {trivial_hom(one, z2), trivial_hom(z3, one)},
                                    {trivial_action(z2, one), inv}, "Z3inv");
    }();
    return c;
}

// C_1 = Z2 inverting C_3 = Z4, delta_3 = reduction mod 2 onto C_2 = Z2.
inline CrossedRef Z4inv3() {
    static CrossedRef c = [] {
        auto z2 = cyclic_group(2);
        auto z2b = cyclic_group(2);
        auto z4 = cyclic_group(4);
        GroupHom mod2{z4, z2b, {0, 1, 0, 1}};
        auto inv = make_action_fn(z2, z4, [&](int p, int x) { return p == 0 ? x : z4->inv(x); });
        return make_crossed_complex({z2, z2b, z4}, {trivial_hom(z2b, z2), mod2},
                                    {trivial_action(z2, z2b), inv}, "Z4inv3");
    }();
    return c;
}

// Dimension-1 fixtures for fibrations.
inline CrossedRef Z4dim1() {
    static CrossedRef c = crossed_complex_from_group(cyclic_group(4), "Z4");
    return c;
}

inline CrossedMorphism Z4toZ2() {
    auto src = Z4dim1();
    auto dst = C1();
    return CrossedMorphism{src, dst, {GroupHom{src->group(1), dst->group(1), {0, 1, 0, 1}}}};
}

inline std::vector<CrossedRef> all() {
    return {C1(), C3(), ZI(), S3conj(), Z4x2(), Z3inv(), Z4inv3()};
}

}  // namespace fmc::fixtures
