#include <catch2/catch_amalgamated.hpp>

#include "fmc/complexes.hpp"

using namespace fmc;

static int count_dim(const OrderedComplex& k, int d) {
    int n = 0;
    for (const auto& s : k.simplices)
        if ((int)s.size() == d + 1) ++n;
    return n;
}

TEST_CASE("complex construction and face closure") {
    auto k = standard_simplex(3);
    REQUIRE(count_dim(k, 0) == 4);
    REQUIRE(count_dim(k, 1) == 6);
    REQUIRE(count_dim(k, 2) == 4);
    REQUIRE(count_dim(k, 3) == 1);
    REQUIRE(validate_complex(k).ok());
}

TEST_CASE("to_simplicial_set") {
    SECTION("single edge") {
        auto k = make_complex({"a", "b"}, {{0, 1}});
        auto x = to_simplicial_set(k, 2);
        REQUIRE(x.size(0) == 2);
        // dim 1: aa, ab, bb
        REQUIRE(x.size(1) == 3);
        int nd = 0;
        for (bool b : x.nondeg[1]) nd += b;
        REQUIRE(nd == 1);
        REQUIRE(validate_fragment_identities(x).ok());
    }
    SECTION("boundary of triangle has no nondegenerate 2-simplices") {
        auto k = make_complex({"a", "b", "c"}, {{0, 1}, {1, 2}, {0, 2}});
        auto x = to_simplicial_set(k, 2);
        int nd = 0;
        for (bool b : x.nondeg[2]) nd += b;
        REQUIRE(nd == 0);
        REQUIRE(validate_fragment_identities(x).ok());
    }
    SECTION("tetrahedron counts and identities up to cap 4") {
        auto x = to_simplicial_set(standard_simplex(3), 4);
        int nd[5] = {0, 0, 0, 0, 0};
        for (int n = 0; n <= 4; ++n)
            for (bool b : x.nondeg[n]) nd[n] += b;
        REQUIRE(nd[0] == 4);
        REQUIRE(nd[1] == 6);
        REQUIRE(nd[2] == 4);
        REQUIRE(nd[3] == 1);
        REQUIRE(nd[4] == 0);
        REQUIRE(validate_fragment_identities(x).ok());
    }
    SECTION("incomparable vertices produce an order error") {
        auto k = make_complex({"a", "b"}, {{0, 1}}, {}, {0, 0});
        REQUIRE_THROWS_AS(to_simplicial_set(k, 1), StructuralError);
    }
}

TEST_CASE("nerve of cover") {
    SECTION("two overlapping sets give an edge") {
        OrderedOpenCover u{{"U", "V"}, {{0}, {1}, {0, 1}}, {}};
        auto k = nerve_of_cover(u);
        REQUIRE(count_dim(k, 1) == 1);
    }
    SECTION("three pairwise overlaps, no triple: triangle boundary") {
        OrderedOpenCover u{{"U", "V", "W"}, {{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}}, {}};
        auto k = nerve_of_cover(u);
        REQUIRE(count_dim(k, 1) == 3);
        REQUIRE(count_dim(k, 2) == 0);
    }
    SECTION("open-star cover of a 3-vertex circle reproduces the circle") {
        // stars of adjacent vertices meet; all three only at a common point
        // which does not exist on the circle
        OrderedOpenCover u{{"s0", "s1", "s2"}, {{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}}, {}};
        auto k = nerve_of_cover(u);
        auto circle = circle_complex(3, "s");
        REQUIRE(k.simplices == circle.simplices);
    }
    SECTION("non-monotone oracle rejected") {
        OrderedOpenCover u{{"U", "V"}, {{0}, {0, 1}}, {}};
        REQUIRE_THROWS_AS(nerve_of_cover(u), StructuralError);
    }
}

TEST_CASE("prism decompositions") {
    SECTION("prism over an edge: 2 triangles") {
        auto k = make_complex({"a", "b"}, {{0, 1}}, {0});
        auto p = prism(k, k, identity_carrier(k));
        REQUIRE(count_dim(p.complex, 2) == 2);
        REQUIRE(count_dim(p.complex, 3) == 0);
        REQUIRE(validate_complex(p.complex).ok());
        REQUIRE(p.basepoint_verticals.size() == 1);
    }
    SECTION("prism over a triangle: 3 tetrahedra") {
        auto k = standard_simplex(2);
        auto p = prism(k, k, identity_carrier(k));
        REQUIRE(count_dim(p.complex, 3) == 3);
        REQUIRE(validate_complex(p.complex).ok());
    }
    SECTION("prism over an edge split at midpoint: 3 triangles") {
        auto k = make_complex({"a", "b"}, {{0, 1}}, {0});
        auto sub = stellar_subdivide_edge(k, {0, 1});
        auto p = prism(k, sub.complex, sub.carrier);
        REQUIRE(count_dim(p.complex, 2) == 3);
        REQUIRE(validate_complex(p.complex).ok());
        REQUIRE(p.basepoint_verticals.size() == 1);
    }
    SECTION("bad carrier rejected") {
        auto k = make_complex({"a", "b", "c"}, {{0, 1}, {1, 2}});
        CarrierMap bad{{0}, {2}, {1}};  // edge (a,c) carrier {a,c} is not a simplex
        auto top = make_complex({"x", "y", "z"}, {{0, 1}, {1, 2}});
        REQUIRE_THROWS_AS(prism(k, top, bad), StructuralError);
    }
}

TEST_CASE("barycentric subdivision") {
    SECTION("edge becomes a path of two edges") {
        auto k = make_complex({"a", "b"}, {{0, 1}}, {0});
        auto s = barycentric_subdivide(k);
        REQUIRE(s.complex.vertex_count() == 3);
        REQUIRE(count_dim(s.complex, 1) == 2);
        REQUIRE(s.complex.basepoints.size() == 1);
    }
    SECTION("triangle becomes 6 triangles") {
        auto s = barycentric_subdivide(standard_simplex(2));
        REQUIRE(count_dim(s.complex, 2) == 6);
        REQUIRE(validate_complex(s.complex).ok());
    }
    SECTION("tetrahedron becomes 24 tetrahedra") {
        auto s = barycentric_subdivide(standard_simplex(3));
        REQUIRE(count_dim(s.complex, 3) == 24);
    }
    SECTION("carriers contain the vertex carriers") {
        auto k = standard_simplex(2);
        auto s = barycentric_subdivide(k);
        for (const auto& t : s.complex.simplices) {
            std::set<int> u;
            for (int v : t)
                for (int w : s.carrier[v]) u.insert(w);
            REQUIRE(k.has(Simplex(u.begin(), u.end())));
        }
    }
}

TEST_CASE("disjoint union and components") {
    auto edge = make_complex({"a", "b"}, {{0, 1}});
    auto pt = make_complex({"p"}, {});
    SECTION("edge + point: 2 components") {
        auto u = disjoint_union(edge, pt);
        REQUIRE(connected_components(u).size() == 2);
    }
    SECTION("circle: 1 component") {
        REQUIRE(connected_components(circle_complex(3)).size() == 1);
    }
    SECTION("two disjoint triangles: 2 components") {
        auto t = standard_simplex(2);
        auto u = disjoint_union(t, t);
        REQUIRE(u.vertex_count() == 6);
        auto comps = connected_components(u);
        REQUIRE(comps.size() == 2);
        for (auto& c : comps) REQUIRE(validate_complex(c.complex).ok());
    }
    SECTION("name clashes are namespaced") {
        auto u = disjoint_union(edge, edge);
        std::set<std::string> names(u.vertex_names.begin(), u.vertex_names.end());
        REQUIRE(names.size() == 4);
    }
}
