#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "fmc/hqft.hpp"

using namespace fmc;

static FormalMap circle_map(const CrossedRef& c, std::vector<int> edge_labels) {
    int n = (int)edge_labels.size();
    FormalMap f{circle_complex(n), c, {}};
    for (int i = 0; i < n; ++i)
        f.labels[f.domain.sorted({i, (i + 1) % n})] = edge_labels[i];
    return f;
}

// Independent brute-force oracle for the trivial-theory pushforward: list
// every labeling with the right projection by raw product enumeration and a
// full validation pass, then rank the relation matrix.
static std::vector<FormalMap> brute_force_lifts(const CrossedMorphism& p, const FormalMap& f) {
    std::vector<Simplex> slots;
    std::vector<std::vector<int>> cands;
    for (const auto& s : f.domain.simplices) {
        if (s.size() < 2) continue;
        slots.push_back(s);
        auto h = p.level((int)s.size() - 1);
        std::vector<int> c;
        for (int x = 0; x < h.source->order; ++x)
            if (h(x) == f.label(s)) c.push_back(x);
        cands.push_back(c);
    }
    std::vector<FormalMap> out;
    FormalMap cur{f.domain, p.source, {}};
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == slots.size()) {
            if (validate_formal_map(cur).ok()) out.push_back(cur);
            return;
        }
        for (int v : cands[i]) {
            cur.labels[slots[i]] = v;
            rec(i + 1);
        }
        cur.labels.erase(slots[i]);
    };
    rec(0);
    return out;
}

static int oracle_rank(const CrossedMorphism& p, const FormalMap& lambda) {
    auto lifts = brute_force_lifts(p, lambda);
    auto [same, idcyl] = transport_reorder(lambda, lambda.domain.rank);
    (void)same;
    auto index_of = [&](const FormalMap& f) {
        for (size_t i = 0; i < lifts.size(); ++i)
            if (lifts[i].labels == f.labels) return (int)i;
        throw StructuralError("oracle: end is not a lift");
    };
    Matrix rel;
    for (const auto& phi : brute_force_lifts(p, idcyl.map)) {
        int i = index_of(detail::restrict_to_end(phi, idcyl.in_map, lambda.domain, p.source));
        int j = index_of(detail::restrict_to_end(phi, idcyl.out_map, lambda.domain, p.source));
        if (i == j) continue;
        std::vector<Scalar> row(lifts.size(), Scalar(0));
        row[i] = Scalar(1);
        row[j] = Scalar(-1);
        rel.push_back(row);
    }
    return (int)lifts.size() - matrix_rank(rel);
}

TEST_CASE("exact matrix arithmetic") {
    Matrix m = {{Scalar(1), Scalar(1)}, {Scalar(1), Scalar(-1)}};
    REQUIRE(matrix_rank(m) == 2);
    REQUIRE(matrix_rank_mod(m, 2) == 1);
    REQUIRE(matrix_mul(m, matrix_inverse(m)) == identity_matrix(2));
    REQUIRE(is_identity(kronecker(identity_matrix(2), identity_matrix(3))));
    Matrix thirds = {{Scalar(1, 3)}};
    REQUIRE(matrix_inverse(thirds)[0][0] == Scalar(3));
    REQUIRE(matrix_rank(zero_matrix(3, 4)) == 0);
    REQUIRE(row_count(block_diag(m, thirds)) == 3);
}

static FHQFTFragment two_object_fragment(int dx, int dy, const Matrix& f) {
    FHQFTFragment t;
    t.complex = fixtures::C1();
    t.objects["x"] = {circle_map(t.complex, {0, 0, 0}), dx};
    t.objects["y"] = {circle_map(t.complex, {1, 0, 0}), dy};
    t.cobords["f"] = {"x", "y", std::nullopt, f};
    return t;
}

TEST_CASE("fragment validation") {
    SECTION("trivial covering theory validates") {
        auto p = identity_morphism(fixtures::C1());
        auto t = trivial_covering_theory(p, circle_map(fixtures::C1(), {1, 0, 0}));
        for (const auto& [key, cb] : t.cobords)
            if (cb.source == cb.target) t.identities.push_back(key);
        REQUIRE_FALSE(t.identities.empty());
        REQUIRE(validate_fragment(t).ok());
    }
    SECTION("matrix dimensions are enforced") {
        auto t = two_object_fragment(2, 3, zero_matrix(3, 2));
        REQUIRE(validate_fragment(t).ok());
        t.cobords["f"].matrix = zero_matrix(2, 3);
        REQUIRE_FALSE(validate_fragment(t).ok());
    }
    SECTION("identity records require identity matrices") {
        auto t = two_object_fragment(2, 2, identity_matrix(2));
        t.cobords["g"] = {"x", "x", std::nullopt, identity_matrix(2)};
        t.identities = {"g"};
        REQUIRE(validate_fragment(t).ok());
        t.cobords["g"].matrix[0][1] = Scalar(5);
        REQUIRE_FALSE(validate_fragment(t).ok());
    }
    SECTION("corrupt composite is reported by its triple") {
        auto t = two_object_fragment(1, 1, scalar_matrix(Scalar(2)));
        t.cobords["g"] = {"y", "x", std::nullopt, scalar_matrix(Scalar(3))};
        t.cobords["gf"] = {"x", "x", std::nullopt, scalar_matrix(Scalar(6))};
        t.composites = {{"f", "g", "gf"}};
        REQUIRE(validate_fragment(t).ok());
        t.cobords["gf"].matrix = scalar_matrix(Scalar(7));
        auto r = validate_fragment(t);
        REQUIRE_FALSE(r.ok());
        REQUIRE(r.summary().find("(f, g, gf)") != std::string::npos);
    }
    SECTION("monoidal data: unit, associativity, interchange") {
        auto c = fixtures::C1();
        FHQFTFragment t;
        t.complex = c;
        auto a = circle_map(c, {1, 0, 0});
        auto b = circle_map(c, {0, 0, 0});
        auto cc = circle_map(c, {1, 1, 0});
        auto empty = FormalMap{make_complex({}, {}), c, {}};
        t.objects["a"] = {a, 1};
        t.objects["b"] = {b, 1};
        t.objects["c"] = {cc, 1};
        t.objects["ab"] = {sum(a, b), 1};
        t.objects["bc"] = {sum(b, cc), 1};
        t.objects["abc"] = {sum(sum(a, b), cc), 1};
        t.objects["empty"] = {empty, 1};
        t.objects["a+e"] = {sum(a, empty), 1};
        t.unit_key = "empty";
        t.unit_iso = scalar_matrix(Scalar(1, 2));
        t.sums.push_back({"ab", "a", "b", scalar_matrix(Scalar(1))});
        t.sums.push_back({"bc", "b", "c", scalar_matrix(Scalar(1))});
        t.sums.push_back({"abc", "ab", "c", scalar_matrix(Scalar(1))});
        t.sums.push_back({"abc", "a", "bc", scalar_matrix(Scalar(1))});
        t.sums.push_back({"a+e", "a", "empty", scalar_matrix(Scalar(2))});
        auto lam = transport_reorder(a, a.domain.rank).second;
        auto gam = transport_reorder(b, b.domain.rank).second;
        auto whole = transport_reorder(sum(a, b), sum(a, b).domain.rank).second;
        t.cobords["La"] = {"a", "a", lam, identity_matrix(1)};
        t.cobords["Lb"] = {"b", "b", gam, identity_matrix(1)};
        t.cobords["Lab"] = {"ab", "ab", whole, identity_matrix(1)};
        t.interchanges.push_back({"La", "Lb", "Lab"});
        REQUIRE(validate_fragment(t).ok());

        auto bad_unit = t;
        bad_unit.sums[4].iso = scalar_matrix(Scalar(3));
        REQUIRE_FALSE(validate_fragment(bad_unit).ok());
        auto bad_assoc = t;
        bad_assoc.sums[3].iso = scalar_matrix(Scalar(2));
        REQUIRE_FALSE(validate_fragment(bad_assoc).ok());
        auto bad_inter = t;
        bad_inter.cobords["Lab"].matrix = scalar_matrix(Scalar(4));
        REQUIRE_FALSE(validate_fragment(bad_inter).ok());
    }
}

TEST_CASE("direct sum, tensor, and dual") {
    Matrix f1 = {{Scalar(1), Scalar(2)}, {Scalar(3), Scalar(4)}, {Scalar(5), Scalar(6)}};
    Matrix f2 = {{Scalar(7)}, {Scalar(8)}};
    auto t1 = two_object_fragment(2, 3, f1);
    auto t2 = two_object_fragment(1, 2, f2);
    SECTION("dimensions add and matrices become blocks") {
        auto s = direct_sum(t1, t2);
        REQUIRE(s.objects.at("x").dim == 3);
        REQUIRE(s.objects.at("y").dim == 5);
        REQUIRE(s.cobords.at("f").matrix == block_diag(f1, f2));
        REQUIRE(validate_fragment(s).ok());
    }
    SECTION("dimensions multiply and matrices become Kronecker products") {
        auto s = tensor(t1, t2);
        REQUIRE(s.objects.at("x").dim == 2);
        REQUIRE(s.objects.at("y").dim == 6);
        REQUIRE(s.cobords.at("f").matrix == kronecker(f1, f2));
        REQUIRE(validate_fragment(s).ok());
    }
    SECTION("dual reverses and transposes; double dual is the identity") {
        auto d = dual(t1);
        REQUIRE(d.cobords.at("f").source == "y");
        REQUIRE(d.cobords.at("f").matrix == transpose(f1));
        auto dd = dual(d);
        REQUIRE(dd.cobords.at("f").source == "x");
        REQUIRE(dd.cobords.at("f").matrix == f1);
        REQUIRE(dd.objects.at("x").dim == t1.objects.at("x").dim);
    }
    SECTION("composite records survive all three operations") {
        auto t = two_object_fragment(1, 1, scalar_matrix(Scalar(2)));
        t.cobords["g"] = {"y", "x", std::nullopt, scalar_matrix(Scalar(3))};
        t.cobords["gf"] = {"x", "x", std::nullopt, scalar_matrix(Scalar(6))};
        t.composites = {{"f", "g", "gf"}};
        auto u = two_object_fragment(1, 1, scalar_matrix(Scalar(5)));
        u.cobords["g"] = {"y", "x", std::nullopt, scalar_matrix(Scalar(7))};
        u.cobords["gf"] = {"x", "x", std::nullopt, scalar_matrix(Scalar(35))};
        u.composites = {{"f", "g", "gf"}};
        REQUIRE(validate_fragment(direct_sum(t, u)).ok());
        REQUIRE(validate_fragment(tensor(t, u)).ok());
        REQUIRE(validate_fragment(dual(t)).ok());
    }
    SECTION("mismatched key sets are refused") {
        auto t3 = t2;
        t3.objects["z"] = {circle_map(t3.complex, {1, 1, 0}), 1};
        REQUIRE_THROWS_AS(direct_sum(t1, t3), StructuralError);
    }
}

TEST_CASE("pullback of a theory") {
    auto c1 = fixtures::C1();
    auto z4 = fixtures::Z4dim1();
    auto p = fixtures::Z4toZ2();
    FHQFTFragment t;
    t.complex = c1;
    t.objects["even"] = {circle_map(c1, {0, 0, 0}), 2};
    t.objects["odd"] = {circle_map(c1, {1, 0, 0}), 3};
    SECTION("identity pullback leaves the theory unchanged") {
        std::map<std::string, FormalMap> obs;
        for (const auto& [key, ob] : t.objects) obs[key] = ob.map;
        auto back = pullback(identity_morphism(c1), t, obs);
        for (const auto& [key, ob] : t.objects)
            REQUIRE(back.objects.at(key).dim == ob.dim);
    }
    SECTION("circle theory pulls back along reduction by holonomy parity") {
        std::map<std::string, FormalMap> obs = {
            {"h0", circle_map(z4, {0, 0, 0})}, {"h1", circle_map(z4, {1, 0, 0})},
            {"h2", circle_map(z4, {2, 0, 0})}, {"h3", circle_map(z4, {3, 0, 0})}};
        auto back = pullback(p, t, obs);
        REQUIRE(back.complex == z4);
        REQUIRE(back.objects.at("h0").dim == 2);
        REQUIRE(back.objects.at("h2").dim == 2);
        REQUIRE(back.objects.at("h1").dim == 3);
        REQUIRE(back.objects.at("h3").dim == 3);
        REQUIRE(validate_fragment(back).ok());
    }
    SECTION("missing composed key is a loud error") {
        std::map<std::string, FormalMap> obs = {{"w", circle_map(z4, {1, 0, 0, 0})}};
        REQUIRE_THROWS_WITH(pullback(p, t, obs),
                            Catch::Matchers::ContainsSubstring("no recorded value"));
    }
}

TEST_CASE("pushforward along a finite-fibre fibration") {
    auto c1 = fixtures::C1();
    auto z4 = fixtures::Z4dim1();
    auto p = fixtures::Z4toZ2();
    REQUIRE(is_finite_fibre_fibration(p));
    SECTION("identity morphism recovers the value of the theory") {
        auto q = identity_morphism(c1);
        auto lam = circle_map(c1, {1, 0, 0});
        auto t = trivial_covering_theory(q, lam);
        auto res = pushforward(q, t, lam);
        REQUIRE(res.lifts.size() == 1);
        REQUIRE(res.relations.empty());
        REQUIRE(res.rank == 1);
        REQUIRE(res.rank == oracle_rank(q, lam));
    }
    SECTION("ranks agree with the brute-force oracle") {
        std::vector<FormalMap> targets = {
            circle_map(c1, {0, 0, 0}), circle_map(c1, {1, 0, 0}), circle_map(c1, {1, 1, 0}),
            circle_map(c1, {1, 1, 1}), circle_map(c1, {1, 0, 1, 0})};
        for (const auto& lam : targets) {
            auto t = trivial_covering_theory(p, lam);
            auto res = pushforward(p, t, lam);
            REQUIRE(res.total_dim == (int)res.lifts.size());
            REQUIRE(res.rank <= res.total_dim);
            REQUIRE(res.rank == oracle_rank(p, lam));
            // lifts are separated exactly by holonomy class in Z4
            REQUIRE(res.rank == 2);
        }
    }
    SECTION("multiplicativity over disjoint unions") {
        auto lam0 = circle_map(c1, {1, 0, 0});
        auto lam1 = circle_map(c1, {0, 0, 0});
        auto both = sum(lam0, lam1);
        auto t = trivial_covering_theory(p, both);
        auto res = pushforward(p, t, both);
        REQUIRE(res.rank == oracle_rank(p, lam0) * oracle_rank(p, lam1));
    }
    SECTION("the induced map of the identity cobordism is the identity") {
        auto lam = circle_map(c1, {0, 0, 0});
        auto t = trivial_covering_theory(p, lam);
        auto res = pushforward(p, t, lam);
        auto idcob = transport_reorder(lam, lam.domain.rank).second;
        REQUIRE(pushforward_cobordism(p, t, idcob, res, res) == identity_matrix(res.rank));
    }
    SECTION("rank bound holds with equality when there are no relations") {
        auto lam = circle_map(c1, {1, 0, 0});
        auto t = trivial_covering_theory(p, lam);
        auto res = pushforward(p, t, lam);
        REQUIRE(res.rank <= res.total_dim);
        auto q = identity_morphism(c1);
        auto t2 = trivial_covering_theory(q, lam);
        auto res2 = pushforward(q, t2, lam);
        REQUIRE(res2.relation_rank == 0);
        REQUIRE(res2.rank == res2.total_dim);
    }
    SECTION("non-fibrations are refused") {
        CrossedMorphism bad{c1, z4, {GroupHom{c1->group(1), z4->group(1), {0, 2}}}};
        REQUIRE_FALSE(is_finite_fibre_fibration(bad));
        auto lam = circle_map(z4, {2, 0, 0});
        FHQFTFragment t;
        t.complex = c1;
        REQUIRE_THROWS_AS(pushforward(bad, t, lam), StructuralError);
    }
    SECTION("missing lift or cylinder keys are loud errors") {
        auto lam = circle_map(c1, {1, 0, 0});
        auto t = trivial_covering_theory(p, lam);
        auto no_object = t;
        no_object.objects.erase(no_object.objects.begin());
        REQUIRE_THROWS_WITH(pushforward(p, no_object, lam),
                            Catch::Matchers::ContainsSubstring("missing from the fragment"));
        auto no_cyl = t;
        no_cyl.cobords.erase(no_cyl.cobords.begin());
        REQUIRE_THROWS_WITH(pushforward(p, no_cyl, lam),
                            Catch::Matchers::ContainsSubstring("missing from the fragment"));
    }
}
