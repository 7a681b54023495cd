#pragma once

#include <array>

#include "fmc/formalmap.hpp"
#include "fmc/nerve.hpp"

namespace fmc {

// Finite fragment of a simplicial group: levels G_0..G_cap with face and
// degeneracy homomorphisms.
struct SimplicialGroupFragment {
    int cap = 0;
    std::vector<GroupRef> levels;
    std::vector<std::vector<GroupHom>> face;   // face[n][i] : G_n -> G_{n-1}, 1 <= n <= cap
    std::vector<std::vector<GroupHom>> degen;  // degen[n][i] : G_n -> G_{n+1}, 0 <= n < cap

    const GroupRef& level(int n) const {
        if (n < 0 || n > cap) throw StructuralError("simplicial group level out of range");
        return levels[n];
    }
    int d(int n, int i, int x) const { return face[n][i](x); }
    int s(int n, int i, int x) const { return degen[n][i](x); }
};

inline ValidationReport validate_simplicial_group(const SimplicialGroupFragment& g) {
    ValidationReport r;
    if ((int)g.levels.size() != g.cap + 1) throw StructuralError("level count mismatch");
    for (int n = 1; n <= g.cap; ++n) {
        if ((int)g.face[n].size() != n + 1) throw StructuralError("face hom count mismatch");
        for (int i = 0; i <= n; ++i)
            r.merge(validate_hom(g.face[n][i]), "d_" + std::to_string(i) + " at level " +
                                                    std::to_string(n));
    }
    for (int n = 0; n < g.cap; ++n) {
        if ((int)g.degen[n].size() != n + 1) throw StructuralError("degeneracy hom count mismatch");
        for (int i = 0; i <= n; ++i)
            r.merge(validate_hom(g.degen[n][i]), "s_" + std::to_string(i) + " at level " +
                                                     std::to_string(n));
    }
    auto lvl = [&](int n, const std::string& what, bool ok) {
        if (!ok) r.fail(what + " fails at level " + std::to_string(n));
    };
    for (int n = 2; n <= g.cap; ++n)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (int x = 0; x < g.level(n)->order; ++x)
                    lvl(n, "d_i d_j", g.d(n - 1, i, g.d(n, j, x)) == g.d(n - 1, j - 1, g.d(n, i, x)));
    for (int n = 0; n < g.cap; ++n)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n + 1; ++i)
                for (int x = 0; x < g.level(n)->order; ++x) {
                    int v = g.d(n + 1, i, g.s(n, j, x));
                    if (i == j || i == j + 1)
                        lvl(n, "d_i s_i", v == x);
                    else if (i < j)
                        lvl(n, "d_i s_j (i<j)", n >= 1 && v == g.s(n - 1, j - 1, g.d(n, i, x)));
                    else
                        lvl(n, "d_i s_j (i>j+1)", n >= 1 && v == g.s(n - 1, j, g.d(n, i - 1, x)));
                }
    for (int n = 0; n + 1 < g.cap; ++n)
        for (int i = 0; i <= n; ++i)
            for (int j = i; j <= n; ++j)
                for (int x = 0; x < g.level(n)->order; ++x)
                    lvl(n, "s_i s_j", g.s(n + 1, i, g.s(n, j, x)) == g.s(n + 1, j + 1, g.s(n, i, x)));
    return r;
}

inline SimplicialGroupFragment constant_simplicial_group(const GroupRef& g, int cap) {
    SimplicialGroupFragment out;
    out.cap = cap;
    out.levels.assign(cap + 1, g);
    out.face.resize(cap + 1);
    out.degen.resize(cap + 1);
    for (int n = 1; n <= cap; ++n) out.face[n].assign(n + 1, identity_hom(g));
    for (int n = 0; n < cap; ++n) out.degen[n].assign(n + 1, identity_hom(g));
    return out;
}

// ----- the cap-3 group model of a crossed complex -----

namespace detail {

// Coordinates: G_1 = C_2 x| C_1 as (p, c) with d_1 = p, d_0 = p*delta2(c);
// G_2 = C_3 x| (C_2 x C_2) x| C_1 as (p, b, a, z) with d_2 = (p, a),
// d_1 = (p, b*a), d_0 = (p*delta2(a), a^-1*b*a*delta3(z)).
struct GroupModelCodec {
    CrossedRef c;
    int n2, n3;

    explicit GroupModelCodec(CrossedRef cc)
        : c(std::move(cc)), n2(c->group(2)->order), n3(c->group(3)->order) {}

    int enc1(int p, int b) const { return p * n2 + b; }
    std::pair<int, int> dec1(int g) const { return {g / n2, g % n2}; }
    int enc2(int p, int b, int a, int z) const { return ((p * n2 + b) * n2 + a) * n3 + z; }
    std::array<int, 4> dec2(int g) const {
        int z = g % n3;
        g /= n3;
        int a = g % n2;
        g /= n2;
        return {g / n2, g % n2, a, z};
    }

    int mul1(int x, int y) const {
        auto [p, b] = dec1(x);
        auto [q, e] = dec1(y);
        return enc1(c->mul(1, p, q), c->mul(2, c->act(2, c->inv(1, q), b), e));
    }
    int mul2(int x, int y) const {
        auto [p, b, a, z] = dec2(x);
        auto [q, e, f, w] = dec2(y);
        int qi = c->inv(1, q);
        int bq = c->act(2, qi, b), aq = c->act(2, qi, a);
        int bc = c->mul(2, bq, c->mul(2, aq, c->mul(2, e, c->inv(2, aq))));
        return enc2(c->mul(1, p, q), bc, c->mul(2, aq, f),
                    c->mul(3, c->act(3, qi, z), w));
    }
    int d0_1(int x) const {
        auto [p, b] = dec1(x);
        return c->mul(1, p, c->boundary(2)(b));
    }
    int d1_1(int x) const { return dec1(x).first; }
    int s0_0(int p) const { return enc1(p, c->id(2)); }
    int d0_2(int x) const {
        auto [p, b, a, z] = dec2(x);
        int conj = c->mul(2, c->inv(2, a), c->mul(2, b, a));
        return enc1(c->mul(1, p, c->boundary(2)(a)),
                    c->mul(2, conj, c->boundary(3)(z)));
    }
    int d1_2(int x) const {
        auto [p, b, a, z] = dec2(x);
        (void)z;
        return enc1(p, c->mul(2, b, a));
    }
    int d2_2(int x) const {
        auto [p, b, a, z] = dec2(x);
        (void)b;
        (void)z;
        return enc1(p, a);
    }
    int s0_1(int x) const {
        auto [p, b] = dec1(x);
        return enc2(p, b, c->id(2), c->id(3));
    }
    int s1_1(int x) const {
        auto [p, b] = dec1(x);
        return enc2(p, c->id(2), b, c->id(3));
    }
};

}  // namespace detail

// Explicit simplicial group with Moore complex `c`, for crossed complexes
// concentrated in dimensions <= 3 (levels G_0..G_2 suffice for every
// operation here; higher caps are not modeled).
inline SimplicialGroupFragment simplicial_group_from_crossed_complex(const CrossedRef& c,
                                                                     int cap = 3) {
    if (cap > 3)
        throw StructuralError("group model supports crossed complexes of dimension <= 3");
    if (c->dims > 3)
        throw StructuralError("group model supports crossed complexes of dimension <= 3");
    detail::GroupModelCodec m(c);
    SimplicialGroupFragment g;
    g.cap = 2;
    auto g0 = c->group(1);
    std::vector<std::string> names1, names2;
    for (int p = 0; p < g0->order; ++p)
        for (int b = 0; b < m.n2; ++b)
            names1.push_back("(" + g0->names[p] + "|" + c->group(2)->names[b] + ")");
    auto g1 = make_group_fn(g0->order * m.n2, [&](int x, int y) { return m.mul1(x, y); }, names1,
                            c->label + "-G1");
    for (int p = 0; p < g0->order; ++p)
        for (int b = 0; b < m.n2; ++b)
            for (int a = 0; a < m.n2; ++a)
                for (int z = 0; z < m.n3; ++z)
                    names2.push_back("(" + g0->names[p] + "|" + c->group(2)->names[b] + "|" +
                                     c->group(2)->names[a] + "|" + c->group(3)->names[z] + ")");
    auto g2 = make_group_fn(g0->order * m.n2 * m.n2 * m.n3,
                            [&](int x, int y) { return m.mul2(x, y); }, names2, c->label + "-G2");
    g.levels = {g0, g1, g2};
    auto hom = [](const GroupRef& a, const GroupRef& b, auto&& fn) {
        GroupHom h{a, b, {}};
        for (int x = 0; x < a->order; ++x) h.map.push_back(fn(x));
        return h;
    };
    g.face.resize(3);
    g.degen.resize(3);
    g.face[1] = {hom(g1, g0, [&](int x) { return m.d0_1(x); }),
                 hom(g1, g0, [&](int x) { return m.d1_1(x); })};
    g.face[2] = {hom(g2, g1, [&](int x) { return m.d0_2(x); }),
                 hom(g2, g1, [&](int x) { return m.d1_2(x); }),
                 hom(g2, g1, [&](int x) { return m.d2_2(x); })};
    g.degen[0] = {hom(g0, g1, [&](int x) { return m.s0_0(x); })};
    g.degen[1] = {hom(g1, g2, [&](int x) { return m.s0_1(x); }),
                  hom(g1, g2, [&](int x) { return m.s1_1(x); })};
    return g;
}

// ----- Moore complex and the crossed complex of a simplicial group -----

struct MooreComplex {
    std::vector<Subgroup> levels;    // NG_0..NG_cap
    std::vector<GroupHom> boundary;  // boundary[n-1] : NG_n -> NG_{n-1}
};

inline MooreComplex moore_complex(const SimplicialGroupFragment& g) {
    MooreComplex m;
    for (int n = 0; n <= g.cap; ++n) {
        std::set<int> elems;
        for (int x = 0; x < g.level(n)->order; ++x) {
            bool in = true;
            for (int i = 1; i <= n; ++i)
                if (g.d(n, i, x) != g.level(n - 1)->identity) in = false;
            if (in) elems.insert(x);
        }
        m.levels.push_back(make_subgroup(g.level(n), elems));
    }
    for (int n = 1; n <= g.cap; ++n) {
        GroupHom b{m.levels[n].group, m.levels[n - 1].group, {}};
        for (int e : m.levels[n].elements) {
            int img = m.levels[n - 1].index_of[g.d(n, 0, e)];
            if (img < 0) throw StructuralError("Moore boundary leaves the Moore complex");
            b.map.push_back(img);
        }
        m.boundary.push_back(b);
    }
    return m;
}

namespace detail {

inline std::set<int> degenerate_subgroup(const SimplicialGroupFragment& g, int n) {
    std::vector<int> gens;
    if (n >= 1)
        for (int i = 0; i < n; ++i)
            for (int x = 0; x < g.level(n - 1)->order; ++x) gens.push_back(g.s(n - 1, i, x));
    if (gens.empty()) gens.push_back(g.level(n)->identity);
    return subgroup_closure(*g.level(n), gens);
}

inline std::set<int> normal_closure(const FiniteGroup& g, std::set<int> elems) {
    elems.insert(g.identity);
    std::vector<int> gens(elems.begin(), elems.end());
    while (true) {
        auto closed = subgroup_closure(g, gens);
        bool grew = false;
        for (int x : closed)
            for (int a = 0; a < g.order; ++a)
                if (!closed.count(g.conj(a, x))) {
                    gens.push_back(g.conj(a, x));
                    grew = true;
                }
        if (!grew) return closed;
    }
}

}  // namespace detail

// C(G)_1 = NG_0 and C(G)_n = NG_{n-1}/((NG_{n-1} cap D_{n-1}) * d_0(NG_n cap D_n))
// for n >= 2, with boundary induced by d_0 and the NG_0-action by conjugation
// through iterated degeneracies.
inline CrossedRef crossed_complex_of(const SimplicialGroupFragment& g,
                                     const std::string& label = "") {
    auto m = moore_complex(g);
    if (g.cap == 0) return crossed_complex_from_group(g.level(0), label);
    std::vector<GroupRef> groups{g.level(0)};
    std::vector<GroupHom> boundaries;
    std::vector<GroupAction> actions;
    std::vector<Quotient> quots;  // quots[n-2] for level n
    for (int n = 2; n <= g.cap + 1; ++n) {
        const Subgroup& S = m.levels[n - 1];
        auto dn1 = detail::degenerate_subgroup(g, n - 1);
        std::set<int> numer;
        for (int e : S.elements)
            if (dn1.count(e)) numer.insert(S.index_of[e]);
        if (n <= g.cap) {
            auto dn = detail::degenerate_subgroup(g, n);
            for (int e : m.levels[n].elements)
                if (dn.count(e)) {
                    int img = S.index_of[g.d(n, 0, e)];
                    if (img < 0) throw StructuralError("d_0 leaves the Moore complex");
                    numer.insert(img);
                }
        }
        auto q = quotient_group(S.group, detail::normal_closure(*S.group, numer));
        quots.push_back(q);
        groups.push_back(q.group);

        GroupHom delta{q.group, groups[n - 2], {}};
        for (int r : q.rep) {
            int amb = S.elements[r];
            int img = g.d(n - 1, 0, amb);  // lands in NG_{n-2}
            if (n == 2)
                delta.map.push_back(img);
            else {
                int sidx = m.levels[n - 2].index_of[img];
                if (sidx < 0) throw StructuralError("induced boundary leaves the Moore complex");
                delta.map.push_back(quots[n - 3].coset_of[sidx]);
            }
        }
        boundaries.push_back(delta);

        GroupAction act{g.level(0), q.group, {}};
        for (int p = 0; p < g.level(0)->order; ++p) {
            int lift = p;
            for (int k = 0; k < n - 1; ++k) lift = g.s(k, 0, lift);
            for (int x = 0; x < q.group->order; ++x) {
                int amb = S.elements[q.rep[x]];
                int conj = g.level(n - 1)->mul(lift, g.level(n - 1)->mul(amb, g.level(n - 1)->inv(lift)));
                int sidx = S.index_of[conj];
                if (sidx < 0) throw StructuralError("degenerate conjugation leaves the Moore complex");
                act.act_table.push_back(q.coset_of[sidx]);
            }
        }
        actions.push_back(act);
    }
    while (groups.size() > 1 && groups.back()->order == 1) {
        groups.pop_back();
        boundaries.pop_back();
        actions.pop_back();
    }
    return make_crossed_complex(groups, boundaries, actions, label);
}

// ----- the classifying space W-bar -----

// Tuples are stored front-first: tup[j] lies in G_{n-1-j}.
inline long wbar_size(const SimplicialGroupFragment& g, int n) {
    long s = 1;
    for (int j = 0; j < n; ++j) s *= g.level(n - 1 - j)->order;
    return s;
}

inline std::vector<int> wbar_decode(const SimplicialGroupFragment& g, int n, long idx) {
    std::vector<int> tup(n);
    for (int j = n - 1; j >= 0; --j) {
        int ord = g.level(n - 1 - j)->order;
        tup[j] = (int)(idx % ord);
        idx /= ord;
    }
    return tup;
}

inline long wbar_encode(const SimplicialGroupFragment& g, int n, const std::vector<int>& tup) {
    long idx = 0;
    for (int j = 0; j < n; ++j) idx = idx * g.level(n - 1 - j)->order + tup[j];
    return idx;
}

inline std::vector<int> wbar_face(const SimplicialGroupFragment& g, int n,
                                  const std::vector<int>& tup, int i) {
    std::vector<int> out;
    if (i == 0) {
        out.assign(tup.begin() + 1, tup.end());
    } else if (i == n) {
        for (int j = 0; j <= n - 2; ++j) out.push_back(g.d(n - 1 - j, n - 1 - j, tup[j]));
    } else {
        for (int j = 0; j <= i - 2; ++j) out.push_back(g.d(n - 1 - j, i - 1 - j, tup[j]));
        out.push_back(g.level(n - 1 - i)->mul(g.d(n - i, 0, tup[i - 1]), tup[i]));
        for (int j = i + 1; j <= n - 1; ++j) out.push_back(tup[j]);
    }
    return out;
}

inline std::vector<int> wbar_degen(const SimplicialGroupFragment& g, int n,
                                   const std::vector<int>& tup, int i) {
    std::vector<int> out;
    for (int j = 0; j <= i - 1; ++j) out.push_back(g.s(n - 1 - j, i - 1 - j, tup[j]));
    out.push_back(g.level(n - i)->identity);
    for (int j = i; j <= n - 1; ++j) out.push_back(tup[j]);
    return out;
}

inline SimplicialSetFragment wbar(const SimplicialGroupFragment& g, int cap) {
    if (cap > g.cap + 1) throw StructuralError("W-bar cap exceeds the available group levels");
    SimplicialSetFragment x;
    x.cap = cap;
    x.names.resize(cap + 1);
    x.face.resize(cap + 1);
    x.degen.resize(cap + 1);
    x.nondeg.resize(cap + 1);
    for (int n = 0; n <= cap; ++n) {
        long sz = wbar_size(g, n);
        for (long s = 0; s < sz; ++s) {
            auto tup = wbar_decode(g, n, s);
            std::string name = "[";
            for (int j = 0; j < n; ++j) {
                if (j) name += "|";
                name += g.level(n - 1 - j)->names[tup[j]];
            }
            name += "]";
            x.names[n].push_back(name);
            x.nondeg[n].push_back(true);
        }
        if (n >= 1) {
            x.face[n].resize(sz);
            for (long s = 0; s < sz; ++s) {
                auto tup = wbar_decode(g, n, s);
                for (int i = 0; i <= n; ++i)
                    x.face[n][s].push_back((int)wbar_encode(g, n - 1, wbar_face(g, n, tup, i)));
            }
        }
    }
    for (int n = 0; n < cap; ++n) {
        long sz = wbar_size(g, n);
        x.degen[n].resize(sz);
        for (long s = 0; s < sz; ++s) {
            auto tup = wbar_decode(g, n, s);
            for (int i = 0; i <= n; ++i) {
                long t = wbar_encode(g, n + 1, wbar_degen(g, n, tup, i));
                x.degen[n][s].push_back((int)t);
                x.nondeg[n + 1][t] = false;
            }
        }
    }
    return x;
}

// ----- the explicit W-bar / nerve identification (dimensions <= 3) -----

// Levelwise: a 1-tuple (g0) labels the edge by g0^-1; a 2-tuple (g1,g0) with
// g1 = (p,c) has top label ^{g0^-1}(c^-1); a 3-tuple adds ^{g0^-1 p1^-1}(z).
inline NerveSimplex wbar_tuple_to_nerve(const CrossedRef& c, int n, const std::vector<int>& tup) {
    detail::GroupModelCodec m(c);
    NerveSimplex s{c, n, {}};
    auto inv1 = [&](int x) { return c->inv(1, x); };
    if (n >= 1) {
        if (n == 1) {
            s.labels[{0, 1}] = inv1(tup[0]);
        } else if (n == 2) {
            int g1 = tup[0], g0 = tup[1];
            auto [p, cc] = m.dec1(g1);
            s.labels[{0, 1}] = inv1(p);
            s.labels[{1, 2}] = inv1(g0);
            s.labels[{0, 2}] = inv1(c->mul(1, m.d0_1(g1), g0));
            s.labels[{0, 1, 2}] = c->act(2, inv1(g0), c->inv(2, cc));
        } else if (n == 3) {
            int g2 = tup[0], g1 = tup[1], g0 = tup[2];
            auto [p, b, a, z] = m.dec2(g2);
            auto [p1, c1] = m.dec1(g1);
            int d0g2g1 = m.mul1(m.d0_2(g2), g1);
            auto [pp, C] = m.dec1(d0g2g1);
            (void)pp;
            int lam13 = inv1(c->mul(1, m.d0_1(g1), g0));
            s.labels[{0, 1}] = inv1(p);
            s.labels[{1, 2}] = inv1(p1);
            s.labels[{2, 3}] = inv1(g0);
            s.labels[{1, 3}] = lam13;
            s.labels[{0, 2}] = inv1(c->mul(1, m.d0_1(m.d2_2(g2)), p1));
            s.labels[{0, 3}] = inv1(c->mul(1, m.d0_1(d0g2g1), g0));
            s.labels[{1, 2, 3}] = c->act(2, inv1(g0), c->inv(2, c1));
            s.labels[{0, 2, 3}] = c->act(2, inv1(g0), c->inv(2, C));
            s.labels[{0, 1, 3}] = c->act(2, lam13, c->inv(2, c->mul(2, b, a)));
            s.labels[{0, 1, 2}] = c->act(2, inv1(p1), c->inv(2, a));
            s.labels[{0, 1, 2, 3}] = c->act(3, c->mul(1, inv1(g0), inv1(p1)), z);
        } else {
            throw StructuralError("W-bar identification implemented up to dimension 3");
        }
    }
    return s;
}

inline std::vector<int> nerve_to_wbar_tuple(const NerveSimplex& s) {
    const auto& c = *s.complex;
    detail::GroupModelCodec m(s.complex);
    auto inv1 = [&](int x) { return c.inv(1, x); };
    int n = s.n;
    if (n == 0) return {};
    if (n == 1) return {inv1(s.label({0, 1}))};
    if (n == 2) {
        int lam12 = s.label({1, 2});
        int cc = c.inv(2, c.act(2, inv1(lam12), s.label({0, 1, 2})));
        return {m.enc1(inv1(s.label({0, 1})), cc), inv1(lam12)};
    }
    if (n == 3) {
        int lam12 = s.label({1, 2}), lam23 = s.label({2, 3}), lam13 = s.label({1, 3});
        int p1 = inv1(lam12);
        int c1 = c.inv(2, c.act(2, inv1(lam23), s.label({1, 2, 3})));
        int p = inv1(s.label({0, 1}));
        int a = c.inv(2, c.act(2, inv1(lam12), s.label({0, 1, 2})));
        int ba = c.inv(2, c.act(2, inv1(lam13), s.label({0, 1, 3})));
        int b = c.mul(2, ba, c.inv(2, a));
        int z = c.act(3, c.mul(1, p1, inv1(lam23)), s.label({0, 1, 2, 3}));
        return {m.enc2(p, b, a, z), m.enc1(p1, c1), inv1(lam23)};
    }
    throw StructuralError("W-bar identification implemented up to dimension 3");
}

// ----- twisting functions and twisted Cartesian products -----

struct TwistingFunction {
    CrossedRef complex;
    SimplicialSetFragment base;
    SimplicialGroupFragment group;
    std::vector<std::vector<int>> t;  // t[n][simplex] in G_{n-1}, 1 <= n <= base.cap
};

inline ValidationReport validate_twisting(const TwistingFunction& tw) {
    ValidationReport r;
    const auto& x = tw.base;
    const auto& g = tw.group;
    auto at = [&](int n, int b) { return tw.t[n][b]; };
    for (int n = 2; n <= x.cap; ++n)
        for (int b = 0; b < x.size(n); ++b) {
            int lhs = g.d(n - 1, 0, at(n, b));
            int rhs = g.level(n - 2)->mul(at(n - 1, x.face[n][b][1]),
                                          g.level(n - 2)->inv(at(n - 1, x.face[n][b][0])));
            if (lhs != rhs) r.fail("d_0 twisting identity fails at dim " + std::to_string(n));
            for (int i = 1; i <= n - 1; ++i)
                if (g.d(n - 1, i, at(n, b)) != at(n - 1, x.face[n][b][i + 1]))
                    r.fail("d_" + std::to_string(i) + " twisting identity fails at dim " +
                           std::to_string(n));
        }
    for (int n = 1; n < x.cap; ++n)
        for (int b = 0; b < x.size(n); ++b) {
            if (at(n + 1, x.degen[n][b][0]) != g.level(n)->identity)
                r.fail("t(s_0 b) != 1 at dim " + std::to_string(n));
            for (int i = 0; i <= n - 1; ++i)
                if (g.s(n - 1, i, at(n, b)) != at(n + 1, x.degen[n][b][i + 1]))
                    r.fail("s_" + std::to_string(i) + " twisting identity fails at dim " +
                           std::to_string(n));
        }
    return r;
}

// Read the twisting function off a formal map through the W-bar / nerve
// identification: t(b) is the front component of the tuple of the pulled
// back labeling.
inline TwistingFunction twisting_from_formal_map(const FormalMap& f) {
    TwistingFunction tw;
    tw.complex = f.complex;
    int cap = std::min(f.domain.dim() + 1, 3);
    tw.base = to_simplicial_set(f.domain, cap);
    tw.group = simplicial_group_from_crossed_complex(f.complex);
    auto seqs_for = [&](int n) { return monotone_sequences(f.domain, n); };
    tw.t.resize(cap + 1);
    for (int n = 1; n <= cap; ++n) {
        auto seqs = seqs_for(n);
        for (const auto& v : seqs) {
            NerveSimplex s{f.complex, n, {}};
            for (int size = 2; size <= n + 1; ++size)
                for (const auto& T : increasing_tuples(n, size)) {
                    Simplex img;
                    for (int pos : T)
                        if (img.empty() || v[pos] != img.back()) img.push_back(v[pos]);
                    if ((int)img.size() == size)
                        s.labels[T] = f.label(img);
                    else
                        s.labels[T] = f.complex->id(size - 1);
                }
            tw.t[n].push_back((int)nerve_to_wbar_tuple(s)[0]);
        }
    }
    return tw;
}

struct TwistedProduct {
    TwistingFunction twist;
    SimplicialSetFragment total;
    std::vector<std::vector<std::pair<int, int>>> cells;  // (base simplex, group element)
};

inline TwistedProduct twisted_product(const FormalMap& f) {
    TwistedProduct e;
    e.twist = twisting_from_formal_map(f);
    const auto& x = e.twist.base;
    const auto& g = e.twist.group;
    int cap = std::min(x.cap, g.cap);
    auto& tot = e.total;
    tot.cap = cap;
    tot.names.resize(cap + 1);
    tot.face.resize(cap + 1);
    tot.degen.resize(cap + 1);
    tot.nondeg.resize(cap + 1);
    e.cells.resize(cap + 1);
    auto enc = [&](int n, int b, int h) { return b * g.level(n)->order + h; };
    for (int n = 0; n <= cap; ++n) {
        for (int b = 0; b < x.size(n); ++b)
            for (int h = 0; h < g.level(n)->order; ++h) {
                e.cells[n].push_back({b, h});
                tot.names[n].push_back("(" + x.names[n][b] + "|" + g.level(n)->names[h] + ")");
                tot.nondeg[n].push_back(true);
            }
        if (n >= 1) {
            tot.face[n].resize(e.cells[n].size());
            for (int s = 0; s < (int)e.cells[n].size(); ++s) {
                auto [b, h] = e.cells[n][s];
                for (int i = 0; i <= n; ++i) {
                    int hb = g.d(n, i, h);
                    if (i == 0) hb = g.level(n - 1)->mul(e.twist.t[n][b], hb);
                    tot.face[n][s].push_back(enc(n - 1, x.face[n][b][i], hb));
                }
            }
        }
    }
    for (int n = 0; n < cap; ++n) {
        tot.degen[n].resize(e.cells[n].size());
        for (int s = 0; s < (int)e.cells[n].size(); ++s) {
            auto [b, h] = e.cells[n][s];
            for (int i = 0; i <= n; ++i) {
                int t = enc(n + 1, x.degen[n][b][i], g.s(n, i, h));
                tot.degen[n][s].push_back(t);
                tot.nondeg[n + 1][t] = false;
            }
        }
    }
    return e;
}

inline ValidationReport verify_principal(const TwistedProduct& e) {
    ValidationReport r;
    r.merge(validate_fragment_identities(e.total), "total space");
    r.merge(validate_twisting(e.twist), "twisting");
    const auto& g = e.twist.group;
    const auto& x = e.twist.base;
    for (int n = 0; n <= e.total.cap; ++n) {
        // fibres: the right action (b,h) . k = (b, hk) is free and transitive
        std::map<int, int> orbit_size;
        for (int s = 0; s < (int)e.cells[n].size(); ++s) ++orbit_size[e.cells[n][s].first];
        if ((int)orbit_size.size() != x.size(n))
            r.fail("orbit set does not match the base at dim " + std::to_string(n));
        for (auto& [b, sz] : orbit_size)
            if (sz != g.level(n)->order)
                r.fail("fibre is not a free orbit at dim " + std::to_string(n));
        // projection is simplicial
        if (n >= 1)
            for (int s = 0; s < (int)e.cells[n].size(); ++s)
                for (int i = 0; i <= n; ++i)
                    if (e.cells[n - 1][e.total.face[n][s][i]].first !=
                        x.face[n][e.cells[n][s].first][i])
                        r.fail("projection not simplicial at dim " + std::to_string(n));
    }
    return r;
}

// Connected components of the total space's 1-skeleton.
inline int total_space_components(const TwistedProduct& e) {
    int n0 = (int)e.cells[0].size();
    std::vector<int> parent(n0);
    for (int i = 0; i < n0; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (int s = 0; s < (int)e.cells[1].size(); ++s)
        parent[find(e.total.face[1][s][0])] = find(e.total.face[1][s][1]);
    std::set<int> roots;
    for (int i = 0; i < n0; ++i) roots.insert(find(i));
    return (int)roots.size();
}

}  // namespace fmc
