#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "fmc/validation.hpp"

namespace fmc {

// Multiplication-table group.  Elements are dense indices 0..order-1; the
// display names exist only for I/O.
struct FiniteGroup {
    int order = 0;
    std::vector<int> table;  // table[a * order + b] = a*b
    std::vector<std::string> names;
    int identity = -1;
    std::vector<int> inverse;
    std::string label;  // optional display label for the whole group

    int mul(int a, int b) const { return table[a * order + b]; }
    int inv(int a) const { return inverse[a]; }

    int mul(std::initializer_list<int> xs) const {
        int acc = identity;
        for (int x : xs) acc = mul(acc, x);
        return acc;
    }
    int conj(int p, int c) const { return mul(mul(p, c), inv(p)); }

    bool is_abelian() const {
        for (int a = 0; a < order; ++a)
            for (int b = 0; b < order; ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }
};

using GroupRef = std::shared_ptr<const FiniteGroup>;

inline std::string default_element_name(int i) { return "e" + std::to_string(i); }

// Builds a group from a raw table, locating identity and inverses.
// Throws StructuralError if the table is not even a group skeleton;
// deeper axiom checking lives in validate_group.
inline GroupRef make_group(std::vector<int> table, std::vector<std::string> names = {},
                           std::string label = "") {
    auto g = std::make_shared<FiniteGroup>();
    int n = 0;
    while (n * n < (int)table.size()) ++n;
    if (n * n != (int)table.size()) throw StructuralError("group table is not square");
    g->order = n;
    g->table = std::move(table);
    g->label = std::move(label);
    if (n == 0) throw StructuralError("empty group table");
    for (int v : g->table)
        if (v < 0 || v >= n) throw StructuralError("group table entry out of range");
    if (names.empty()) {
        for (int i = 0; i < n; ++i) g->names.push_back(default_element_name(i));
    } else {
        if ((int)names.size() != n) throw StructuralError("group name count mismatch");
        g->names = std::move(names);
    }
    for (int e = 0; e < n; ++e) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = g->mul(e, a) == a && g->mul(a, e) == a;
        if (ok) {
            g->identity = e;
            break;
        }
    }
    if (g->identity < 0) throw StructuralError("group table has no two-sided identity");
    g->inverse.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (g->mul(a, b) == g->identity && g->mul(b, a) == g->identity) g->inverse[a] = b;
    for (int a = 0; a < n; ++a)
        if (g->inverse[a] < 0) throw StructuralError("no inverse for element " + g->names[a]);
    return g;
}

template <typename Mul>
GroupRef make_group_fn(int order, Mul&& mul, std::vector<std::string> names = {},
                       std::string label = "") {
    std::vector<int> table(order * order);
    for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) table[a * order + b] = mul(a, b);
    return make_group(std::move(table), std::move(names), std::move(label));
}

inline ValidationReport validate_group(const FiniteGroup& g) {
    ValidationReport r;
    int n = g.order;
    if ((int)g.table.size() != n * n) {
        throw StructuralError("group table arity mismatch");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
                    r.fail("associativity fails at (" + g.names[a] + "," + g.names[b] + "," +
                           g.names[c] + ")");
                    goto assoc_done;
                }
assoc_done:
    for (int a = 0; a < n; ++a)
        if (g.mul(g.identity, a) != a || g.mul(a, g.identity) != a)
            r.fail("identity fails at " + g.names[a]);
    for (int a = 0; a < n; ++a)
        if (g.mul(g.inv(a), a) != g.identity) r.fail("no inverse for " + g.names[a]);
    return r;
}

inline GroupRef trivial_group() {
    static GroupRef t = make_group({0}, {"1"}, "1");
    return t;
}

inline GroupRef cyclic_group(int n, std::string label = "") {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(i == 0 ? "1" : "g" + std::to_string(i));
    return make_group_fn(
        n, [n](int a, int b) { return (a + b) % n; }, names,
        label.empty() ? "Z" + std::to_string(n) : label);
}

// Symmetric group on m letters; elements are permutations in lexicographic
// order of their one-line notation, composed left-to-right as functions
// acting on the left: (p*q)(x) = p(q(x)).
inline GroupRef symmetric_group(int m, std::string label = "") {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 0);
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::map<std::vector<int>, int> idx;
    for (int i = 0; i < (int)perms.size(); ++i) idx[perms[i]] = i;
    std::vector<std::string> names;
    for (auto& q : perms) {
        std::string s;
        for (int v : q) s += std::to_string(v);
        names.push_back("[" + s + "]");
    }
    return make_group_fn(
        (int)perms.size(),
        [&](int a, int b) {
            std::vector<int> c(m);
            for (int x = 0; x < m; ++x) c[x] = perms[a][perms[b][x]];
            return idx.at(c);
        },
        names, label.empty() ? "S" + std::to_string(m) : label);
}

inline GroupRef direct_product(const GroupRef& g, const GroupRef& h) {
    int n = g->order, m = h->order;
    std::vector<std::string> names;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < m; ++b) names.push_back("(" + g->names[a] + "," + h->names[b] + ")");
    return make_group_fn(
        n * m,
        [&](int x, int y) {
            int ax = x / m, bx = x % m, ay = y / m, by = y % m;
            return g->mul(ax, ay) * m + h->mul(bx, by);
        },
        names, g->label + "x" + h->label);
}

struct GroupHom {
    GroupRef source, target;
    std::vector<int> map;  // indexed by source element

    int operator()(int x) const { return map[x]; }
};

inline GroupHom identity_hom(const GroupRef& g) {
    GroupHom h{g, g, std::vector<int>(g->order)};
    std::iota(h.map.begin(), h.map.end(), 0);
    return h;
}

inline GroupHom trivial_hom(const GroupRef& src, const GroupRef& dst) {
    return GroupHom{src, dst, std::vector<int>(src->order, dst->identity)};
}

inline GroupHom compose(const GroupHom& g, const GroupHom& f) {
    // g after f
    GroupHom h{f.source, g.target, {}};
    h.map.reserve(f.source->order);
    for (int x = 0; x < f.source->order; ++x) h.map.push_back(g.map[f.map[x]]);
    return h;
}

inline ValidationReport validate_hom(const GroupHom& h) {
    ValidationReport r;
    if ((int)h.map.size() != h.source->order) throw StructuralError("hom table size mismatch");
    for (int v : h.map)
        if (v < 0 || v >= h.target->order) throw StructuralError("hom image out of range");
    if (h.map[h.source->identity] != h.target->identity) r.fail("hom does not preserve identity");
    for (int a = 0; a < h.source->order; ++a)
        for (int b = 0; b < h.source->order; ++b)
            if (h.map[h.source->mul(a, b)] != h.target->mul(h.map[a], h.map[b])) {
                r.fail("hom not multiplicative at (" + h.source->names[a] + "," +
                       h.source->names[b] + ")");
                return r;
            }
    return r;
}

struct GroupAction {
    GroupRef actor, carrier;
    std::vector<int> act_table;  // act_table[p * |carrier| + c]

    int operator()(int p, int c) const { return act_table[p * carrier->order + c]; }
};

inline GroupAction trivial_action(const GroupRef& actor, const GroupRef& carrier) {
    GroupAction a{actor, carrier, {}};
    a.act_table.reserve(actor->order * carrier->order);
    for (int p = 0; p < actor->order; ++p)
        for (int c = 0; c < carrier->order; ++c) a.act_table.push_back(c);
    return a;
}

inline GroupAction conjugation_action(const GroupRef& g) {
    GroupAction a{g, g, {}};
    a.act_table.reserve(g->order * g->order);
    for (int p = 0; p < g->order; ++p)
        for (int c = 0; c < g->order; ++c) a.act_table.push_back(g->conj(p, c));
    return a;
}

template <typename Fn>
GroupAction make_action_fn(const GroupRef& actor, const GroupRef& carrier, Fn&& fn) {
    GroupAction a{actor, carrier, {}};
    a.act_table.reserve(actor->order * carrier->order);
    for (int p = 0; p < actor->order; ++p)
        for (int c = 0; c < carrier->order; ++c) a.act_table.push_back(fn(p, c));
    return a;
}

inline ValidationReport validate_action(const GroupAction& a) {
    ValidationReport r;
    const auto& P = *a.actor;
    const auto& C = *a.carrier;
    if ((int)a.act_table.size() != P.order * C.order)
        throw StructuralError("action table size mismatch");
    for (int v : a.act_table)
        if (v < 0 || v >= C.order) throw StructuralError("action value out of range");
    for (int c = 0; c < C.order; ++c)
        if (a(P.identity, c) != c) {
            r.fail("action of identity moves " + C.names[c]);
            break;
        }
    for (int p = 0; p < P.order; ++p)
        for (int q = 0; q < P.order; ++q)
            for (int c = 0; c < C.order; ++c)
                if (a(P.mul(p, q), c) != a(p, a(q, c))) {
                    r.fail("action not compatible with multiplication at (" + P.names[p] + "," +
                           P.names[q] + "," + C.names[c] + ")");
                    goto mixed_done;
                }
mixed_done:
    for (int p = 0; p < P.order; ++p)
        for (int c = 0; c < C.order; ++c)
            for (int d = 0; d < C.order; ++d)
                if (a(p, C.mul(c, d)) != C.mul(a(p, c), a(p, d))) {
                    r.fail("action of " + P.names[p] + " is not an automorphism");
                    goto auto_done;
                }
auto_done:
    return r;
}

inline int enumeration_budget() {
    if (const char* env = std::getenv("FMC_ENUM_BUDGET")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 16;
}

// Greedy generating set: repeatedly adjoin the first element outside the
// current closure.
inline std::vector<int> generating_set(const FiniteGroup& g) {
    std::vector<int> gens;
    std::set<int> closure{g.identity};
    while ((int)closure.size() < g.order) {
        int pick = -1;
        for (int x = 0; x < g.order; ++x)
            if (!closure.count(x)) {
                pick = x;
                break;
            }
        gens.push_back(pick);
        // close up
        std::vector<int> frontier(closure.begin(), closure.end());
        closure.insert(pick);
        frontier.push_back(pick);
        while (!frontier.empty()) {
            int x = frontier.back();
            frontier.pop_back();
            for (int y : std::set<int>(closure)) {
                for (int z : {g.mul(x, y), g.mul(y, x)}) {
                    if (closure.insert(z).second) frontier.push_back(z);
                }
            }
        }
    }
    return gens;
}

inline std::set<int> subgroup_closure(const FiniteGroup& g, const std::vector<int>& gens) {
    std::set<int> closure{g.identity};
    std::vector<int> frontier{g.identity};
    for (int x : gens)
        if (closure.insert(x).second) frontier.push_back(x);
    while (!frontier.empty()) {
        int x = frontier.back();
        frontier.pop_back();
        std::vector<int> current(closure.begin(), closure.end());
        for (int y : current) {
            for (int z : {g.mul(x, y), g.mul(y, x), g.inv(x)}) {
                if (closure.insert(z).second) frontier.push_back(z);
            }
        }
    }
    return closure;
}

// Exhaustive, deterministic enumeration of homs; drives every oracle.
inline std::vector<GroupHom> enumerate_homs(const GroupRef& g, const GroupRef& h,
                                            int budget = enumeration_budget()) {
    if (g->order > budget)
        throw BudgetError("enumerate_homs: source order " + std::to_string(g->order) +
                          " exceeds budget " + std::to_string(budget));
    std::vector<GroupHom> out;
    std::vector<int> map(g->order, -1);
    map[g->identity] = h->identity;
    // DFS over element indices in order, maintaining partial multiplicativity.
    auto consistent = [&](int upto) {
        for (int a = 0; a <= upto; ++a) {
            if (map[a] < 0) continue;
            for (int b = 0; b <= upto; ++b) {
                if (map[b] < 0) continue;
                int ab = g->mul(a, b);
                if (map[ab] >= 0 && map[ab] != h->mul(map[a], map[b])) return false;
            }
        }
        return true;
    };
    std::vector<int> order;
    for (int i = 0; i < g->order; ++i)
        if (i != g->identity) order.push_back(i);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == (int)order.size()) {
            GroupHom cand{g, h, map};
            if (validate_hom(cand).ok()) out.push_back(std::move(cand));
            return;
        }
        int x = order[pos];
        if (map[x] >= 0) {
            rec(pos + 1);
            return;
        }
        for (int img = 0; img < h->order; ++img) {
            map[x] = img;
            if (consistent(g->order - 1)) rec(pos + 1);
            map[x] = -1;
        }
    };
    rec(0);
    return out;
}

// A subgroup presented as its own FiniteGroup plus the inclusion hom.
struct Subgroup {
    GroupRef group;
    GroupHom embed;             // subgroup -> ambient
    std::vector<int> elements;  // ambient indices, sorted
    std::vector<int> index_of;  // ambient index -> subgroup index or -1
};

inline Subgroup make_subgroup(const GroupRef& ambient, const std::set<int>& elems) {
    Subgroup s;
    s.elements.assign(elems.begin(), elems.end());
    s.index_of.assign(ambient->order, -1);
    for (int i = 0; i < (int)s.elements.size(); ++i) s.index_of[s.elements[i]] = i;
    std::vector<std::string> names;
    for (int e : s.elements) names.push_back(ambient->names[e]);
    s.group = make_group_fn(
        (int)s.elements.size(),
        [&](int a, int b) {
            int prod = ambient->mul(s.elements[a], s.elements[b]);
            int idx = s.index_of[prod];
            if (idx < 0) throw StructuralError("subset not closed under multiplication");
            return idx;
        },
        names, ambient->label + "-sub");
    s.embed = GroupHom{s.group, ambient, s.elements};
    return s;
}

inline std::set<int> image_elements(const GroupHom& h) {
    return std::set<int>(h.map.begin(), h.map.end());
}

inline std::set<int> kernel_elements(const GroupHom& h) {
    std::set<int> k;
    for (int x = 0; x < h.source->order; ++x)
        if (h.map[x] == h.target->identity) k.insert(x);
    return k;
}

inline bool is_surjective(const GroupHom& h) {
    return (int)image_elements(h).size() == h.target->order;
}

// Quotient of ambient by a normal subgroup given as an element set.
// Cosets are ordered by their least ambient element; rep[] holds that
// least element, which is the canonical coset representative everywhere.
struct Quotient {
    GroupRef group;
    GroupHom projection;       // ambient -> quotient
    std::vector<int> rep;      // quotient index -> ambient representative
    std::vector<int> coset_of; // ambient index -> quotient index
};

inline Quotient quotient_group(const GroupRef& ambient, const std::set<int>& normal) {
    for (int n : normal)
        for (int a = 0; a < ambient->order; ++a)
            if (!normal.count(ambient->conj(a, n)))
                throw StructuralError("quotient by non-normal subgroup");
    Quotient q;
    q.coset_of.assign(ambient->order, -1);
    for (int a = 0; a < ambient->order; ++a) {
        if (q.coset_of[a] >= 0) continue;
        int idx = (int)q.rep.size();
        q.rep.push_back(a);
        for (int n : normal) q.coset_of[ambient->mul(a, n)] = idx;
        if (q.coset_of[a] != idx) throw StructuralError("broken coset structure");
    }
    std::vector<std::string> names;
    for (int r : q.rep) names.push_back("[" + ambient->names[r] + "]");
    q.group = make_group_fn(
        (int)q.rep.size(),
        [&](int a, int b) { return q.coset_of[ambient->mul(q.rep[a], q.rep[b])]; }, names,
        ambient->label + "-quot");
    q.projection = GroupHom{ambient, q.group, q.coset_of};
    return q;
}

}  // namespace fmc
