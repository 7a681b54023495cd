#pragma once

#include <optional>

#include "fmc/nerve.hpp"

namespace fmc {

// Labeling of every simplex of dimension >= 1 of an ordered complex by an
// element of the matching level of the coefficient complex, subject to the
// nerve coherence relations simplex by simplex.
struct FormalMap {
    OrderedComplex domain;
    CrossedRef complex;
    std::map<Simplex, int> labels;  // keyed by rank-sorted simplices

    int label(const Simplex& s) const {
        auto it = labels.find(s);
        if (it == labels.end())
            throw StructuralError("missing label on simplex " + seq_name(domain, s));
        return it->second;
    }
};

inline FormalMap identity_formal_map(const OrderedComplex& k, const CrossedRef& c) {
    FormalMap f{k, c, {}};
    for (const auto& s : k.simplices)
        if (s.size() >= 2) f.labels[s] = c->id((int)s.size() - 1);
    return f;
}

inline ValidationReport validate_formal_map(const FormalMap& f) {
    ValidationReport r;
    for (const auto& [s, v] : f.labels) {
        if (!f.domain.simplices.count(s)) {
            r.fail("label on a non-simplex " + seq_name(f.domain, s));
            continue;
        }
        auto g = f.complex->group((int)s.size() - 1);
        if (v < 0 || v >= g->order) r.fail("label out of range on " + seq_name(f.domain, s));
    }
    for (const auto& s : f.domain.simplices) {
        if (s.size() < 2) continue;
        (void)f.label(s);  // throws naming the simplex if absent
        if (s.size() >= 3) {
            auto [lhs, rhs] =
                coherence_sides(*f.complex, s, [&](const Simplex& t) { return f.label(t); });
            if (lhs != rhs) r.fail("coherence fails on " + seq_name(f.domain, s));
        }
    }
    return r;
}

// ----- deterministic extension engine -----

// Complete a partial labeling of `k` to a full valid one.  Unknown simplices
// are filled in (dimension, lexicographic) order, trying the identity label
// first; the first solution in this order is returned, so the result is
// deterministic.  Every coherence relation is checked as soon as all of its
// participants carry labels.  Returns nullopt when the search space is
// exhausted; throws BudgetError when `budget` assignments are exceeded.
inline std::vector<std::map<Simplex, int>> extension_search(const OrderedComplex& k,
                                                            const CrossedRef& c,
                                                            const std::map<Simplex, int>& fixed,
                                                            long budget, bool collect_all) {
    for (const auto& [s, v] : fixed) {
        if (!k.simplices.count(s))
            throw StructuralError("fixed label on a non-simplex " + seq_name(k, s));
        if (v < 0 || v >= c->group((int)s.size() - 1)->order)
            throw StructuralError("fixed label out of range on " + seq_name(k, s));
    }

    // relation i is attached to the i-th simplex of dimension >= 2; it
    // involves the simplex, its facets, and (dim >= 3) its last edge
    std::vector<Simplex> rel_simplex;
    std::map<Simplex, std::vector<int>> touching;
    std::vector<std::vector<Simplex>> involved;
    for (const auto& s : k.simplices) {
        if (s.size() < 3) continue;
        int ri = (int)rel_simplex.size();
        rel_simplex.push_back(s);
        std::vector<Simplex> parts{s};
        for (size_t i = 0; i < s.size(); ++i) {
            Simplex f = s;
            f.erase(f.begin() + i);
            parts.push_back(f);
        }
        if (s.size() >= 4) parts.push_back({s[s.size() - 2], s[s.size() - 1]});
        involved.push_back(parts);
        for (const auto& p : parts) touching[p].push_back(ri);
    }

    std::map<Simplex, int> cur = fixed;
    auto relation_holds = [&](int ri) {
        for (const auto& p : involved[ri])
            if (!cur.count(p)) return true;  // not yet determined
        auto [lhs, rhs] =
            coherence_sides(*c, rel_simplex[ri], [&](const Simplex& t) { return cur.at(t); });
        return lhs == rhs;
    };
    for (int ri = 0; ri < (int)rel_simplex.size(); ++ri)
        if (!relation_holds(ri)) return {};

    std::vector<Simplex> unknown;
    for (const auto& s : k.simplices)
        if (s.size() >= 2 && !fixed.count(s)) unknown.push_back(s);
    std::sort(unknown.begin(), unknown.end(), [](const Simplex& a, const Simplex& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });

    std::vector<std::map<Simplex, int>> out;
    long nodes = 0;
    bool done = false;
    std::function<void(int)> rec = [&](int pos) {
        if (done) return;
        if (pos == (int)unknown.size()) {
            out.push_back(cur);
            if (!collect_all) done = true;
            return;
        }
        const Simplex& t = unknown[pos];
        int dim = (int)t.size() - 1;
        int order = c->group(dim)->order;
        int id = c->id(dim);
        for (int step = 0; step < order && !done; ++step) {
            int v = step == 0 ? id : (step <= id ? step - 1 : step);
            if (++nodes > budget) throw BudgetError("label extension budget exceeded");
            cur[t] = v;
            bool ok = true;
            auto it = touching.find(t);
            if (it != touching.end())
                for (int ri : it->second)
                    if (!relation_holds(ri)) {
                        ok = false;
                        break;
                    }
            if (ok) rec(pos + 1);
        }
        cur.erase(t);
    };
    rec(0);
    return out;
}

inline std::optional<std::map<Simplex, int>> extend_labels(const OrderedComplex& k,
                                                           const CrossedRef& c,
                                                           const std::map<Simplex, int>& fixed,
                                                           long budget = 1000000) {
    auto sols = extension_search(k, c, fixed, budget, false);
    if (sols.empty()) return std::nullopt;
    return sols.front();
}

inline std::vector<FormalMap> enumerate_formal_maps(const OrderedComplex& k, const CrossedRef& c,
                                                    long budget = 1000000) {
    std::vector<FormalMap> out;
    for (auto& sol : extension_search(k, c, {}, budget, true))
        out.push_back(FormalMap{k, c, std::move(sol)});
    return out;
}

// ----- sums and components -----

inline FormalMap sum(const FormalMap& f1, const FormalMap& f2) {
    if (f1.complex != f2.complex)
        throw StructuralError("sum requires the same coefficient complex");
    FormalMap out{disjoint_union(f1.domain, f2.domain), f1.complex, f1.labels};
    int n1 = f1.domain.vertex_count();
    for (const auto& [s, v] : f2.labels) {
        Simplex key = s;
        for (int& x : key) x += n1;
        out.labels[key] = v;
    }
    return out;
}

inline std::vector<FormalMap> decompose_connected(const FormalMap& f) {
    std::vector<FormalMap> out;
    for (auto& comp : connected_components(f.domain)) {
        FormalMap g{comp.complex, f.complex, {}};
        for (const auto& s : comp.complex.simplices) {
            if (s.size() < 2) continue;
            Simplex orig;
            for (int v : s) orig.push_back(comp.vertex_map[v]);
            g.labels[s] = f.label(orig);
        }
        out.push_back(std::move(g));
    }
    return out;
}

// ----- cobordisms and equivalence witnesses -----

// A labeled triangulated cobordism: a formal map on the total complex with
// embedded incoming and outgoing boundary maps.  An equivalence witness is
// the special case of a labeled cylinder.
struct FormalCobordism {
    FormalMap map;  // on the total complex
    FormalMap incoming, outgoing;
    std::vector<int> in_map, out_map;  // boundary vertex -> total vertex
    std::vector<std::pair<int, int>> basepoint_verticals;
};

using EquivalenceWitness = FormalCobordism;

inline void check_end_restriction(ValidationReport& r, const std::string& which,
                                  const FormalMap& total, const std::vector<int>& emb,
                                  const FormalMap& end) {
    if ((int)emb.size() != end.domain.vertex_count()) {
        r.fail(which + " embedding has the wrong vertex count");
        return;
    }
    for (const auto& s : end.domain.simplices) {
        if (s.size() < 2) continue;
        Simplex img;
        for (int v : s) img.push_back(emb[v]);
        if (total.domain.sorted(img) != img) {
            r.fail(which + " embedding does not preserve order on " + seq_name(end.domain, s));
            continue;
        }
        if (!total.domain.simplices.count(img)) {
            r.fail(which + " embedding misses simplex " + seq_name(end.domain, s));
            continue;
        }
        if (total.label(img) != end.label(s))
            r.fail(which + " restriction disagrees on " + seq_name(end.domain, s));
    }
}

inline ValidationReport check_equivalence_witness(const EquivalenceWitness& w,
                                                  const FormalMap& f0, const FormalMap& f1) {
    ValidationReport r;
    if (w.map.complex != f0.complex || w.map.complex != f1.complex)
        r.fail("coefficient complex mismatch");
    try {
        r.merge(validate_formal_map(w.map), "cylinder");
    } catch (const StructuralError& e) {
        r.fail(std::string("cylinder: ") + e.what());
        return r;
    }
    check_end_restriction(r, "incoming", w.map, w.in_map, f0);
    check_end_restriction(r, "outgoing", w.map, w.out_map, f1);
    for (auto [a, b] : w.basepoint_verticals) {
        Simplex e = w.map.domain.sorted({a, b});
        auto it = w.map.labels.find(e);
        if (it == w.map.labels.end())
            r.fail("basepoint vertical missing from the cylinder");
        else if (it->second != w.map.complex->id(1))
            r.fail("basepoint vertical not identity-labeled");
    }
    return r;
}

// ----- transport -----

namespace detail {

// Extend over a prism from seeded labels and package the two ends.
inline std::pair<FormalMap, EquivalenceWitness> prism_transport(
    const PrismResult& p, const CrossedRef& c, std::map<Simplex, int> seed,
    const FormalMap& given, const OrderedComplex& other_end, bool given_is_bottom,
    long budget) {
    const OrderedComplex& cyl = p.complex;
    auto sol = extend_labels(cyl, c, seed, budget);
    if (!sol) throw StructuralError("transport extension failed");
    FormalMap cylmap{cyl, c, *sol};
    const std::vector<int>& emb = given_is_bottom ? p.top_map : p.bottom_map;
    FormalMap result{other_end, c, {}};
    for (const auto& s : other_end.simplices) {
        if (s.size() < 2) continue;
        Simplex img;
        for (int v : s) img.push_back(emb[v]);
        result.labels[s] = cylmap.label(img);
    }
    EquivalenceWitness w;
    w.map = cylmap;
    w.incoming = given_is_bottom ? given : result;
    w.outgoing = given_is_bottom ? result : given;
    w.in_map = p.bottom_map;
    w.out_map = p.top_map;
    w.basepoint_verticals = p.basepoint_verticals;
    return {result, w};
}

inline void seed_bottom(std::map<Simplex, int>& seed, const FormalMap& f) {
    for (const auto& [s, v] : f.labels) seed[s] = v;
}

inline void seed_top(std::map<Simplex, int>& seed, const FormalMap& f, int nb) {
    for (const auto& [s, v] : f.labels) {
        Simplex key = s;
        for (int& x : key) x += nb;
        seed[key] = v;
    }
}

inline void seed_verticals(std::map<Simplex, int>& seed, const PrismResult& p,
                           const CarrierMap& carrier, const CrossedRef& c) {
    for (int v = 0; v < (int)p.top_map.size(); ++v) {
        if (carrier[v].size() != 1) continue;
        Simplex e = p.complex.sorted({carrier[v][0], p.top_map[v]});
        if (p.complex.simplices.count(e)) seed[e] = c->id(1);
    }
}

}  // namespace detail

// Relabel `f` along a change of vertex order; returns the transported map on
// the reordered domain together with the cylinder witness.
inline std::pair<FormalMap, EquivalenceWitness> transport_reorder(const FormalMap& f,
                                                                  const std::vector<int>& new_ranks,
                                                                  long budget = 1000000) {
    if ((int)new_ranks.size() != f.domain.vertex_count())
        throw StructuralError("new order has the wrong vertex count");
    for (const auto& s : f.domain.simplices) {
        std::set<int> rs;
        for (int v : s) rs.insert(new_ranks[v]);
        if ((int)rs.size() != (int)s.size())
            throw StructuralError("new order is not total on simplex " + seq_name(f.domain, s));
    }
    OrderedComplex k1;
    k1.vertex_names = f.domain.vertex_names;
    k1.rank = new_ranks;
    k1.basepoints = f.domain.basepoints;
    k1.orientation = f.domain.orientation;
    for (const auto& s : f.domain.simplices) k1.simplices.insert(k1.sorted(s));

    auto carrier = identity_carrier(f.domain);
    auto p = prism(f.domain, k1, carrier);
    std::map<Simplex, int> seed;
    detail::seed_bottom(seed, f);
    detail::seed_verticals(seed, p, carrier, f.complex);
    return detail::prism_transport(p, f.complex, std::move(seed), f, k1, true, budget);
}

// Transport a map onto a subdivision of its domain (forward direction).
inline std::pair<FormalMap, EquivalenceWitness> transport_subdivide(const FormalMap& f,
                                                                    const SubdivisionResult& sub,
                                                                    long budget = 1000000) {
    auto p = prism(f.domain, sub.complex, sub.carrier);
    std::map<Simplex, int> seed;
    detail::seed_bottom(seed, f);
    detail::seed_verticals(seed, p, sub.carrier, f.complex);
    return detail::prism_transport(p, f.complex, std::move(seed), f, sub.complex, true, budget);
}

// Transport a map on a subdivision back onto the coarse domain (reverse
// direction); `fine` must live on sub.complex.
inline std::pair<FormalMap, EquivalenceWitness> transport_coarsen(const FormalMap& fine,
                                                                  const SubdivisionResult& sub,
                                                                  const OrderedComplex& base,
                                                                  long budget = 1000000) {
    if (fine.domain.simplices != sub.complex.simplices)
        throw StructuralError("map does not live on the given subdivision");
    auto p = prism(base, sub.complex, sub.carrier);
    std::map<Simplex, int> seed;
    detail::seed_top(seed, fine, base.vertex_count());
    detail::seed_verticals(seed, p, sub.carrier, fine.complex);
    return detail::prism_transport(p, fine.complex, std::move(seed), fine, base, false, budget);
}

// Search for a homotopy over the standard prism domain x I.  nullopt means
// the (finite) search space over this cylinder is exhausted; larger
// cylinders are out of scope, so absence here is not full non-equivalence.
inline std::optional<EquivalenceWitness> search_simplicial_homotopy(const FormalMap& f0,
                                                                    const FormalMap& f1,
                                                                    long budget = 1000000) {
    if (f0.complex != f1.complex)
        throw StructuralError("homotopy search requires the same coefficient complex");
    if (f0.domain.simplices != f1.domain.simplices || f0.domain.rank != f1.domain.rank)
        throw StructuralError("homotopy search requires the same domain");
    auto carrier = identity_carrier(f0.domain);
    auto p = prism(f0.domain, f0.domain, carrier);
    std::map<Simplex, int> seed;
    detail::seed_bottom(seed, f0);
    detail::seed_top(seed, f1, f0.domain.vertex_count());
    for (auto [a, b] : p.basepoint_verticals) seed[p.complex.sorted({a, b})] = f0.complex->id(1);
    auto sol = extend_labels(p.complex, f0.complex, seed, budget);
    if (!sol) return std::nullopt;
    EquivalenceWitness w;
    w.map = FormalMap{p.complex, f0.complex, *sol};
    w.incoming = f0;
    w.outgoing = f1;
    w.in_map = p.bottom_map;
    w.out_map = p.top_map;
    w.basepoint_verticals = p.basepoint_verticals;
    return w;
}

// Flip a witness's interval orientation: the outgoing end becomes the bottom
// layer.  Realized by transporting the cylinder map along the rank change
// that swaps the layers while keeping each layer's internal order.
inline EquivalenceWitness reverse_witness(const EquivalenceWitness& w, long budget = 1000000) {
    const OrderedComplex& cyl = w.map.domain;
    int big = 0;
    for (int r : cyl.rank) big = std::max(big, r + 1);
    std::vector<bool> is_out(cyl.vertex_count(), false);
    for (int v : w.out_map) is_out[v] = true;
    std::vector<int> flipped(cyl.rank);
    for (int v = 0; v < cyl.vertex_count(); ++v)
        if (!is_out[v]) flipped[v] += 2 * big;
    auto [m, inner] = transport_reorder(w.map, flipped, budget);
    (void)inner;
    EquivalenceWitness out;
    out.map = m;
    out.incoming = w.outgoing;
    out.outgoing = w.incoming;
    out.in_map = w.out_map;
    out.out_map = w.in_map;
    out.basepoint_verticals = w.basepoint_verticals;
    return out;
}

// ----- gluing -----

// Glue two labeled cobordisms along an order-preserving isomorphism from the
// outgoing boundary of `L` onto the incoming boundary of `G`.
inline FormalCobordism glue(const FormalCobordism& L, const FormalCobordism& G,
                            const std::vector<int>& iso) {
    if (L.map.complex != G.map.complex)
        throw StructuralError("glue requires the same coefficient complex");
    const OrderedComplex& bd = L.outgoing.domain;
    if ((int)iso.size() != bd.vertex_count() ||
        bd.vertex_count() != G.incoming.domain.vertex_count())
        throw StructuralError("gluing isomorphism has the wrong vertex count");
    for (const auto& s : bd.simplices) {
        Simplex img;
        for (int v : s) img.push_back(iso[v]);
        img = G.incoming.domain.sorted(img);
        if (!G.incoming.domain.simplices.count(img))
            throw StructuralError("gluing isomorphism is not simplicial");
        if (s.size() >= 2 && L.outgoing.label(s) != G.incoming.label(img))
            throw StructuralError("label mismatch on the gluing interface at " +
                                  seq_name(bd, s));
    }

    // G vertices on the interface become the matching L vertices; the rest
    // are appended above every L vertex
    int shift = 0;
    for (int r : L.map.domain.rank) shift = std::max(shift, r + 1);
    std::vector<int> gmap(G.map.domain.vertex_count(), -1);
    std::vector<int> iso_inv(iso.size());
    for (int v = 0; v < (int)iso.size(); ++v) iso_inv[iso[v]] = v;
    for (int u = 0; u < (int)G.in_map.size(); ++u)
        gmap[G.in_map[u]] = L.out_map[iso_inv[u]];

    OrderedComplex total = L.map.domain;
    for (int v = 0; v < G.map.domain.vertex_count(); ++v) {
        if (gmap[v] >= 0) continue;
        gmap[v] = total.vertex_count();
        std::string name = G.map.domain.vertex_names[v];
        while (std::find(total.vertex_names.begin(), total.vertex_names.end(), name) !=
               total.vertex_names.end())
            name += "'";
        total.vertex_names.push_back(name);
        total.rank.push_back(shift + G.map.domain.rank[v]);
    }
    FormalCobordism out;
    for (const auto& s : G.map.domain.simplices) {
        Simplex img;
        for (int v : s) img.push_back(gmap[v]);
        if (total.sorted(img) != img)
            throw StructuralError("gluing would reorder simplex " + seq_name(G.map.domain, s) +
                                  "; transport along a reorder first");
        total.simplices.insert(img);
    }
    out.map = FormalMap{total, L.map.complex, L.map.labels};
    for (const auto& [s, v] : G.map.labels) {
        Simplex img;
        for (int x : s) img.push_back(gmap[x]);
        auto it = out.map.labels.find(img);
        if (it != out.map.labels.end() && it->second != v)
            throw StructuralError("label mismatch on the gluing interface at " +
                                  seq_name(G.map.domain, s));
        out.map.labels[img] = v;
    }
    out.map.domain.basepoints = L.map.domain.basepoints;
    out.incoming = L.incoming;
    out.in_map = L.in_map;
    out.outgoing = G.outgoing;
    out.out_map.clear();
    for (int v : G.out_map) out.out_map.push_back(gmap[v]);
    out.basepoint_verticals = L.basepoint_verticals;
    for (auto [a, b] : G.basepoint_verticals)
        out.basepoint_verticals.push_back({gmap[a], gmap[b]});
    return out;
}

// ----- truncation -----

inline FormalMap truncate_map(const FormalMap& f, int level) {
    if (f.domain.dim() > level)
        throw StructuralError("domain dimension exceeds the truncation level");
    auto tr = truncate(f.complex, level);
    FormalMap out{f.domain, tr.complex, f.labels};
    for (auto& [s, v] : out.labels) {
        int k = (int)s.size() - 1;
        if (k == level) v = tr.projection.level(k).map[v];
    }
    return out;
}

// Inverse of truncate_map at the same level: top-dimensional labels lift to
// the least preimage under the truncation projection.
inline FormalMap lift_map(const FormalMap& f, const CrossedRef& c, int level) {
    if (f.domain.dim() > level)
        throw StructuralError("domain dimension exceeds the truncation level");
    auto tr = truncate(c, level);
    const auto& proj = tr.projection.level(level).map;
    FormalMap out{f.domain, c, f.labels};
    for (auto& [s, v] : out.labels) {
        int k = (int)s.size() - 1;
        if (k != level) continue;
        int lifted = -1;
        for (int x = 0; x < (int)proj.size(); ++x)
            if (proj[x] == v) {
                lifted = x;
                break;
            }
        if (lifted < 0) throw StructuralError("label has no preimage under the truncation");
        v = lifted;
    }
    return out;
}

// ----- holonomy -----

// Ordered edge-product around a triangulated circle, starting at the
// basepoint (vertex 0 if none); later edges multiply on the left.
inline int holonomy(const FormalMap& f) {
    const OrderedComplex& k = f.domain;
    std::vector<std::vector<int>> nbr(k.vertex_count());
    for (const auto& s : k.simplices) {
        if (s.size() == 2) {
            nbr[s[0]].push_back(s[1]);
            nbr[s[1]].push_back(s[0]);
        }
        if (s.size() > 2) throw StructuralError("holonomy needs a 1-dimensional domain");
    }
    for (const auto& n : nbr)
        if (n.size() != 2) throw StructuralError("holonomy needs a triangulated circle");
    int start = k.basepoints.empty() ? 0 : k.basepoints[0];
    int hol = f.complex->id(1);
    int prev = -1, at = start;
    do {
        int next = (nbr[at][0] == prev) ? nbr[at][1] : nbr[at][0];
        Simplex e = k.sorted({at, next});
        int g = f.label(e);
        if (e[0] != at) g = f.complex->inv(1, g);  // traversed against the order
        hol = f.complex->mul(1, g, hol);
        prev = at;
        at = next;
    } while (at != start);
    return hol;
}

}  // namespace fmc
