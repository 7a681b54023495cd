#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fmc/validation.hpp"

namespace fmc {

using Simplex = std::vector<int>;  // vertex ids in order position

// Ordered simplicial complex.  `rank` gives each vertex its order position;
// equal ranks are allowed globally but two vertices of one simplex must be
// comparable (distinct ranks).  Simplices are stored rank-sorted and
// face-closed, vertices included.
struct OrderedComplex {
    std::vector<std::string> vertex_names;
    std::vector<int> rank;
    std::set<Simplex> simplices;
    std::vector<int> basepoints;
    std::string orientation;  // opaque metadata, never interpreted

    int vertex_count() const { return (int)vertex_names.size(); }
    int dim() const {
        int d = -1;
        for (const auto& s : simplices) d = std::max(d, (int)s.size() - 1);
        return d;
    }
    bool less(int u, int v) const { return rank[u] < rank[v] || (rank[u] == rank[v] && u < v); }
    Simplex sorted(Simplex s) const {
        std::sort(s.begin(), s.end(), [&](int u, int v) { return less(u, v); });
        return s;
    }
    bool has(const Simplex& s) const { return simplices.count(sorted(s)) > 0; }
};

inline OrderedComplex make_complex(std::vector<std::string> vertex_names,
                                   const std::vector<Simplex>& maximal,
                                   std::vector<int> basepoints = {},
                                   std::vector<int> ranks = {}) {
    OrderedComplex k;
    k.vertex_names = std::move(vertex_names);
    int n = k.vertex_count();
    if (ranks.empty()) {
        k.rank.resize(n);
        for (int i = 0; i < n; ++i) k.rank[i] = i;
    } else {
        if ((int)ranks.size() != n) throw StructuralError("rank count mismatch");
        k.rank = std::move(ranks);
    }
    for (int v = 0; v < n; ++v) k.simplices.insert({v});
    for (auto s : maximal) {
        std::set<int> uniq(s.begin(), s.end());
        if ((int)uniq.size() != (int)s.size()) throw StructuralError("repeated vertex in simplex");
        for (int v : s)
            if (v < 0 || v >= n) throw StructuralError("simplex vertex out of range");
        s = k.sorted(s);
        // insert all sub-faces
        int m = (int)s.size();
        for (int mask = 1; mask < (1 << m); ++mask) {
            Simplex f;
            for (int i = 0; i < m; ++i)
                if (mask & (1 << i)) f.push_back(s[i]);
            k.simplices.insert(f);
        }
    }
    for (int b : basepoints)
        if (b < 0 || b >= n) throw StructuralError("basepoint out of range");
    k.basepoints = std::move(basepoints);
    return k;
}

inline ValidationReport validate_complex(const OrderedComplex& k) {
    ValidationReport r;
    for (const auto& s : k.simplices) {
        if (s.empty()) r.fail("empty simplex stored");
        for (int v : s)
            if (v < 0 || v >= k.vertex_count()) r.fail("vertex out of range");
        if (k.sorted(s) != s) r.fail("simplex stored out of order");
        if (s.size() > 1) {
            for (size_t i = 0; i < s.size(); ++i) {
                Simplex f = s;
                f.erase(f.begin() + i);
                if (!k.simplices.count(f)) r.fail("face closure violated");
            }
        }
    }
    return r;
}

// ----- simplicial set fragments -----

// Explicit finite fragment of a simplicial set: every simplex (degenerate
// ones included) up to the cap is tabulated.
struct SimplicialSetFragment {
    int cap = 0;
    std::vector<std::vector<std::string>> names;         // names[n][s]
    std::vector<std::vector<std::vector<int>>> face;     // face[n][s][i], n >= 1
    std::vector<std::vector<std::vector<int>>> degen;    // degen[n][s][i], n < cap
    std::vector<std::vector<bool>> nondeg;

    int size(int n) const { return n <= cap && n >= 0 ? (int)names[n].size() : 0; }
    int index(int n, const std::string& name) const {
        for (int s = 0; s < size(n); ++s)
            if (names[n][s] == name) return s;
        return -1;
    }
};

inline ValidationReport validate_fragment_identities(const SimplicialSetFragment& x) {
    ValidationReport r;
    auto chk = [&](bool ok, const std::string& what) {
        if (!ok) r.fail(what);
    };
    for (int n = 2; n <= x.cap; ++n)
        for (int s = 0; s < x.size(n); ++s)
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j <= n; ++j)
                    chk(x.face[n - 1][x.face[n][s][j]][i] == x.face[n - 1][x.face[n][s][i]][j - 1],
                        "d_i d_j fails at dim " + std::to_string(n));
    for (int n = 0; n < x.cap; ++n)
        for (int s = 0; s < x.size(n); ++s)
            for (int i = 0; i <= n; ++i) {
                int t = x.degen[n][s][i];
                for (int j = 0; j <= n + 1; ++j) {
                    int f = x.face[n + 1][t][j];
                    if (j == i || j == i + 1)
                        chk(f == s, "d_i s_i != id at dim " + std::to_string(n));
                    else if (j < i)
                        chk(n >= 1 && f == x.degen[n - 1][x.face[n][s][j]][i - 1],
                            "d_j s_i (j<i) fails at dim " + std::to_string(n));
                    else
                        chk(n >= 1 && f == x.degen[n - 1][x.face[n][s][j - 1]][i],
                            "d_j s_i (j>i+1) fails at dim " + std::to_string(n));
                }
            }
    for (int n = 0; n + 2 <= x.cap; ++n)
        for (int s = 0; s < x.size(n); ++s)
            for (int i = 0; i <= n; ++i)
                for (int j = i; j <= n; ++j)
                    chk(x.degen[n + 1][x.degen[n][s][j]][i] == x.degen[n + 1][x.degen[n][s][i]][j + 1],
                        "s_i s_j fails at dim " + std::to_string(n));
    return r;
}

// All weakly monotone vertex sequences of length n+1 supported on a simplex.
inline std::vector<Simplex> monotone_sequences(const OrderedComplex& k, int n) {
    std::vector<Simplex> out;
    std::vector<Simplex> chains(k.simplices.begin(), k.simplices.end());
    for (const auto& chain : chains) {
        int m = (int)chain.size();
        if (m > n + 1) continue;
        // surjective monotone maps [0..n] -> [0..m-1]: start at 0, step by 0
        // or 1, end at m-1
        std::vector<int> pick;
        std::function<void(int, int)> rec = [&](int pos, int cur) {
            if (pos == n + 1) {
                if (cur == m - 1) {
                    Simplex s;
                    for (int p : pick) s.push_back(chain[p]);
                    out.push_back(s);
                }
                return;
            }
            int lo = pos == 0 ? 0 : cur;
            int hi = pos == 0 ? 0 : std::min(cur + 1, m - 1);
            for (int v = lo; v <= hi; ++v) {
                if (m - 1 - v > n - pos) continue;
                pick.push_back(v);
                rec(pos + 1, v);
                pick.pop_back();
            }
        };
        rec(0, -1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string seq_name(const OrderedComplex& k, const Simplex& s) {
    std::string n;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) n += ".";
        n += k.vertex_names[s[i]];
    }
    return n;
}

inline SimplicialSetFragment to_simplicial_set(const OrderedComplex& k, int cap) {
    for (const auto& s : k.simplices) {
        std::set<int> ranks;
        for (int v : s) ranks.insert(k.rank[v]);
        if ((int)ranks.size() != (int)s.size())
            throw StructuralError("incomparable vertices in simplex " + seq_name(k, s));
    }
    SimplicialSetFragment x;
    x.cap = cap;
    std::vector<std::map<Simplex, int>> idx(cap + 1);
    std::vector<std::vector<Simplex>> sims(cap + 1);
    for (int n = 0; n <= cap; ++n) {
        sims[n] = monotone_sequences(k, n);
        x.names.emplace_back();
        x.nondeg.emplace_back();
        for (int s = 0; s < (int)sims[n].size(); ++s) {
            idx[n][sims[n][s]] = s;
            x.names[n].push_back(seq_name(k, sims[n][s]));
            bool nd = true;
            for (size_t i = 0; i + 1 < sims[n][s].size(); ++i)
                if (sims[n][s][i] == sims[n][s][i + 1]) nd = false;
            x.nondeg[n].push_back(nd);
        }
    }
    x.face.resize(cap + 1);
    x.degen.resize(cap + 1);
    for (int n = 1; n <= cap; ++n) {
        x.face[n].resize(sims[n].size());
        for (int s = 0; s < (int)sims[n].size(); ++s)
            for (int i = 0; i <= n; ++i) {
                Simplex f = sims[n][s];
                f.erase(f.begin() + i);
                x.face[n][s].push_back(idx[n - 1].at(f));
            }
    }
    for (int n = 0; n < cap; ++n) {
        x.degen[n].resize(sims[n].size());
        for (int s = 0; s < (int)sims[n].size(); ++s)
            for (int i = 0; i <= n; ++i) {
                Simplex d = sims[n][s];
                d.insert(d.begin() + i, d[i]);
                x.degen[n][s].push_back(idx[n + 1].at(d));
            }
    }
    return x;
}

// ----- covers -----

struct OrderedOpenCover {
    std::vector<std::string> index_names;
    std::set<std::set<int>> nonempty;      // families with nonempty intersection
    std::set<std::set<int>> disconnected;  // nonempty intersections flagged non-connected
};

inline OrderedComplex nerve_of_cover(const OrderedOpenCover& u) {
    for (const auto& fam : u.nonempty) {
        for (int i : fam)
            if (i < 0 || i >= (int)u.index_names.size())
                throw StructuralError("cover index out of range");
        for (int skip : fam) {
            std::set<int> sub = fam;
            sub.erase(skip);
            if (!sub.empty() && !u.nonempty.count(sub))
                throw StructuralError("cover intersection oracle is not monotone");
        }
    }
    OrderedComplex k;
    k.vertex_names = u.index_names;
    k.rank.resize(u.index_names.size());
    for (int i = 0; i < (int)k.rank.size(); ++i) k.rank[i] = i;
    for (const auto& fam : u.nonempty) k.simplices.insert(Simplex(fam.begin(), fam.end()));
    return k;
}

// ----- prisms and subdivisions -----

// carrier[top vertex] = base simplex the vertex lies in
using CarrierMap = std::vector<Simplex>;

inline CarrierMap identity_carrier(const OrderedComplex& k) {
    CarrierMap c;
    for (int v = 0; v < k.vertex_count(); ++v) c.push_back({v});
    return c;
}

struct PrismResult {
    OrderedComplex complex;
    std::vector<int> bottom_map;                       // base vertex -> cylinder vertex
    std::vector<int> top_map;                          // top vertex -> cylinder vertex
    std::vector<std::pair<int, int>> basepoint_verticals;  // cylinder edges
};

// Triangulated cylinder |base| x I with `base` on the bottom and `top` on
// the top.  Cells over a base chain (u_0..u_m) are joins of an initial
// segment (u_0..u_i) with top simplices carried inside the terminal segment
// {u_i..u_m}; for top = base this is the classical ordered prism
// decomposition.
inline PrismResult prism(const OrderedComplex& base, const OrderedComplex& top,
                         const CarrierMap& carrier) {
    if ((int)carrier.size() != top.vertex_count())
        throw StructuralError("carrier map size mismatch");
    for (const auto& c : carrier)
        if (!base.has(c)) throw StructuralError("matching not a subdivision carrier: vertex carrier is not a base simplex");
    auto carrier_of = [&](const Simplex& t) {
        std::set<int> u;
        for (int v : t)
            for (int w : carrier[v]) u.insert(w);
        return Simplex(u.begin(), u.end());
    };
    for (const auto& t : top.simplices)
        if (!base.has(carrier_of(t)))
            throw StructuralError("matching not a subdivision carrier: simplex " +
                                  seq_name(top, t));

    PrismResult out;
    OrderedComplex& cyl = out.complex;
    int nb = base.vertex_count(), nt = top.vertex_count();
    int maxrank = 0;
    for (int r : base.rank) maxrank = std::max(maxrank, r + 1);
    for (int v = 0; v < nb; ++v) {
        cyl.vertex_names.push_back(base.vertex_names[v] + "@0");
        cyl.rank.push_back(base.rank[v]);
        out.bottom_map.push_back(v);
    }
    for (int v = 0; v < nt; ++v) {
        cyl.vertex_names.push_back(top.vertex_names[v] + "@1");
        cyl.rank.push_back(maxrank + top.rank[v]);
        out.top_map.push_back(nb + v);
    }
    std::set<Simplex> cells;
    for (const auto& s : base.simplices) cells.insert(s);  // bottom copy
    for (const auto& t : top.simplices) {
        Simplex shifted;
        for (int v : t) shifted.push_back(nb + v);
        cells.insert(shifted);
    }
    for (const auto& sigma : base.simplices) {
        int m = (int)sigma.size();
        for (int i = 0; i < m; ++i) {
            std::set<int> terminal(sigma.begin() + i, sigma.end());
            for (const auto& t : top.simplices) {
                Simplex c = carrier_of(t);
                bool inside = true;
                for (int w : c)
                    if (!terminal.count(w)) inside = false;
                if (!inside) continue;
                Simplex cell(sigma.begin(), sigma.begin() + i + 1);
                for (int v : t) cell.push_back(nb + v);
                cells.insert(cell);
            }
        }
    }
    // face closure
    std::vector<Simplex> work(cells.begin(), cells.end());
    while (!work.empty()) {
        Simplex s = work.back();
        work.pop_back();
        if (s.size() <= 1) continue;
        for (size_t i = 0; i < s.size(); ++i) {
            Simplex f = s;
            f.erase(f.begin() + i);
            if (cells.insert(f).second) work.push_back(f);
        }
    }
    cyl.simplices = std::move(cells);
    cyl.basepoints = base.basepoints;
    for (int b : base.basepoints)
        for (int v = 0; v < nt; ++v)
            if (carrier[v] == Simplex{b} && cyl.simplices.count(cyl.sorted({b, nb + v})))
                out.basepoint_verticals.push_back({b, nb + v});
    return out;
}

struct SubdivisionResult {
    OrderedComplex complex;
    CarrierMap carrier;
};

inline SubdivisionResult barycentric_subdivide(const OrderedComplex& k) {
    std::vector<Simplex> cells(k.simplices.begin(), k.simplices.end());
    std::sort(cells.begin(), cells.end(), [](const Simplex& a, const Simplex& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::map<Simplex, int> vid;
    SubdivisionResult out;
    for (int i = 0; i < (int)cells.size(); ++i) {
        vid[cells[i]] = i;
        out.complex.vertex_names.push_back("b(" + seq_name(k, cells[i]) + ")");
        out.complex.rank.push_back(i);
        out.carrier.push_back(cells[i]);
        out.complex.simplices.insert({i});
    }
    // flags: chains under strict inclusion
    auto subset = [](const Simplex& a, const Simplex& b) {
        return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    std::function<void(std::vector<int>&)> rec = [&](std::vector<int>& flag) {
        if (flag.size() >= 2) out.complex.simplices.insert(flag);
        int last = flag.back();
        for (int j = 0; j < (int)cells.size(); ++j)
            if (subset(cells[last], cells[j])) {
                flag.push_back(j);
                rec(flag);
                flag.pop_back();
            }
    };
    for (int i = 0; i < (int)cells.size(); ++i) {
        std::vector<int> flag{i};
        rec(flag);
    }
    for (int b : k.basepoints) out.complex.basepoints.push_back(vid.at({b}));
    return out;
}

inline SubdivisionResult stellar_subdivide_edge(const OrderedComplex& k, Simplex edge) {
    edge = k.sorted(edge);
    if (edge.size() != 2 || !k.has(edge)) throw StructuralError("not an edge of the complex");
    SubdivisionResult out;
    out.complex.vertex_names = k.vertex_names;
    out.complex.rank = k.rank;
    int maxrank = 0;
    for (int r : k.rank) maxrank = std::max(maxrank, r + 1);
    int m = k.vertex_count();
    out.complex.vertex_names.push_back("m(" + seq_name(k, edge) + ")");
    out.complex.rank.push_back(maxrank);
    for (int v = 0; v < m; ++v) out.carrier.push_back({v});
    out.carrier.push_back(edge);
    std::vector<Simplex> maximal;
    for (const auto& s : k.simplices) {
        bool hasA = std::find(s.begin(), s.end(), edge[0]) != s.end();
        bool hasB = std::find(s.begin(), s.end(), edge[1]) != s.end();
        if (hasA && hasB) {
            for (int drop : {edge[0], edge[1]}) {
                Simplex t;
                for (int v : s)
                    if (v != drop) t.push_back(v);
                t.push_back(m);
                maximal.push_back(t);
            }
        } else {
            maximal.push_back(s);
        }
    }
    auto names = out.complex.vertex_names;
    auto ranks = out.complex.rank;
    out.complex = make_complex(names, maximal, k.basepoints, ranks);
    return out;
}

inline OrderedComplex disjoint_union(const OrderedComplex& k1, const OrderedComplex& k2) {
    OrderedComplex u;
    u.vertex_names = k1.vertex_names;
    u.rank = k1.rank;
    int shift = 0;
    for (int r : k1.rank) shift = std::max(shift, r + 1);
    std::set<std::string> used(k1.vertex_names.begin(), k1.vertex_names.end());
    int n1 = k1.vertex_count();
    for (int v = 0; v < k2.vertex_count(); ++v) {
        std::string name = k2.vertex_names[v];
        while (used.count(name)) name += "'";
        used.insert(name);
        u.vertex_names.push_back(name);
        u.rank.push_back(shift + k2.rank[v]);
    }
    u.simplices = k1.simplices;
    for (auto s : k2.simplices) {
        for (int& v : s) v += n1;
        u.simplices.insert(s);
    }
    u.basepoints = k1.basepoints;
    for (int b : k2.basepoints) u.basepoints.push_back(b + n1);
    return u;
}

struct Component {
    OrderedComplex complex;
    std::vector<int> vertex_map;  // component vertex -> original vertex
};

inline std::vector<Component> connected_components(const OrderedComplex& k) {
    int n = k.vertex_count();
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& s : k.simplices)
        for (size_t i = 1; i < s.size(); ++i) parent[find(s[i])] = find(s[0]);
    std::map<int, std::vector<int>> groups;
    for (int v = 0; v < n; ++v) groups[find(v)].push_back(v);
    std::vector<Component> out;
    for (auto& [root, verts] : groups) {
        Component c;
        std::map<int, int> newid;
        for (int v : verts) {
            newid[v] = (int)c.vertex_map.size();
            c.vertex_map.push_back(v);
            c.complex.vertex_names.push_back(k.vertex_names[v]);
            c.complex.rank.push_back(k.rank[v]);
        }
        for (const auto& s : k.simplices)
            if (newid.count(s[0])) {
                Simplex t;
                for (int v : s) t.push_back(newid.at(v));
                c.complex.simplices.insert(t);
            }
        for (int b : k.basepoints)
            if (newid.count(b)) c.complex.basepoints.push_back(newid.at(b));
        out.push_back(std::move(c));
    }
    return out;
}

// Convenience builders used widely in tests and demos.
inline OrderedComplex circle_complex(int n, std::string prefix = "v") {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
    std::vector<Simplex> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    return make_complex(names, edges, {0});
}

inline OrderedComplex standard_simplex(int n) {
    std::vector<std::string> names;
    Simplex all;
    for (int i = 0; i <= n; ++i) {
        names.push_back("v" + std::to_string(i));
        all.push_back(i);
    }
    return make_complex(names, {all}, {0});
}

}  // namespace fmc
