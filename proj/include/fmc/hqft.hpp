#pragma once

#include "fmc/formalmap.hpp"
#include "fmc/rational.hpp"

namespace fmc {

inline bool maps_equal(const FormalMap& f, const FormalMap& g) {
    return f.complex == g.complex && f.labels == g.labels &&
           f.domain.simplices == g.domain.simplices && f.domain.rank == g.domain.rank;
}

// Finite fragment of a formal HQFT: finitely many formal maps with assigned
// dimensions, finitely many cobordisms with assigned matrices, and the
// recorded monoidal witnesses.
struct FHQFTFragment {
    struct ObjectEntry {
        FormalMap map;
        int dim = 0;
    };
    struct CobordEntry {
        std::string source, target;
        std::optional<FormalCobordism> cobordism;
        Matrix matrix;  // dim(target) x dim(source)
    };
    struct CompositeRecord {
        std::string first, second, composite;  // composite = second # first
    };
    struct SumRecord {
        std::string whole, left, right;
        Matrix iso;  // tau(whole) -> tau(left) (x) tau(right)
    };
    struct InterchangeRecord {
        std::string lambda, gamma, whole;  // whole: cobordism on the disjoint union
    };

    CrossedRef complex;
    std::map<std::string, ObjectEntry> objects;
    std::map<std::string, CobordEntry> cobords;
    std::vector<CompositeRecord> composites;
    std::vector<std::string> identities;  // cobordism keys
    std::vector<SumRecord> sums;
    std::string unit_key;  // object for the empty map, if recorded
    Matrix unit_iso;       // 1x1: tau(unit) -> K
    std::vector<InterchangeRecord> interchanges;

    const ObjectEntry& object(const std::string& key) const {
        auto it = objects.find(key);
        if (it == objects.end()) throw StructuralError("unknown object key '" + key + "'");
        return it->second;
    }
    const CobordEntry& cobord(const std::string& key) const {
        auto it = cobords.find(key);
        if (it == cobords.end()) throw StructuralError("unknown cobordism key '" + key + "'");
        return it->second;
    }
};

inline ValidationReport validate_fragment(const FHQFTFragment& t) {
    ValidationReport r;
    for (const auto& [key, ob] : t.objects) {
        if (ob.map.complex != t.complex) r.fail("object '" + key + "' over the wrong complex");
        if (ob.dim < 0) r.fail("object '" + key + "' has negative dimension");
        r.merge(validate_formal_map(ob.map), "object '" + key + "'");
    }
    if (!r.ok()) return r;
    for (const auto& [key, cb] : t.cobords) {
        const auto& src = t.object(cb.source);
        const auto& tgt = t.object(cb.target);
        if (row_count(cb.matrix) != tgt.dim || col_count(cb.matrix) != src.dim)
            r.fail("cobordism '" + key + "' matrix has wrong dimensions");
        if (cb.cobordism) {
            r.merge(validate_formal_map(cb.cobordism->map), "cobordism '" + key + "'");
            check_end_restriction(r, "cobordism '" + key + "' incoming", cb.cobordism->map,
                                  cb.cobordism->in_map, src.map);
            check_end_restriction(r, "cobordism '" + key + "' outgoing", cb.cobordism->map,
                                  cb.cobordism->out_map, tgt.map);
        }
    }
    for (const auto& key : t.identities) {
        const auto& cb = t.cobord(key);
        if (cb.source != cb.target)
            r.fail("identity cobordism '" + key + "' has different ends");
        if (!is_identity(cb.matrix))
            r.fail("identity cobordism '" + key + "' is not assigned the identity matrix");
    }
    for (const auto& rec : t.composites) {
        const auto& a = t.cobord(rec.first);
        const auto& b = t.cobord(rec.second);
        const auto& c = t.cobord(rec.composite);
        std::string triple =
            "composite record (" + rec.first + ", " + rec.second + ", " + rec.composite + ")";
        if (a.target != b.source || c.source != a.source || c.target != b.target)
            r.fail(triple + ": ends do not match");
        else if (c.matrix != matrix_mul(b.matrix, a.matrix))
            r.fail(triple + ": matrix is not the product");
    }
    if (!t.unit_key.empty()) {
        if (t.object(t.unit_key).dim != 1) r.fail("unit object must have dimension 1");
        if (row_count(t.unit_iso) != 1 || col_count(t.unit_iso) != 1 ||
            t.unit_iso[0][0] == Scalar(0))
            r.fail("unit comparison must be an invertible 1x1 matrix");
    }
    for (const auto& s : t.sums) {
        int dw = t.object(s.whole).dim, dl = t.object(s.left).dim, dr = t.object(s.right).dim;
        std::string tag = "sum record '" + s.whole + "'";
        if (dw != dl * dr) {
            r.fail(tag + ": dimension is not the product of the parts");
            continue;
        }
        if (row_count(s.iso) != dl * dr || col_count(s.iso) != dw ||
            matrix_rank(s.iso) != dw) {
            r.fail(tag + ": comparison is not invertible");
            continue;
        }
        if (!t.unit_key.empty() && (s.left == t.unit_key || s.right == t.unit_key)) {
            Matrix scaled = s.iso;
            for (auto& row : scaled)
                for (auto& v : row) v *= t.unit_iso[0][0];
            if (!is_identity(scaled)) r.fail(tag + ": unit coherence diagram does not commute");
        }
    }
    // associativity: (L (x) R) (x) S against L (x) (R (x) S) wherever both
    // bracketings are recorded
    for (const auto& a : t.sums)          // whole W = U + S
        for (const auto& b : t.sums) {    // U = L + R
            if (b.whole != a.left) continue;
            for (const auto& c : t.sums)  // W = L + V
                for (const auto& d : t.sums) {  // V = R + S
                    if (c.whole != a.whole || c.left != b.left || d.whole != c.right ||
                        d.left != b.right || d.right != a.right)
                        continue;
                    int ds = t.object(a.right).dim, dl = t.object(b.left).dim;
                    auto lhs = matrix_mul(kronecker(b.iso, identity_matrix(ds)), a.iso);
                    auto rhs = matrix_mul(kronecker(identity_matrix(dl), d.iso), c.iso);
                    if (lhs != rhs)
                        r.fail("associativity diagram fails between sum records '" + a.whole +
                               "' and '" + c.whole + "'");
                }
        }
    for (const auto& rec : t.interchanges) {
        const auto& l = t.cobord(rec.lambda);
        const auto& g = t.cobord(rec.gamma);
        const auto& w = t.cobord(rec.whole);
        bool checked = false;
        for (const auto& a : t.sums) {
            if (a.whole != w.source || a.left != l.source || a.right != g.source) continue;
            for (const auto& b : t.sums) {
                if (b.whole != w.target || b.left != l.target || b.right != g.target) continue;
                checked = true;
                if (matrix_mul(b.iso, w.matrix) !=
                    matrix_mul(kronecker(l.matrix, g.matrix), a.iso))
                    r.fail("interchange square fails for (" + rec.lambda + ", " + rec.gamma +
                           ", " + rec.whole + ")");
            }
        }
        if (!checked)
            r.fail("interchange record (" + rec.lambda + ", " + rec.gamma + ", " + rec.whole +
                   ") has no matching sum records");
    }
    return r;
}

namespace detail {

inline void require_same_shape(const FHQFTFragment& a, const FHQFTFragment& b) {
    if (a.complex != b.complex) throw StructuralError("fragments are over different complexes");
    for (const auto& [key, ob] : a.objects)
        if (!b.objects.count(key) || !maps_equal(ob.map, b.objects.at(key).map))
            throw StructuralError("object key '" + key + "' does not match between fragments");
    if (a.objects.size() != b.objects.size() || a.cobords.size() != b.cobords.size())
        throw StructuralError("fragments have different key sets");
    for (const auto& [key, cb] : a.cobords) {
        auto it = b.cobords.find(key);
        if (it == b.cobords.end() || it->second.source != cb.source ||
            it->second.target != cb.target)
            throw StructuralError("cobordism key '" + key + "' does not match between fragments");
    }
}

// permutation (l1 r1)(l2 r2) -> (l1 l2)(r1 r2) on tensor indices
inline Matrix middle_shuffle(int dl1, int dr1, int dl2, int dr2) {
    auto p = zero_matrix(dl1 * dr1 * dl2 * dr2, dl1 * dr1 * dl2 * dr2);
    for (int l1 = 0; l1 < dl1; ++l1)
        for (int r1 = 0; r1 < dr1; ++r1)
            for (int l2 = 0; l2 < dl2; ++l2)
                for (int r2 = 0; r2 < dr2; ++r2) {
                    int in = ((l1 * dr1 + r1) * dl2 + l2) * dr2 + r2;
                    int out = ((l1 * dl2 + l2) * dr1 + r1) * dr2 + r2;
                    p[out][in] = Scalar(1);
                }
    return p;
}

}  // namespace detail

inline FHQFTFragment direct_sum(const FHQFTFragment& a, const FHQFTFragment& b) {
    detail::require_same_shape(a, b);
    FHQFTFragment out;
    out.complex = a.complex;
    out.objects = a.objects;
    for (auto& [key, ob] : out.objects) ob.dim += b.objects.at(key).dim;
    out.cobords = a.cobords;
    for (auto& [key, cb] : out.cobords)
        cb.matrix = block_diag(cb.matrix, b.cobords.at(key).matrix);
    out.composites = a.composites;
    out.identities = a.identities;
    // the monoidal witnesses do not survive a direct sum of theories (the
    // unit alone would need K + K = K), so none are carried over
    return out;
}

inline FHQFTFragment tensor(const FHQFTFragment& a, const FHQFTFragment& b) {
    detail::require_same_shape(a, b);
    FHQFTFragment out;
    out.complex = a.complex;
    out.objects = a.objects;
    for (auto& [key, ob] : out.objects) ob.dim *= b.objects.at(key).dim;
    out.cobords = a.cobords;
    for (auto& [key, cb] : out.cobords)
        cb.matrix = kronecker(cb.matrix, b.cobords.at(key).matrix);
    out.composites = a.composites;
    out.identities = a.identities;
    if (a.sums.size() != b.sums.size() || a.interchanges.size() != b.interchanges.size())
        throw StructuralError("fragments have different monoidal records");
    for (size_t i = 0; i < a.sums.size(); ++i) {
        const auto& sa = a.sums[i];
        const auto& sb = b.sums[i];
        if (sa.whole != sb.whole || sa.left != sb.left || sa.right != sb.right)
            throw StructuralError("sum records do not match between fragments");
        auto shuffle = detail::middle_shuffle(
            a.objects.at(sa.left).dim, a.objects.at(sa.right).dim,
            b.objects.at(sa.left).dim, b.objects.at(sa.right).dim);
        out.sums.push_back(
            {sa.whole, sa.left, sa.right, matrix_mul(shuffle, kronecker(sa.iso, sb.iso))});
    }
    if (a.unit_key != b.unit_key) throw StructuralError("unit keys differ between fragments");
    out.unit_key = a.unit_key;
    if (!a.unit_key.empty()) out.unit_iso = {{a.unit_iso[0][0] * b.unit_iso[0][0]}};
    out.interchanges = a.interchanges;
    return out;
}

inline FHQFTFragment dual(const FHQFTFragment& t) {
    FHQFTFragment out;
    out.complex = t.complex;
    out.objects = t.objects;
    for (const auto& [key, cb] : t.cobords)
        out.cobords[key] = {cb.target, cb.source, cb.cobordism, transpose(cb.matrix)};
    for (const auto& rec : t.composites)
        out.composites.push_back({rec.second, rec.first, rec.composite});
    out.identities = t.identities;
    for (const auto& s : t.sums)
        out.sums.push_back({s.whole, s.left, s.right, transpose(matrix_inverse(s.iso))});
    out.unit_key = t.unit_key;
    if (!t.unit_key.empty()) out.unit_iso = {{Scalar(1) / t.unit_iso[0][0]}};
    out.interchanges = t.interchanges;
    return out;
}

// ----- change of coefficients -----

// Compose a formal map's labels with a crossed-complex morphism.
inline FormalMap apply_morphism(const CrossedMorphism& p, const FormalMap& f) {
    if (f.complex != p.source) throw StructuralError("map is not over the morphism's source");
    FormalMap out{f.domain, p.target, {}};
    for (const auto& [s, v] : f.labels) out.labels[s] = p.level((int)s.size() - 1)(v);
    return out;
}

inline FormalCobordism apply_morphism(const CrossedMorphism& p, const FormalCobordism& w) {
    return {apply_morphism(p, w.map),     apply_morphism(p, w.incoming),
            apply_morphism(p, w.outgoing), w.in_map,
            w.out_map,                     w.basepoint_verticals};
}

inline std::string find_object_key(const FHQFTFragment& t, const FormalMap& f) {
    for (const auto& [key, ob] : t.objects)
        if (maps_equal(ob.map, f)) return key;
    throw StructuralError("no recorded object matches the given formal map");
}

inline std::string find_cobord_key(const FHQFTFragment& t, const FormalMap& cylinder) {
    for (const auto& [key, cb] : t.cobords)
        if (cb.cobordism && maps_equal(cb.cobordism->map, cylinder)) return key;
    throw StructuralError("no recorded cobordism matches the given cylinder map");
}

// p^*(t): the theory over the morphism's source whose value on mu is
// t(Ner(p) o mu), on the listed keys.
inline FHQFTFragment pullback(const CrossedMorphism& p, const FHQFTFragment& t,
                              const std::map<std::string, FormalMap>& objects,
                              const std::map<std::string, FormalCobordism>& cobords = {}) {
    if (t.complex != p.target) throw StructuralError("fragment is not over the morphism's target");
    FHQFTFragment out;
    out.complex = p.source;
    for (const auto& [key, mu] : objects) {
        auto composed = apply_morphism(p, mu);
        std::string hit;
        try {
            hit = find_object_key(t, composed);
        } catch (const StructuralError&) {
            throw StructuralError("no recorded value for the composed map of '" + key + "'");
        }
        out.objects[key] = {mu, t.objects.at(hit).dim};
    }
    for (const auto& [key, phi] : cobords) {
        auto composed = apply_morphism(p, phi);
        std::string hit;
        try {
            hit = find_cobord_key(t, composed.map);
        } catch (const StructuralError&) {
            throw StructuralError("no recorded value for the composed cobordism of '" + key + "'");
        }
        out.cobords[key] = {find_object_key(out, phi.incoming), find_object_key(out, phi.outgoing),
                            phi, t.cobords.at(hit).matrix};
    }
    return out;
}

// ----- pushforward along a fibration with finite fibre -----

inline bool is_finite_fibre_fibration(const CrossedMorphism& p) {
    int dmax = std::max(p.source->dims, p.target->dims);
    for (int k = 1; k <= dmax; ++k) {
        auto h = p.level(k);
        std::set<int> img(h.map.begin(), h.map.end());
        if ((int)img.size() != h.target->order) return false;
    }
    return true;
}

// All labelings over the morphism's source whose composed labels equal the
// given map.  Deterministic order; throws BudgetError when the search space
// exceeds the budget.
inline std::vector<FormalMap> enumerate_lifts(const CrossedMorphism& p, const FormalMap& lambda,
                                              long budget = 4000000) {
    if (lambda.complex != p.target)
        throw StructuralError("map to lift is not over the morphism's target");
    const auto& d = *p.source;
    struct Unknown {
        Simplex s;
        std::vector<int> candidates;
    };
    std::vector<Simplex> order;
    for (const auto& s : lambda.domain.simplices)
        if (s.size() >= 2) order.push_back(s);
    std::sort(order.begin(), order.end(), [](const Simplex& a, const Simplex& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::map<Simplex, int> assignment;
    std::vector<Unknown> unknowns;
    for (const auto& s : order) {
        int k = (int)s.size() - 1;
        auto h = p.level(k);
        int want = lambda.label(s);
        std::vector<int> cands;
        for (int x = 0; x < h.source->order; ++x)
            if (h(x) == want) cands.push_back(x);
        if (cands.empty()) return {};
        if (cands.size() == 1)
            assignment[s] = cands[0];
        else
            unknowns.push_back({s, std::move(cands)});
    }
    // coherence relations, each checked as soon as its participants are set
    struct Relation {
        Simplex s;
        std::vector<Simplex> parts;
        int missing = 0;
    };
    std::vector<Relation> rels;
    std::map<Simplex, std::vector<int>> touching;
    for (const auto& s : order) {
        if (s.size() < 3) continue;
        Relation rel;
        rel.s = s;
        rel.parts.push_back(s);
        for (size_t i = 0; i < s.size(); ++i) {
            Simplex f = s;
            f.erase(f.begin() + i);
            rel.parts.push_back(f);
        }
        if (s.size() >= 4) rel.parts.push_back({s[s.size() - 2], s[s.size() - 1]});
        rels.push_back(rel);
    }
    std::set<Simplex> open;
    for (const auto& u : unknowns) open.insert(u.s);
    for (int i = 0; i < (int)rels.size(); ++i)
        for (const auto& part : rels[i].parts)
            if (open.count(part)) {
                ++rels[i].missing;
                touching[part].push_back(i);
            }
    auto holds = [&](const Relation& rel) {
        auto [lhs, rhs] =
            coherence_sides(d, rel.s, [&](const Simplex& t) { return assignment.at(t); });
        return lhs == rhs;
    };
    std::vector<FormalMap> out;
    // relations with no open participant must hold outright
    for (const auto& rel : rels)
        if (rel.missing == 0 && !holds(rel)) return {};
    long visited = 0;
    std::function<void(size_t)> rec = [&](size_t pos) {
        if (++visited > budget) throw BudgetError("lift enumeration budget exceeded");
        if (pos == unknowns.size()) {
            out.push_back(FormalMap{lambda.domain, p.source, assignment});
            return;
        }
        const auto& u = unknowns[pos];
        auto tit = touching.find(u.s);
        for (int v : u.candidates) {
            assignment[u.s] = v;
            bool ok = true;
            if (tit != touching.end())
                for (int ri : tit->second)
                    if (--rels[ri].missing == 0 && !holds(rels[ri])) ok = false;
            if (ok) rec(pos + 1);
            if (tit != touching.end())
                for (int ri : tit->second) ++rels[ri].missing;
        }
        assignment.erase(u.s);
    };
    rec(0);
    return out;
}

struct PushforwardResult {
    std::vector<std::string> lift_keys;  // object keys of the lifts, in order
    std::vector<FormalMap> lifts;
    std::vector<int> dims, offsets;
    int total_dim = 0;     // unquotiented direct sum over the lifts
    Matrix relations;      // rows: relation vectors in the direct sum
    int relation_rank = 0;
    int rank = 0;          // dimension of the pushforward space
    Matrix quotient;       // rank x total_dim projection onto a basis of the quotient
    std::vector<int> free_columns;  // coordinates forming that basis
};

namespace detail {

// reduced row echelon form; returns pivot column per row
inline std::vector<int> rref(Matrix& m) {
    std::vector<int> pivots;
    int rows = row_count(m), cols = col_count(m), rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != Scalar(0)) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        Scalar d = m[rank][col];
        for (int c = 0; c < cols; ++c) m[rank][c] /= d;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][col] == Scalar(0)) continue;
            Scalar f = m[r][col];
            for (int c = 0; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        pivots.push_back(col);
        ++rank;
    }
    return pivots;
}

inline FormalMap restrict_to_end(const FormalMap& total, const std::vector<int>& emb,
                                 const OrderedComplex& end, const CrossedRef& c) {
    FormalMap out{end, c, {}};
    for (const auto& s : end.simplices) {
        if (s.size() < 2) continue;
        Simplex img;
        for (int v : s) img.push_back(emb[v]);
        out.labels[s] = total.label(total.domain.sorted(img));
    }
    return out;
}

}  // namespace detail

// R_p(tau)(lambda): direct sum of tau over the lifts of lambda, quotiented
// by the relations coming from fibre-preserving cylinder cobordisms over
// the standard prism triangulation.
inline PushforwardResult pushforward(const CrossedMorphism& p, const FHQFTFragment& t,
                                     const FormalMap& lambda, long budget = 4000000) {
    if (!is_finite_fibre_fibration(p))
        throw StructuralError("morphism is not a fibration with finite fibre");
    if (t.complex != p.source) throw StructuralError("fragment is not over the morphism's source");
    if (lambda.complex != p.target)
        throw StructuralError("target map is not over the morphism's target");
    PushforwardResult res;
    res.lifts = enumerate_lifts(p, lambda, budget);
    if (res.lifts.empty()) throw StructuralError("map has no lifts along the morphism");
    auto lift_index = [&](const FormalMap& f) {
        for (size_t i = 0; i < res.lifts.size(); ++i)
            if (res.lifts[i].labels == f.labels) return (int)i;
        throw StructuralError("cylinder end is not a recorded lift");
    };
    for (const auto& mu : res.lifts) {
        std::string key;
        try {
            key = find_object_key(t, mu);
        } catch (const StructuralError&) {
            throw StructuralError("a lift of the map is missing from the fragment");
        }
        res.lift_keys.push_back(key);
        res.offsets.push_back(res.total_dim);
        res.dims.push_back(t.objects.at(key).dim);
        res.total_dim += res.dims.back();
    }
    // the canonical identity cobordism of lambda, and every fibre-preserving
    // cylinder over it
    auto [same, idcyl] = transport_reorder(lambda, lambda.domain.rank);
    (void)same;
    std::map<std::map<Simplex, int>, std::string> cyl_by_labels;
    for (const auto& [key, cb] : t.cobords)
        if (cb.cobordism && cb.cobordism->map.complex == p.source)
            cyl_by_labels.emplace(cb.cobordism->map.labels, key);
    for (const auto& phi : enumerate_lifts(p, idcyl.map, budget)) {
        auto bottom = detail::restrict_to_end(phi, idcyl.in_map, lambda.domain, p.source);
        auto top = detail::restrict_to_end(phi, idcyl.out_map, lambda.domain, p.source);
        int i = lift_index(bottom), j = lift_index(top);
        auto hit = cyl_by_labels.find(phi.labels);
        if (hit == cyl_by_labels.end() ||
            !maps_equal(t.cobords.at(hit->second).cobordism->map, phi))
            throw StructuralError("a fibre cylinder over a lift is missing from the fragment");
        const std::string& key = hit->second;
        const auto& m = t.cobords.at(key).matrix;
        for (int x = 0; x < res.dims[i]; ++x) {
            std::vector<Scalar> row(res.total_dim, Scalar(0));
            row[res.offsets[i] + x] += Scalar(1);
            for (int y = 0; y < res.dims[j]; ++y) row[res.offsets[j] + y] -= m[y][x];
            bool zero = true;
            for (const auto& v : row)
                if (v != Scalar(0)) zero = false;
            if (!zero) res.relations.push_back(std::move(row));
        }
    }
    Matrix red = res.relations;
    auto pivots = detail::rref(red);
    res.relation_rank = (int)pivots.size();
    res.rank = res.total_dim - res.relation_rank;
    std::set<int> pivot_set(pivots.begin(), pivots.end());
    for (int c = 0; c < res.total_dim; ++c)
        if (!pivot_set.count(c)) res.free_columns.push_back(c);
    res.quotient = zero_matrix(res.rank, res.total_dim);
    for (int f = 0; f < res.rank; ++f) res.quotient[f][res.free_columns[f]] = Scalar(1);
    for (int r = 0; r < res.relation_rank; ++r)
        for (int f = 0; f < res.rank; ++f)
            res.quotient[f][pivots[r]] -= red[r][res.free_columns[f]];
    return res;
}

// The induced map of a cobordism over the base: lift it over each lift of
// the incoming end, apply tau, and read the result off in the quotient
// bases of the two pushforward spaces.
inline Matrix pushforward_cobordism(const CrossedMorphism& p, const FHQFTFragment& t,
                                    const FormalCobordism& cob, const PushforwardResult& src,
                                    const PushforwardResult& tgt, long budget = 4000000) {
    Matrix assembled = zero_matrix(tgt.total_dim, src.total_dim);
    for (size_t i = 0; i < src.lifts.size(); ++i) {
        bool found = false;
        for (const auto& phi : enumerate_lifts(p, cob.map, budget)) {
            auto bottom = detail::restrict_to_end(phi, cob.in_map, cob.incoming.domain, p.source);
            if (bottom.labels != src.lifts[i].labels) continue;
            auto top = detail::restrict_to_end(phi, cob.out_map, cob.outgoing.domain, p.source);
            int j = -1;
            for (size_t k = 0; k < tgt.lifts.size(); ++k)
                if (tgt.lifts[k].labels == top.labels) j = (int)k;
            if (j < 0) throw StructuralError("lifted cobordism ends outside the recorded lifts");
            const auto& m = t.cobords.at(find_cobord_key(t, phi)).matrix;
            for (int y = 0; y < tgt.dims[j]; ++y)
                for (int x = 0; x < src.dims[i]; ++x)
                    assembled[tgt.offsets[j] + y][src.offsets[i] + x] = m[y][x];
            found = true;
            break;  // any lift represents the same class in the quotient
        }
        if (!found) throw StructuralError("cobordism does not lift over a recorded lift");
    }
    // express on the quotient bases: project the target, include the source
    Matrix incl = zero_matrix(src.total_dim, src.rank);
    for (int f = 0; f < src.rank; ++f) incl[src.free_columns[f]][f] = Scalar(1);
    return matrix_mul(tgt.quotient, matrix_mul(assembled, incl));
}

// The trivial theory covering a pushforward instance: every lift gets the
// one-dimensional space, every fibre cylinder the identity.
inline FHQFTFragment trivial_covering_theory(const CrossedMorphism& p, const FormalMap& lambda,
                                             long budget = 4000000) {
    FHQFTFragment t;
    t.complex = p.source;
    int n = 0;
    for (const auto& mu : enumerate_lifts(p, lambda, budget))
        t.objects["lift" + std::to_string(n++)] = {mu, 1};
    auto [same, idcyl] = transport_reorder(lambda, lambda.domain.rank);
    (void)same;
    n = 0;
    for (const auto& phi : enumerate_lifts(p, idcyl.map, budget)) {
        auto bottom = detail::restrict_to_end(phi, idcyl.in_map, lambda.domain, p.source);
        auto top = detail::restrict_to_end(phi, idcyl.out_map, lambda.domain, p.source);
        FormalCobordism w{phi, bottom, top, idcyl.in_map, idcyl.out_map,
                          idcyl.basepoint_verticals};
        t.cobords["cyl" + std::to_string(n++)] = {find_object_key(t, bottom),
                                                  find_object_key(t, top), w,
                                                  identity_matrix(1)};
    }
    return t;
}

}  // namespace fmc
