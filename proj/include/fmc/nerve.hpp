#pragma once

#include <map>
#include <optional>

#include "fmc/complexes.hpp"
#include "fmc/crossed.hpp"

namespace fmc {

// Face-labeling of the standard n-simplex: every strictly increasing tuple
// of size >= 2 over {0..n} carries an element of C_{size-1}.
struct NerveSimplex {
    CrossedRef complex;
    int n = 0;
    std::map<Simplex, int> labels;

    int label(const Simplex& t) const {
        auto it = labels.find(t);
        if (it == labels.end()) throw StructuralError("missing nerve label");
        return it->second;
    }
    int top() const {
        Simplex all;
        for (int i = 0; i <= n; ++i) all.push_back(i);
        return label(all);
    }
};

inline std::vector<Simplex> increasing_tuples(int n, int size) {
    std::vector<Simplex> out;
    Simplex cur;
    std::function<void(int)> rec = [&](int start) {
        if ((int)cur.size() == size) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v <= n; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

// The boundary relation of a labeled k-face, evaluated with a label callback
// on sub-tuples of F.  Returns the pair (delta_k(top), required product);
// the face is coherent iff they agree.
//   dim 2:  delta_2(w) = l(F_1) l(F_2)^-1 l(F_0)^-1
//   dim 3:  delta_3(w) = l(F_2) * l(F_0) * (^{q}l(F_3))^-1 * l(F_1)^-1
//   dim k>=4 (abelian): delta_k(w) = sum_i (-1)^i l(F_i), with l(F_k)
//                       replaced by ^{q}l(F_k)
// where q is the label of the last edge (F[k-1], F[k]).  The dimension-3
// form is the unique arrangement compatible with the dimension-2 one: with
// boundary the identity and conjugation action, triangle labels are forced
// by edges and the relation c2 c0 = c1 * ^{q}c3 then holds identically
// (checked exhaustively over S3 in the tests).
template <typename L>
std::pair<int, int> coherence_sides(const CrossedComplex& cx, const Simplex& F, L&& lab) {
    int k = (int)F.size() - 1;
    auto facet = [&](int i) {
        Simplex f = F;
        f.erase(f.begin() + i);
        return lab(f);
    };
    int lhs = cx.boundary(k)(lab(F));
    int rhs;
    if (k == 2) {
        rhs = cx.mul(1, cx.mul(1, facet(1), cx.inv(1, facet(2))), cx.inv(1, facet(0)));
    } else if (k == 3) {
        int q = lab({F[2], F[3]});
        rhs = cx.mul(2, facet(2), facet(0));
        rhs = cx.mul(2, rhs, cx.inv(2, cx.act(2, q, facet(3))));
        rhs = cx.mul(2, rhs, cx.inv(2, facet(1)));
    } else {
        int q = lab({F[k - 1], F[k]});
        rhs = cx.id(k - 1);
        for (int i = 0; i <= k; ++i) {
            int v = facet(i);
            if (i == k) v = cx.act(k - 1, q, v);
            if (i % 2) v = cx.inv(k - 1, v);
            rhs = cx.mul(k - 1, rhs, v);
        }
    }
    return {lhs, rhs};
}

inline ValidationReport validate_nerve_simplex(const NerveSimplex& s) {
    ValidationReport r;
    const auto& cx = *s.complex;
    for (int size = 2; size <= s.n + 1; ++size)
        for (const auto& F : increasing_tuples(s.n, size)) {
            int v = s.label(F);
            auto g = cx.group(size - 1);
            if (v < 0 || v >= g->order) throw StructuralError("label out of range");
            if (size >= 3) {
                auto [lhs, rhs] =
                    coherence_sides(cx, F, [&](const Simplex& t) { return s.label(t); });
                if (lhs != rhs) {
                    std::string fname;
                    for (int x : F) fname += std::to_string(x);
                    r.fail("coherence fails on face (" + fname + ")");
                }
            }
        }
    return r;
}

inline NerveSimplex face(const NerveSimplex& s, int i) {
    if (i < 0 || i > s.n) throw StructuralError("face index out of range");
    NerveSimplex out{s.complex, s.n - 1, {}};
    for (const auto& [t, v] : s.labels) {
        bool contains = std::find(t.begin(), t.end(), i) != t.end();
        if (contains) continue;
        Simplex r;
        for (int x : t) r.push_back(x > i ? x - 1 : x);
        out.labels[r] = v;
    }
    return out;
}

inline NerveSimplex degenerate(const NerveSimplex& s, int i) {
    if (i < 0 || i > s.n) throw StructuralError("degeneracy index out of range");
    NerveSimplex out{s.complex, s.n + 1, {}};
    // eta collapses i+1 onto i
    auto eta = [&](int v) { return v <= i ? v : v - 1; };
    for (int size = 2; size <= s.n + 2; ++size)
        for (const auto& t : increasing_tuples(s.n + 1, size)) {
            Simplex img;
            for (int v : t)
                if (img.empty() || eta(v) != img.back()) img.push_back(eta(v));
            if ((int)img.size() == (int)t.size())
                out.labels[t] = s.label(img);
            else
                out.labels[t] = s.complex->id(size - 1);
        }
    return out;
}

inline bool is_thin(const NerveSimplex& s) {
    if (s.n < 1) throw StructuralError("thinness needs dimension >= 1");
    return s.top() == s.complex->id(s.n);
}

struct HornProblem {
    CrossedRef complex;
    int n = 0;
    int missing = 0;
    std::map<int, NerveSimplex> faces;  // index -> (n-1)-simplex, all except `missing`
};

// Unique thin filler: assemble all labels from the given faces, set the top
// label to the identity, and solve the top coherence relation for the one
// unknown (the missing facet's top label).
inline NerveSimplex thin_filler(const HornProblem& h) {
    const auto& cx = *h.complex;
    NerveSimplex out{h.complex, h.n, {}};
    // delta_j embeds face-j tuples into {0..n} minus j
    for (const auto& [j, fj] : h.faces) {
        if (fj.n != h.n - 1) throw StructuralError("horn face dimension mismatch");
        for (const auto& [t, v] : fj.labels) {
            Simplex lifted;
            for (int x : t) lifted.push_back(x >= j ? x + 1 : x);
            auto it = out.labels.find(lifted);
            if (it != out.labels.end() && it->second != v)
                throw StructuralError("horn matching conditions violated");
            out.labels[lifted] = v;
        }
    }
    Simplex all;
    for (int i = 0; i <= h.n; ++i) all.push_back(i);
    out.labels[all] = cx.id(h.n);
    Simplex miss = all;
    miss.erase(miss.begin() + h.missing);
    if (out.labels.count(miss)) throw StructuralError("horn already contains the missing face");

    int m = h.missing;
    auto lab = [&](const Simplex& t) { return out.label(t); };
    int k = h.n;
    int solved;
    if (k == 2) {
        int s0 = m == 0 ? -1 : lab({1, 2});
        int s1 = m == 1 ? -1 : lab({0, 2});
        int s2 = m == 2 ? -1 : lab({0, 1});
        if (m == 0) solved = cx.mul(1, s1, cx.inv(1, s2));
        else if (m == 1) solved = cx.mul(1, s0, s2);
        else solved = cx.mul(1, cx.inv(1, s0), s1);
    } else if (k == 3) {
        auto facet = [&](int i) {
            Simplex f = all;
            f.erase(f.begin() + i);
            return i == m ? -1 : lab(f);
        };
        int q = lab({2, 3});
        int c0 = facet(0), c1 = facet(1), c2 = facet(2), c3 = facet(3);
        // c2 c0 = c1 * ^q c3
        if (m == 0)
            solved = cx.mul(2, cx.inv(2, c2), cx.mul(2, c1, cx.act(2, q, c3)));
        else if (m == 1)
            solved = cx.mul(2, cx.mul(2, c2, c0), cx.inv(2, cx.act(2, q, c3)));
        else if (m == 2)
            solved = cx.mul(2, cx.mul(2, c1, cx.act(2, q, c3)), cx.inv(2, c0));
        else
            solved = cx.act(2, cx.inv(1, q),
                            cx.mul(2, cx.inv(2, c1), cx.mul(2, c2, c0)));
    } else {
        // abelian: relation 1 = sum (-1)^i l(F_i) with ^q on the last face
        int q = lab({k - 1, k});
        int rest = cx.id(k - 1);
        for (int i = 0; i <= k; ++i) {
            if (i == m) continue;
            Simplex f = all;
            f.erase(f.begin() + i);
            int v = lab(f);
            if (i == k) v = cx.act(k - 1, q, v);
            if (i % 2) v = cx.inv(k - 1, v);
            rest = cx.mul(k - 1, rest, v);
        }
        // unknown term satisfies rest + term = 0
        int u_term = cx.inv(k - 1, rest);
        if (m % 2) u_term = cx.inv(k - 1, u_term);
        if (m == k) u_term = cx.act(k - 1, cx.inv(1, q), u_term);
        solved = u_term;
    }
    out.labels[miss] = solved;
    auto rep = validate_nerve_simplex(out);
    if (!rep.ok()) throw StructuralError("thin filler failed to validate: " + rep.summary());
    return out;
}

// All valid n-simplices, in deterministic label order.
inline std::vector<NerveSimplex> enumerate_simplices(const CrossedRef& c, int n,
                                                     long budget = 1000000) {
    std::vector<Simplex> tuples;
    for (int size = 2; size <= n + 1; ++size)
        for (const auto& t : increasing_tuples(n, size)) tuples.push_back(t);
    std::sort(tuples.begin(), tuples.end(), [](const Simplex& a, const Simplex& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::vector<NerveSimplex> out;
    NerveSimplex cur{c, n, {}};
    long visited = 0;
    std::function<void(int)> rec = [&](int pos) {
        if (++visited > budget) throw BudgetError("enumerate_simplices budget exceeded");
        if (pos == (int)tuples.size()) {
            if (validate_nerve_simplex(cur).ok()) out.push_back(cur);
            return;
        }
        const auto& t = tuples[pos];
        int k = (int)t.size() - 1;
        for (int v = 0; v < c->group(k)->order; ++v) {
            cur.labels[t] = v;
            // prune: if all labels of this tuple's coherence relation are set, check
            bool ok = true;
            if (k >= 2) {
                bool complete = true;
                auto lab = [&](const Simplex& s) {
                    auto it = cur.labels.find(s);
                    if (it == cur.labels.end()) {
                        complete = false;
                        return 0;
                    }
                    return it->second;
                };
                auto [lhs, rhs] = coherence_sides(*c, t, lab);
                if (complete && lhs != rhs) ok = false;
            }
            if (ok) rec(pos + 1);
        }
        cur.labels.erase(t);
    };
    rec(0);
    return out;
}

}  // namespace fmc
