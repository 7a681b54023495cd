#pragma once

#include <memory>
#include <vector>

#include "fmc/group.hpp"

namespace fmc {

// Reduced crossed complex: C_1 acts on every higher level, delta lowers
// degree by one.  Levels above `dims` are implicitly trivial.
struct CrossedComplex {
    int dims = 1;
    std::vector<GroupRef> groups_;       // groups_[k-1] = C_k
    std::vector<GroupHom> boundaries_;   // boundaries_[k-2] = delta_k : C_k -> C_{k-1}
    std::vector<GroupAction> actions_;   // actions_[k-2] = C_1 acting on C_k
    std::string label;

    GroupRef group(int k) const {
        return (k >= 1 && k <= dims) ? groups_[k - 1] : trivial_group();
    }
    GroupHom boundary(int k) const {
        if (k >= 2 && k <= dims) return boundaries_[k - 2];
        return trivial_hom(group(k), group(k - 1));
    }
    GroupAction action(int k) const {
        if (k >= 2 && k <= dims) return actions_[k - 2];
        return trivial_action(group(1), group(k));
    }
    int act(int k, int p, int c) const {
        if (k >= 2 && k <= dims) return actions_[k - 2](p, c);
        return c;
    }
    int mul(int k, int a, int b) const { return group(k)->mul(a, b); }
    int inv(int k, int a) const { return group(k)->inv(a); }
    int id(int k) const { return group(k)->identity; }
};

using CrossedRef = std::shared_ptr<const CrossedComplex>;

inline CrossedRef make_crossed_complex(std::vector<GroupRef> groups,
                                       std::vector<GroupHom> boundaries,
                                       std::vector<GroupAction> actions,
                                       std::string label = "") {
    auto c = std::make_shared<CrossedComplex>();
    if (groups.empty()) throw StructuralError("crossed complex needs at least C_1");
    c->dims = (int)groups.size();
    if ((int)boundaries.size() != c->dims - 1 || (int)actions.size() != c->dims - 1)
        throw StructuralError("crossed complex has dimension gaps");
    for (int k = 2; k <= c->dims; ++k) {
        const auto& d = boundaries[k - 2];
        if (d.source != groups[k - 1] || d.target != groups[k - 2])
            throw StructuralError("boundary map level mismatch at dimension " + std::to_string(k));
        const auto& a = actions[k - 2];
        if (a.actor != groups[0] || a.carrier != groups[k - 1])
            throw StructuralError("action level mismatch at dimension " + std::to_string(k));
    }
    c->groups_ = std::move(groups);
    c->boundaries_ = std::move(boundaries);
    c->actions_ = std::move(actions);
    c->label = std::move(label);
    return c;
}

inline CrossedRef crossed_complex_from_group(const GroupRef& g, std::string label = "") {
    return make_crossed_complex({g}, {}, {}, std::move(label));
}

struct CrossedModule {
    GroupRef c2, c1;
    GroupHom boundary;  // c2 -> c1
    GroupAction action; // c1 on c2
};

inline CrossedRef crossed_complex_from_module(const CrossedModule& m, std::string label = "") {
    return make_crossed_complex({m.c1, m.c2}, {m.boundary}, {m.action}, std::move(label));
}

inline ValidationReport validate_crossed_module(const CrossedModule& m) {
    ValidationReport r;
    if (m.boundary.source != m.c2 || m.boundary.target != m.c1 || m.action.actor != m.c1 ||
        m.action.carrier != m.c2)
        throw StructuralError("crossed module component groups do not match");
    r.merge(validate_hom(m.boundary), "boundary");
    r.merge(validate_action(m.action), "action");
    if (!r.ok()) return r;
    const auto& P = *m.c1;
    const auto& C = *m.c2;
    for (int p = 0; p < P.order; ++p)
        for (int c = 0; c < C.order; ++c)
            if (m.boundary(m.action(p, c)) != P.conj(p, m.boundary(c)))
                r.fail("CM1 fails at (p,c) = (" + P.names[p] + "," + C.names[c] + ")");
    for (int c = 0; c < C.order; ++c)
        for (int d = 0; d < C.order; ++d)
            if (m.action(m.boundary(c), d) != C.conj(c, d))
                r.fail("CM2 fails at (c,c') = (" + C.names[c] + "," + C.names[d] + ")");
    return r;
}

inline ValidationReport validate_crossed_complex(const CrossedComplex& c) {
    ValidationReport r;
    for (int k = 1; k <= c.dims; ++k) r.merge(validate_group(*c.group(k)), "C_" + std::to_string(k));
    if (!r.ok()) return r;
    if (c.dims >= 2) {
        CrossedModule m{c.group(2), c.group(1), c.boundary(2), c.action(2)};
        r.merge(validate_crossed_module(m), "(C_2, C_1)");
    }
    for (int k = 3; k <= c.dims; ++k) {
        auto Ck = c.group(k);
        auto tag = "C_" + std::to_string(k);
        r.merge(validate_hom(c.boundary(k)), "delta_" + std::to_string(k));
        r.merge(validate_action(c.action(k)), "action on " + tag);
        if (!Ck->is_abelian()) r.fail(tag + " is not abelian");
        // delta equivariance
        const auto& P = *c.group(1);
        for (int p = 0; p < P.order; ++p)
            for (int x = 0; x < Ck->order; ++x)
                if (c.boundary(k)(c.act(k, p, x)) != c.act(k - 1, p, c.boundary(k)(x))) {
                    r.fail("delta_" + std::to_string(k) + " not equivariant at (" + P.names[p] +
                           "," + Ck->names[x] + ")");
                    goto equiv_done;
                }
    equiv_done:
        // delta delta trivial
        for (int x = 0; x < Ck->order; ++x)
            if (c.boundary(k - 1)(c.boundary(k)(x)) != c.id(k - 2)) {
                r.fail("delta_" + std::to_string(k - 1) + " o delta_" + std::to_string(k) +
                       " nontrivial at " + Ck->names[x]);
                break;
            }
        // image of delta_2 acts trivially above
        if (c.dims >= 2) {
            for (int y = 0; y < c.group(2)->order; ++y) {
                int p = c.boundary(2)(y);
                for (int x = 0; x < Ck->order; ++x)
                    if (c.act(k, p, x) != x) {
                        r.fail("im(delta_2) acts nontrivially on " + tag + " at " + Ck->names[x]);
                        goto im_done;
                    }
            }
        im_done:;
        }
    }
    return r;
}

struct CrossedMorphism {
    CrossedRef source, target;
    std::vector<GroupHom> levels_;  // levels_[k-1] : source C_k -> target C_k

    GroupHom level(int k) const {
        if (k >= 1 && k <= (int)levels_.size()) return levels_[k - 1];
        return trivial_hom(source->group(k), target->group(k));
    }
};

inline CrossedMorphism identity_morphism(const CrossedRef& c) {
    CrossedMorphism m{c, c, {}};
    for (int k = 1; k <= c->dims; ++k) m.levels_.push_back(identity_hom(c->group(k)));
    return m;
}

inline ValidationReport validate_crossed_morphism(const CrossedMorphism& f) {
    ValidationReport r;
    int dmax = std::max(f.source->dims, f.target->dims);
    for (int k = 1; k <= dmax; ++k) {
        auto fk = f.level(k);
        if (fk.source != f.source->group(k) || fk.target != f.target->group(k))
            throw StructuralError("morphism level " + std::to_string(k) + " group mismatch");
        r.merge(validate_hom(fk), "level " + std::to_string(k));
    }
    if (!r.ok()) return r;
    auto f1 = f.level(1);
    for (int k = 2; k <= dmax; ++k) {
        auto fk = f.level(k);
        auto fk1 = f.level(k - 1);
        auto srcG = f.source->group(k);
        for (int x = 0; x < srcG->order; ++x)
            if (fk1(f.source->boundary(k)(x)) != f.target->boundary(k)(fk(x))) {
                r.fail("does not commute with delta_" + std::to_string(k) + " at " +
                       srcG->names[x]);
                break;
            }
        const auto& P = *f.source->group(1);
        for (int p = 0; p < P.order; ++p)
            for (int x = 0; x < srcG->order; ++x)
                if (fk(f.source->act(k, p, x)) != f.target->act(k, f1(p), fk(x))) {
                    r.fail("not equivariant at level " + std::to_string(k));
                    goto next_level;
                }
    next_level:;
    }
    return r;
}

struct TruncationResult {
    CrossedRef complex;
    CrossedMorphism projection;
};

// tr_{level}: kill everything above `level`, replace C_level by its quotient
// by the image of delta_{level+1}.
inline TruncationResult truncate(const CrossedRef& c, int level) {
    if (level < 1) throw StructuralError("truncation level must be >= 1");
    std::vector<GroupRef> groups;
    std::vector<GroupHom> boundaries;
    std::vector<GroupAction> actions;
    int top = std::min(level, c->dims);
    for (int k = 1; k <= top; ++k) groups.push_back(c->group(k));
    for (int k = 2; k <= top; ++k) {
        boundaries.push_back(c->boundary(k));
        actions.push_back(c->action(k));
    }
    CrossedMorphism proj{c, nullptr, {}};
    std::vector<GroupHom> levels;
    for (int k = 1; k <= c->dims; ++k) levels.push_back(identity_hom(c->group(k)));

    if (c->dims > level) {
        auto im = image_elements(c->boundary(level + 1));
        auto q = quotient_group(c->group(level), im);
        groups[level - 1] = q.group;
        levels[level - 1] = q.projection;
        if (level >= 2) {
            // boundary and action descend to the quotient
            GroupHom delta = c->boundary(level);
            GroupHom qdelta{q.group, c->group(level - 1), {}};
            for (int i = 0; i < q.group->order; ++i) qdelta.map.push_back(delta(q.rep[i]));
            boundaries[level - 2] = qdelta;
            GroupAction act = c->action(level);
            actions[level - 2] = make_action_fn(c->group(1), q.group, [&](int p, int x) {
                return q.coset_of[act(p, q.rep[x])];
            });
        }
        // levels above `level` map to trivial groups
        levels.resize(c->dims);
        for (int k = level + 1; k <= c->dims; ++k)
            levels[k - 1] = trivial_hom(c->group(k), trivial_group());
    }
    auto result = make_crossed_complex(groups, boundaries, actions,
                                       c->label + "-tr" + std::to_string(level));
    proj.target = result;
    proj.levels_ = std::move(levels);
    return {result, proj};
}

struct FundamentalGroupResult {
    GroupRef group;
    GroupHom projection;  // C_1 -> pi_1
};

inline FundamentalGroupResult fundamental_group(const CrossedRef& c) {
    auto im = image_elements(c->boundary(2));
    auto q = quotient_group(c->group(1), im);
    return {q.group, q.projection};
}

struct FibrationResult {
    bool is_fibration = false;
    CrossedRef kernel;
    ValidationReport kernel_report;
};

// Fibration with finite fibre = level-wise surjectivity; the kernel complex
// is the levelwise kernel with restricted structure.
inline FibrationResult is_fibration_with_finite_fibre(const CrossedMorphism& p) {
    FibrationResult out;
    int dmax = std::max(p.source->dims, p.target->dims);
    out.is_fibration = true;
    for (int k = 1; k <= dmax; ++k)
        if (!is_surjective(p.level(k))) out.is_fibration = false;

    std::vector<Subgroup> kers;
    for (int k = 1; k <= p.source->dims; ++k)
        kers.push_back(make_subgroup(p.source->group(k), kernel_elements(p.level(k))));
    std::vector<GroupRef> groups;
    std::vector<GroupHom> boundaries;
    std::vector<GroupAction> actions;
    for (auto& s : kers) groups.push_back(s.group);
    for (int k = 2; k <= p.source->dims; ++k) {
        const auto& hi = kers[k - 1];
        const auto& lo = kers[k - 2];
        GroupHom d{hi.group, lo.group, {}};
        for (int x : hi.elements) {
            int img = p.source->boundary(k)(x);
            int idx = lo.index_of[img];
            if (idx < 0) throw StructuralError("kernel not closed under boundary");
            d.map.push_back(idx);
        }
        boundaries.push_back(d);
        actions.push_back(make_action_fn(kers[0].group, hi.group, [&](int q, int x) {
            int idx = hi.index_of[p.source->act(k, kers[0].elements[q], hi.elements[x])];
            if (idx < 0) throw StructuralError("kernel not action-invariant");
            return idx;
        }));
    }
    out.kernel = make_crossed_complex(groups, boundaries, actions, "ker");
    out.kernel_report = validate_crossed_complex(*out.kernel);
    return out;
}

inline std::vector<CrossedMorphism> enumerate_crossed_morphisms(
    const CrossedRef& c, const CrossedRef& d, int budget = enumeration_budget()) {
    int dmax = std::max(c->dims, d->dims);
    std::vector<std::vector<GroupHom>> per_level;
    for (int k = 1; k <= dmax; ++k)
        per_level.push_back(enumerate_homs(c->group(k), d->group(k), budget));
    std::vector<CrossedMorphism> out;
    std::vector<int> pick(dmax, 0);
    while (true) {
        CrossedMorphism m{c, d, {}};
        for (int k = 0; k < dmax; ++k) m.levels_.push_back(per_level[k][pick[k]]);
        if (validate_crossed_morphism(m).ok()) out.push_back(m);
        int k = dmax - 1;
        while (k >= 0 && pick[k] + 1 == (int)per_level[k].size()) pick[k--] = 0;
        if (k < 0) break;
        ++pick[k];
    }
    return out;
}

}  // namespace fmc
