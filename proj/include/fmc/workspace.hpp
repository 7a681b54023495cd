#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fmc/bundle.hpp"
#include "fmc/formalmap.hpp"
#include "fmc/hqft.hpp"

namespace fmc {

// ---------------------------------------------------------------------------
// Workspace files: one line-oriented text format, versioned with a header.
//
//   fmc-workspace 1
//
//   group NAME            crossed NAME          complex NAME
//     names a b ...         dims K                vertices a b ...
//     row 0 1 ...           level K GROUP         basepoint a
//     ...                   boundary K g g ...    simplex a b c
//   end                     action K g g ...    end
//                         end
//
//   cover NAME            map NAME              cobordism NAME
//     indices U V ...       domain COMPLEX        map MAP
//     nonempty U V          into CROSSED          incoming MAP
//     disconnected U V      label a b ... = g     outgoing MAP
//   end                   end                     inmap a b ...
//                                                 outmap a b ...
//                                                 vertical a b
//                                               end
//
//   morphism NAME         fragment NAME
//     source CROSSED        complex CROSSED
//     target CROSSED        object KEY map MAP dim D
//     level K g g ...       cobord KEY source KEY target KEY [via COBORDISM]
//   end                       row 1 0
//                             row 0 1
//                           identity KEY
//                           composite FIRST SECOND COMPOSITE
//                           sum WHOLE LEFT RIGHT   (followed by row lines)
//                           unit KEY SCALAR
//                           interchange LAMBDA GAMMA WHOLE
//                         end
//
// '#' starts a comment; blank lines are ignored.  Group elements are written
// by name or by index; scalars are integers or fractions like -2/3.  Loading
// is order independent: sections are parsed first and resolved afterwards,
// so a map may appear before the complex it refers to.
// ---------------------------------------------------------------------------

struct ParseError : StructuralError {
    using StructuralError::StructuralError;
};

struct Workspace {
    std::map<std::string, GroupRef> groups;
    std::map<std::string, CrossedRef> crossed;
    std::map<std::string, OrderedComplex> complexes;
    std::map<std::string, OrderedOpenCover> covers;
    std::map<std::string, FormalMap> maps;
    std::map<std::string, FormalCobordism> cobordisms;
    std::map<std::string, CrossedMorphism> morphisms;
    std::map<std::string, FHQFTFragment> fragments;
    std::vector<std::pair<std::string, std::string>> order;  // (kind, name) in file order
    ValidationReport report;                                 // aggregate validation
};

namespace ws_detail {

struct Token {
    std::string text;
    int line = 0, col = 0;
};

struct Line {
    int number = 0;
    std::vector<Token> tokens;
};

struct RawSection {
    std::string kind;
    Token name;
    std::vector<Line> body;
};

[[noreturn]] inline void fail_at(const std::string& path, int line, int col,
                                 const std::string& msg) {
    throw ParseError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
}

[[noreturn]] inline void fail_tok(const std::string& path, const Token& t, const std::string& msg) {
    fail_at(path, t.line, t.col, msg);
}

inline std::vector<Line> tokenize(std::istream& in, const std::string& path) {
    std::vector<Line> lines;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        Line line{number, {}};
        size_t i = 0;
        while (i < raw.size()) {
            if (std::isspace((unsigned char)raw[i])) {
                ++i;
                continue;
            }
            if (raw[i] == '#') break;
            size_t start = i;
            while (i < raw.size() && !std::isspace((unsigned char)raw[i])) ++i;
            line.tokens.push_back({raw.substr(start, i - start), number, (int)start + 1});
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    if (lines.empty()) fail_at(path, 1, 1, "missing 'fmc-workspace 1' header");
    return lines;
}

inline std::vector<RawSection> split_sections(const std::vector<Line>& lines,
                                              const std::string& path) {
    const Line& header = lines.front();
    if (header.tokens.size() != 2 || header.tokens[0].text != "fmc-workspace")
        fail_tok(path, header.tokens[0], "expected 'fmc-workspace 1' header");
    if (header.tokens[1].text != "1")
        fail_tok(path, header.tokens[1], "unsupported workspace version '" +
                                             header.tokens[1].text + "'");
    static const std::set<std::string> kinds{"group",     "crossed",  "complex",  "cover",
                                            "map",       "cobordism", "morphism", "fragment"};
    std::vector<RawSection> out;
    size_t i = 1;
    while (i < lines.size()) {
        const Line& open = lines[i];
        if (!kinds.count(open.tokens[0].text))
            fail_tok(path, open.tokens[0],
                     "expected a section keyword, got '" + open.tokens[0].text + "'");
        if (open.tokens.size() != 2)
            fail_tok(path, open.tokens[0], "section header needs exactly one name");
        RawSection sec{open.tokens[0].text, open.tokens[1], {}};
        ++i;
        bool closed = false;
        while (i < lines.size()) {
            if (lines[i].tokens[0].text == "end") {
                if (lines[i].tokens.size() != 1)
                    fail_tok(path, lines[i].tokens[1], "'end' takes no arguments");
                closed = true;
                ++i;
                break;
            }
            sec.body.push_back(lines[i]);
            ++i;
        }
        if (!closed)
            fail_tok(path, open.tokens[0], "section '" + sec.name.text + "' is never closed");
        out.push_back(std::move(sec));
    }
    return out;
}

inline int parse_int(const std::string& path, const Token& t) {
    try {
        size_t used = 0;
        int v = std::stoi(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail_tok(path, t, "expected an integer, got '" + t.text + "'");
    }
}

inline int element_of(const std::string& path, const GroupRef& g, const Token& t) {
    for (int i = 0; i < g->order; ++i)
        if (g->names[i] == t.text) return i;
    bool numeric = !t.text.empty();
    for (char c : t.text)
        if (!std::isdigit((unsigned char)c)) numeric = false;
    if (numeric) {
        int v = parse_int(path, t);
        if (v >= 0 && v < g->order) return v;
    }
    fail_tok(path, t, "'" + t.text + "' is not an element of the group");
}

inline int vertex_of(const std::string& path, const OrderedComplex& k, const Token& t) {
    for (int i = 0; i < k.vertex_count(); ++i)
        if (k.vertex_names[i] == t.text) return i;
    fail_tok(path, t, "'" + t.text + "' is not a vertex of the complex");
}

inline Scalar parse_scalar(const std::string& path, const Token& t) {
    using boost::multiprecision::cpp_int;
    auto piece = [&](const std::string& s) -> cpp_int {
        if (s.empty()) fail_tok(path, t, "expected a rational number, got '" + t.text + "'");
        size_t start = s[0] == '-' ? 1 : 0;
        if (start == s.size()) fail_tok(path, t, "expected a rational number, got '" + t.text + "'");
        for (size_t i = start; i < s.size(); ++i)
            if (!std::isdigit((unsigned char)s[i]))
                fail_tok(path, t, "expected a rational number, got '" + t.text + "'");
        return cpp_int(s);
    };
    size_t slash = t.text.find('/');
    if (slash == std::string::npos) return Scalar(piece(t.text));
    cpp_int den = piece(t.text.substr(slash + 1));
    if (den == 0) fail_tok(path, t, "zero denominator");
    return Scalar(piece(t.text.substr(0, slash)), den);
}

template <typename Map>
const typename Map::mapped_type& resolve(const std::string& path, const Map& m,
                                         const std::string& referrer_kind,
                                         const std::string& referrer,
                                         const std::string& target_kind, const Token& t) {
    auto it = m.find(t.text);
    if (it == m.end())
        fail_tok(path, t, referrer_kind + " '" + referrer + "' refers to unknown " + target_kind +
                              " '" + t.text + "'");
    return it->second;
}

inline void expect_min(const std::string& path, const Line& l, size_t n) {
    if (l.tokens.size() < n)
        fail_tok(path, l.tokens[0], "'" + l.tokens[0].text + "' needs more arguments");
}

inline GroupRef build_group(const std::string& path, const RawSection& sec) {
    std::vector<std::string> names;
    std::vector<std::vector<int>> rows;
    for (const auto& l : sec.body) {
        const std::string& kw = l.tokens[0].text;
        if (kw == "names") {
            for (size_t i = 1; i < l.tokens.size(); ++i) names.push_back(l.tokens[i].text);
        } else if (kw == "row") {
            std::vector<int> row;
            for (size_t i = 1; i < l.tokens.size(); ++i) row.push_back(parse_int(path, l.tokens[i]));
            rows.push_back(std::move(row));
        } else {
            fail_tok(path, l.tokens[0], "unknown directive '" + kw + "' in a group section");
        }
    }
    if (rows.empty()) fail_tok(path, sec.name, "group '" + sec.name.text + "' has no table rows");
    std::vector<int> table;
    for (const auto& row : rows) {
        if (row.size() != rows.size())
            fail_tok(path, sec.name, "group '" + sec.name.text + "' table is not square");
        for (int v : row) table.push_back(v);
    }
    return make_group(std::move(table), std::move(names), sec.name.text);
}

inline CrossedRef build_crossed(const std::string& path, const RawSection& sec,
                                const std::map<std::string, GroupRef>& groups) {
    int dims = -1;
    std::map<int, GroupRef> level;
    std::map<int, const Line*> boundary_lines;
    std::map<int, std::vector<const Line*>> action_lines;
    for (const auto& l : sec.body) {
        const std::string& kw = l.tokens[0].text;
        if (kw == "dims") {
            expect_min(path, l, 2);
            dims = parse_int(path, l.tokens[1]);
        } else if (kw == "level") {
            expect_min(path, l, 3);
            int k = parse_int(path, l.tokens[1]);
            level[k] = resolve(path, groups, "crossed", sec.name.text, "group", l.tokens[2]);
        } else if (kw == "boundary") {
            expect_min(path, l, 2);
            boundary_lines[parse_int(path, l.tokens[1])] = &l;
        } else if (kw == "action") {
            expect_min(path, l, 2);
            action_lines[parse_int(path, l.tokens[1])].push_back(&l);
        } else {
            fail_tok(path, l.tokens[0], "unknown directive '" + kw + "' in a crossed section");
        }
    }
    if (dims < 1) fail_tok(path, sec.name, "crossed '" + sec.name.text + "' needs 'dims K'");
    std::vector<GroupRef> gs;
    for (int k = 1; k <= dims; ++k) {
        auto it = level.find(k);
        if (it == level.end())
            fail_tok(path, sec.name,
                     "crossed '" + sec.name.text + "' is missing level " + std::to_string(k));
        gs.push_back(it->second);
    }
    std::vector<GroupHom> bds;
    std::vector<GroupAction> acts;
    for (int k = 2; k <= dims; ++k) {
        auto bit = boundary_lines.find(k);
        if (bit == boundary_lines.end()) {
            bds.push_back(trivial_hom(gs[k - 1], gs[k - 2]));
        } else {
            const Line& l = *bit->second;
            GroupHom h{gs[k - 1], gs[k - 2], {}};
            if ((int)l.tokens.size() - 2 != gs[k - 1]->order)
                fail_tok(path, l.tokens[0], "boundary " + std::to_string(k) + " needs " +
                                                std::to_string(gs[k - 1]->order) + " images");
            for (size_t i = 2; i < l.tokens.size(); ++i)
                h.map.push_back(element_of(path, gs[k - 2], l.tokens[i]));
            bds.push_back(std::move(h));
        }
        auto ait = action_lines.find(k);
        if (ait == action_lines.end()) {
            acts.push_back(trivial_action(gs[0], gs[k - 1]));
        } else {
            if ((int)ait->second.size() != gs[0]->order)
                fail_tok(path, ait->second[0]->tokens[0],
                         "action " + std::to_string(k) + " needs one line per element of level 1");
            GroupAction a{gs[0], gs[k - 1], {}};
            for (const Line* lp : ait->second) {
                if ((int)lp->tokens.size() - 2 != gs[k - 1]->order)
                    fail_tok(path, lp->tokens[0], "action " + std::to_string(k) + " needs " +
                                                      std::to_string(gs[k - 1]->order) +
                                                      " images per line");
                for (size_t i = 2; i < lp->tokens.size(); ++i)
                    a.act_table.push_back(element_of(path, gs[k - 1], lp->tokens[i]));
            }
            acts.push_back(std::move(a));
        }
    }
    return make_crossed_complex(std::move(gs), std::move(bds), std::move(acts), sec.name.text);
}

inline OrderedComplex build_complex(const std::string& path, const RawSection& sec) {
    std::vector<std::string> vertices;
    std::vector<std::vector<Token>> simplex_lines;
    std::vector<Token> basepoint_tokens;
    for (const auto& l : sec.body) {
        const std::string& kw = l.tokens[0].text;
        if (kw == "vertices") {
            for (size_t i = 1; i < l.tokens.size(); ++i) vertices.push_back(l.tokens[i].text);
        } else if (kw == "basepoint") {
            expect_min(path, l, 2);
            for (size_t i = 1; i < l.tokens.size(); ++i) basepoint_tokens.push_back(l.tokens[i]);
        } else if (kw == "simplex") {
            expect_min(path, l, 2);
            simplex_lines.push_back({l.tokens.begin() + 1, l.tokens.end()});
        } else {
            fail_tok(path, l.tokens[0], "unknown directive '" + kw + "' in a complex section");
        }
    }
    if (vertices.empty())
        fail_tok(path, sec.name, "complex '" + sec.name.text + "' has no vertices");
    OrderedComplex stub;
    stub.vertex_names = vertices;
    std::vector<Simplex> maximal;
    for (const auto& toks : simplex_lines) {
        Simplex s;
        for (const auto& t : toks) s.push_back(vertex_of(path, stub, t));
        maximal.push_back(std::move(s));
    }
    std::vector<int> basepoints;
    for (const auto& t : basepoint_tokens) basepoints.push_back(vertex_of(path, stub, t));
    return make_complex(std::move(vertices), maximal, std::move(basepoints));
}

inline OrderedOpenCover build_cover(const std::string& path, const RawSection& sec) {
    OrderedOpenCover u;
    std::vector<std::pair<bool, std::vector<Token>>> families;  // (disconnected?, tokens)
    for (const auto& l : sec.body) {
        const std::string& kw = l.tokens[0].text;
        if (kw == "indices") {
            for (size_t i = 1; i < l.tokens.size(); ++i) u.index_names.push_back(l.tokens[i].text);
        } else if (kw == "nonempty" || kw == "disconnected") {
            expect_min(path, l, 2);
            families.push_back({kw == "disconnected", {l.tokens.begin() + 1, l.tokens.end()}});
        } else {
            fail_tok(path, l.tokens[0], "unknown directive '" + kw + "' in a cover section");
        }
    }
    auto index_of = [&](const Token& t) {
        for (int i = 0; i < (int)u.index_names.size(); ++i)
            if (u.index_names[i] == t.text) return i;
        fail_tok(path, t, "'" + t.text + "' is not an index of the cover");
    };
    for (const auto& [disc, toks] : families) {
        std::set<int> fam;
        for (const auto& t : toks) fam.insert(index_of(t));
        u.nonempty.insert(fam);
        if (disc) u.disconnected.insert(fam);
    }
    return u;
}

inline FormalMap build_map(const std::string& path, const RawSection& sec, const Workspace& w) {
    const OrderedComplex* domain = nullptr;
    CrossedRef into;
    std::vector<const Line*> label_lines;
    for (const auto& l : sec.body) {
        const std::string& kw = l.tokens[0].text;
        if (kw == "domain") {
            expect_min(path, l, 2);
            domain = &resolve(path, w.complexes, "map", sec.name.text, "complex", l.tokens[1]);
        } else if (kw == "into") {
            expect_min(path, l, 2);
            into = resolve(path, w.crossed, "map", sec.name.text, "crossed", l.tokens[1]);
        } else if (kw == "label") {
            label_lines.push_back(&l);
        } else {
            fail_tok(path, l.tokens[0], "unknown directive '" + kw + "' in a map section");
        }
    }
    if (!domain) fail_tok(path, sec.name, "map '" + sec.name.text + "' needs a domain");
    if (!into) fail_tok(path, sec.name, "map '" + sec.name.text + "' needs 'into CROSSED'");
    FormalMap f{*domain, into, {}};
    for (const Line* lp : label_lines) {
        const auto& toks = lp->tokens;
        // label v0 v1 ... = g
        if (toks.size() < 5 || toks[toks.size() - 2].text != "=")
            fail_tok(path, toks[0], "expected 'label v0 v1 ... = g'");
        Simplex s;
        for (size_t i = 1; i + 2 < toks.size(); ++i) s.push_back(vertex_of(path, *domain, toks[i]));
        int dim = (int)s.size() - 1;
        if (dim < 1) fail_tok(path, toks[0], "a label needs at least two vertices");
        f.labels[domain->sorted(s)] = element_of(path, into->group(dim), toks.back());
    }
    return f;
}

inline FormalCobordism build_cobordism(const std::string& path, const RawSection& sec,
                                       const Workspace& w) {
    FormalCobordism c;
    bool have_map = false, have_in = false, have_out = false;
    std::vector<const Line*> inmap_lines, outmap_lines, vertical_lines;
    for (const auto& l : sec.body) {
        const std::string& kw = l.tokens[0].text;
        if (kw == "map") {
            expect_min(path, l, 2);
            c.map = resolve(path, w.maps, "cobordism", sec.name.text, "map", l.tokens[1]);
            have_map = true;
        } else if (kw == "incoming") {
            expect_min(path, l, 2);
            c.incoming = resolve(path, w.maps, "cobordism", sec.name.text, "map", l.tokens[1]);
            have_in = true;
        } else if (kw == "outgoing") {
            expect_min(path, l, 2);
            c.outgoing = resolve(path, w.maps, "cobordism", sec.name.text, "map", l.tokens[1]);
            have_out = true;
        } else if (kw == "inmap") {
            inmap_lines.push_back(&l);
        } else if (kw == "outmap") {
            outmap_lines.push_back(&l);
        } else if (kw == "vertical") {
            if (l.tokens.size() != 3) fail_tok(path, l.tokens[0], "expected 'vertical a b'");
            vertical_lines.push_back(&l);
        } else {
            fail_tok(path, l.tokens[0], "unknown directive '" + kw + "' in a cobordism section");
        }
    }
    if (!have_map || !have_in || !have_out)
        fail_tok(path, sec.name,
                 "cobordism '" + sec.name.text + "' needs map, incoming and outgoing");
    for (const Line* lp : inmap_lines)
        for (size_t i = 1; i < lp->tokens.size(); ++i)
            c.in_map.push_back(vertex_of(path, c.map.domain, lp->tokens[i]));
    for (const Line* lp : outmap_lines)
        for (size_t i = 1; i < lp->tokens.size(); ++i)
            c.out_map.push_back(vertex_of(path, c.map.domain, lp->tokens[i]));
    for (const Line* lp : vertical_lines)
        c.basepoint_verticals.push_back({vertex_of(path, c.map.domain, lp->tokens[1]),
                                         vertex_of(path, c.map.domain, lp->tokens[2])});
    return c;
}

inline CrossedMorphism build_morphism(const std::string& path, const RawSection& sec,
                                      const Workspace& w) {
    CrossedMorphism m;
    std::map<int, const Line*> level_lines;
    for (const auto& l : sec.body) {
        const std::string& kw = l.tokens[0].text;
        if (kw == "source") {
            expect_min(path, l, 2);
            m.source = resolve(path, w.crossed, "morphism", sec.name.text, "crossed", l.tokens[1]);
        } else if (kw == "target") {
            expect_min(path, l, 2);
            m.target = resolve(path, w.crossed, "morphism", sec.name.text, "crossed", l.tokens[1]);
        } else if (kw == "level") {
            expect_min(path, l, 2);
            level_lines[parse_int(path, l.tokens[1])] = &l;
        } else {
            fail_tok(path, l.tokens[0], "unknown directive '" + kw + "' in a morphism section");
        }
    }
    if (!m.source || !m.target)
        fail_tok(path, sec.name, "morphism '" + sec.name.text + "' needs source and target");
    int dmax = std::max(m.source->dims, m.target->dims);
    for (int k = 1; k <= dmax; ++k) {
        auto src = m.source->group(k);
        auto tgt = m.target->group(k);
        auto it = level_lines.find(k);
        if (it == level_lines.end()) {
            m.levels_.push_back(trivial_hom(src, tgt));
            continue;
        }
        const Line& l = *it->second;
        if ((int)l.tokens.size() - 2 != src->order)
            fail_tok(path, l.tokens[0], "level " + std::to_string(k) + " needs " +
                                            std::to_string(src->order) + " images");
        GroupHom h{src, tgt, {}};
        for (size_t i = 2; i < l.tokens.size(); ++i)
            h.map.push_back(element_of(path, tgt, l.tokens[i]));
        m.levels_.push_back(std::move(h));
    }
    return m;
}

inline FHQFTFragment build_fragment(const std::string& path, const RawSection& sec,
                                    const Workspace& w) {
    FHQFTFragment t;
    Matrix* open_matrix = nullptr;
    for (const auto& l : sec.body) {
        const std::string& kw = l.tokens[0].text;
        if (kw == "row") {
            if (!open_matrix)
                fail_tok(path, l.tokens[0], "'row' must follow a cobord, sum or unit line");
            std::vector<Scalar> row;
            for (size_t i = 1; i < l.tokens.size(); ++i)
                row.push_back(parse_scalar(path, l.tokens[i]));
            open_matrix->push_back(std::move(row));
            continue;
        }
        open_matrix = nullptr;
        if (kw == "complex") {
            expect_min(path, l, 2);
            t.complex = resolve(path, w.crossed, "fragment", sec.name.text, "crossed", l.tokens[1]);
        } else if (kw == "object") {
            // object KEY map MAP dim D
            if (l.tokens.size() != 6 || l.tokens[2].text != "map" || l.tokens[4].text != "dim")
                fail_tok(path, l.tokens[0], "expected 'object KEY map MAP dim D'");
            FHQFTFragment::ObjectEntry ob;
            ob.map = resolve(path, w.maps, "fragment", sec.name.text, "map", l.tokens[3]);
            ob.dim = parse_int(path, l.tokens[5]);
            t.objects[l.tokens[1].text] = std::move(ob);
        } else if (kw == "cobord") {
            // cobord KEY source KEY target KEY [via COBORDISM]
            bool via = l.tokens.size() == 8 && l.tokens[6].text == "via";
            if (!(via || l.tokens.size() == 6) || l.tokens[2].text != "source" ||
                l.tokens[4].text != "target")
                fail_tok(path, l.tokens[0],
                         "expected 'cobord KEY source KEY target KEY [via COBORDISM]'");
            FHQFTFragment::CobordEntry cb;
            cb.source = l.tokens[3].text;
            cb.target = l.tokens[5].text;
            if (via)
                cb.cobordism =
                    resolve(path, w.cobordisms, "fragment", sec.name.text, "cobordism", l.tokens[7]);
            auto& slot = t.cobords[l.tokens[1].text];
            slot = std::move(cb);
            open_matrix = &slot.matrix;
        } else if (kw == "identity") {
            expect_min(path, l, 2);
            t.identities.push_back(l.tokens[1].text);
        } else if (kw == "composite") {
            if (l.tokens.size() != 4)
                fail_tok(path, l.tokens[0], "expected 'composite FIRST SECOND COMPOSITE'");
            t.composites.push_back({l.tokens[1].text, l.tokens[2].text, l.tokens[3].text});
        } else if (kw == "sum") {
            if (l.tokens.size() != 4)
                fail_tok(path, l.tokens[0], "expected 'sum WHOLE LEFT RIGHT'");
            t.sums.push_back({l.tokens[1].text, l.tokens[2].text, l.tokens[3].text, {}});
            open_matrix = &t.sums.back().iso;
        } else if (kw == "unit") {
            if (l.tokens.size() != 3) fail_tok(path, l.tokens[0], "expected 'unit KEY SCALAR'");
            t.unit_key = l.tokens[1].text;
            t.unit_iso = scalar_matrix(parse_scalar(path, l.tokens[2]));
        } else if (kw == "interchange") {
            if (l.tokens.size() != 4)
                fail_tok(path, l.tokens[0], "expected 'interchange LAMBDA GAMMA WHOLE'");
            t.interchanges.push_back({l.tokens[1].text, l.tokens[2].text, l.tokens[3].text});
        } else {
            fail_tok(path, l.tokens[0], "unknown directive '" + kw + "' in a fragment section");
        }
    }
    if (!t.complex)
        fail_tok(path, sec.name, "fragment '" + sec.name.text + "' needs 'complex CROSSED'");
    for (const auto& [key, cb] : t.cobords) {
        if (!t.objects.count(cb.source))
            throw ParseError("fragment '" + sec.name.text + "' cobordism '" + key +
                             "' refers to unknown object '" + cb.source + "'");
        if (!t.objects.count(cb.target))
            throw ParseError("fragment '" + sec.name.text + "' cobordism '" + key +
                             "' refers to unknown object '" + cb.target + "'");
    }
    return t;
}

// A cobordism need not be an equivalence witness (its basepoint verticals
// may carry non-identity labels, as fibre-translation cylinders do), so this
// checks structure only: the total map is valid, both ends restrict
// correctly, and the recorded verticals are labeled edges of the cylinder.
inline ValidationReport validate_cobordism_structure(const FormalCobordism& c) {
    ValidationReport r;
    try {
        r.merge(validate_formal_map(c.map), "cylinder");
    } catch (const StructuralError& e) {
        r.fail(std::string("cylinder: ") + e.what());
        return r;
    }
    check_end_restriction(r, "incoming", c.map, c.in_map, c.incoming);
    check_end_restriction(r, "outgoing", c.map, c.out_map, c.outgoing);
    for (auto [a, b] : c.basepoint_verticals)
        if (!c.map.labels.count(c.map.domain.sorted({a, b})))
            r.fail("basepoint vertical missing from the cylinder");
    return r;
}

}  // namespace ws_detail

inline Workspace parse_workspace(std::istream& in, const std::string& path) {
    using namespace ws_detail;
    auto sections = split_sections(tokenize(in, path), path);
    Workspace w;
    std::set<std::string> seen;
    for (const auto& sec : sections) {
        if (!seen.insert(sec.name.text).second)
            fail_tok(path, sec.name, "duplicate entity name '" + sec.name.text + "'");
        w.order.push_back({sec.kind, sec.name.text});
    }
    // Resolution happens kind by kind in dependency order, so sections may
    // appear in any order in the file.
    for (const auto& sec : sections)
        if (sec.kind == "group") w.groups[sec.name.text] = build_group(path, sec);
    for (const auto& sec : sections)
        if (sec.kind == "crossed") w.crossed[sec.name.text] = build_crossed(path, sec, w.groups);
    for (const auto& sec : sections) {
        if (sec.kind == "complex") w.complexes[sec.name.text] = build_complex(path, sec);
        if (sec.kind == "cover") w.covers[sec.name.text] = build_cover(path, sec);
    }
    for (const auto& sec : sections)
        if (sec.kind == "map") w.maps[sec.name.text] = build_map(path, sec, w);
    for (const auto& sec : sections) {
        if (sec.kind == "cobordism") w.cobordisms[sec.name.text] = build_cobordism(path, sec, w);
        if (sec.kind == "morphism") w.morphisms[sec.name.text] = build_morphism(path, sec, w);
    }
    for (const auto& sec : sections)
        if (sec.kind == "fragment") w.fragments[sec.name.text] = build_fragment(path, sec, w);

    // Some validators throw on structural holes (e.g. a map with a missing
    // label); fold those into the aggregate report too.
    auto guarded = [&](const std::string& prefix, auto&& check) {
        try {
            w.report.merge(check(), prefix);
        } catch (const StructuralError& e) {
            w.report.fail(prefix + ": " + e.what());
        }
    };
    for (const auto& [name, g] : w.groups)
        guarded("group '" + name + "'", [&, g = g] { return validate_group(*g); });
    for (const auto& [name, c] : w.crossed)
        guarded("crossed '" + name + "'", [&, c = c] { return validate_crossed_complex(*c); });
    for (const auto& [name, k] : w.complexes)
        guarded("complex '" + name + "'", [&, &k = k] { return validate_complex(k); });
    for (const auto& [name, u] : w.covers)
        guarded("cover '" + name + "'", [&, &u = u] { return validate_complex(nerve_of_cover(u)); });
    for (const auto& [name, f] : w.maps)
        guarded("map '" + name + "'", [&, &f = f] { return validate_formal_map(f); });
    for (const auto& [name, c] : w.cobordisms)
        guarded("cobordism '" + name + "'",
                [&, &c = c] { return ws_detail::validate_cobordism_structure(c); });
    for (const auto& [name, m] : w.morphisms)
        guarded("morphism '" + name + "'", [&, &m = m] { return validate_crossed_morphism(m); });
    for (const auto& [name, t] : w.fragments)
        guarded("fragment '" + name + "'", [&, &t = t] { return validate_fragment(t); });
    return w;
}

inline Workspace load_workspace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open workspace file '" + path + "'");
    return parse_workspace(in, path);
}

// ----- serialization (used by the command-line driver's emitted sections) -----

inline std::string scalar_to_string(const Scalar& s) {
    std::ostringstream out;
    out << s.numerator();
    if (s.denominator() != 1) out << "/" << s.denominator();
    return out.str();
}

inline void write_complex_section(std::ostream& out, const std::string& name,
                                  const OrderedComplex& k) {
    out << "complex " << name << "\n";
    // vertices listed in rank order so a reload reproduces the same order
    std::vector<int> by_rank(k.vertex_count());
    std::iota(by_rank.begin(), by_rank.end(), 0);
    std::sort(by_rank.begin(), by_rank.end(), [&](int u, int v) { return k.less(u, v); });
    out << "  vertices";
    for (int v : by_rank) out << " " << k.vertex_names[v];
    out << "\n";
    for (int b : k.basepoints) out << "  basepoint " << k.vertex_names[b] << "\n";
    for (const auto& s : k.simplices) {
        if (s.size() < 2) continue;
        bool maximal = true;
        for (int v = 0; v < k.vertex_count() && maximal; ++v) {
            if (std::find(s.begin(), s.end(), v) != s.end()) continue;
            Simplex bigger = s;
            bigger.push_back(v);
            if (k.has(bigger)) maximal = false;
        }
        if (!maximal) continue;
        out << "  simplex";
        for (int v : s) out << " " << k.vertex_names[v];
        out << "\n";
    }
    out << "end\n";
}

inline void write_map_section(std::ostream& out, const std::string& name,
                              const std::string& domain_name, const std::string& crossed_name,
                              const FormalMap& f) {
    out << "map " << name << "\n";
    out << "  domain " << domain_name << "\n";
    out << "  into " << crossed_name << "\n";
    for (const auto& [s, v] : f.labels) {
        out << "  label";
        for (int vert : s) out << " " << f.domain.vertex_names[vert];
        out << " = " << f.complex->group((int)s.size() - 1)->names[v] << "\n";
    }
    out << "end\n";
}

}  // namespace fmc
