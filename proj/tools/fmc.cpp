// Command-line driver for workspace files.
//
//   fmc [--report] <workspace> <command> [args...]
//
// Commands:
//   list
//   validate [NAME]
//   transport reorder MAP R0 R1 ...
//   transport subdivide MAP [V0 V1]
//   homotopy MAP MAP
//   enumerate nerve CROSSED DIM
//   bundle MAP
//   hqft validate FRAGMENT
//   hqft push FRAGMENT MORPHISM MAP
//
// Exit codes: 0 success, 1 validation failure, 2 usage or structural error,
// 3 search budget exceeded.  Output is deterministic: identical inputs give
// byte-identical output, in both plain and --report mode.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fmc/nerve.hpp"
#include "fmc/workspace.hpp"

namespace {

constexpr int kOk = 0, kInvalid = 1, kUsage = 2, kBudget = 3;

long cli_budget() {
    if (const char* env = std::getenv("FMC_ENUM_BUDGET")) {
        long v = std::atol(env);
        if (v > 0) return v;
    }
    return 1000000;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Driver {
    fmc::Workspace ws;
    bool report = false;
    std::ostream& out = std::cout;

    void header(const std::string& command) {
        if (report) out << "fmc-report 1\ncommand " << command << "\n";
    }
    int finish(bool ok) {
        if (report) out << "status " << (ok ? "ok" : "fail") << "\n";
        return ok ? kOk : kInvalid;
    }

    const fmc::FormalMap& map_arg(const std::string& name) {
        auto it = ws.maps.find(name);
        if (it == ws.maps.end()) throw UsageError("unknown map '" + name + "'");
        return it->second;
    }

    void print_report(const std::string& prefix, const fmc::ValidationReport& r) {
        if (report) {
            for (const auto& v : r.violations) out << "violation " << prefix << ": " << v << "\n";
        } else {
            if (r.ok())
                out << prefix << ": ok\n";
            else
                for (const auto& v : r.violations) out << prefix << ": " << v << "\n";
        }
    }

    int cmd_list() {
        header("list");
        for (const auto& [kind, name] : ws.order)
            out << (report ? "entity " : "") << kind << " " << name << "\n";
        return finish(true);
    }

    fmc::ValidationReport validate_one(const std::string& kind, const std::string& name) {
        try {
            return validate_one_inner(kind, name);
        } catch (const fmc::StructuralError& e) {
            fmc::ValidationReport r;
            r.fail(e.what());
            return r;
        }
    }

    fmc::ValidationReport validate_one_inner(const std::string& kind, const std::string& name) {
        using namespace fmc;
        if (kind == "group") return validate_group(*ws.groups.at(name));
        if (kind == "crossed") return validate_crossed_complex(*ws.crossed.at(name));
        if (kind == "complex") return validate_complex(ws.complexes.at(name));
        if (kind == "cover") {
            ValidationReport r;
            try {
                r.merge(validate_complex(nerve_of_cover(ws.covers.at(name))));
            } catch (const StructuralError& e) {
                r.fail(e.what());
            }
            return r;
        }
        if (kind == "map") return validate_formal_map(ws.maps.at(name));
        if (kind == "cobordism")
            return ws_detail::validate_cobordism_structure(ws.cobordisms.at(name));
        if (kind == "morphism") return validate_crossed_morphism(ws.morphisms.at(name));
        return validate_fragment(ws.fragments.at(name));
    }

    int cmd_validate(const std::vector<std::string>& args) {
        header("validate");
        bool ok = true;
        if (args.empty()) {
            for (const auto& [kind, name] : ws.order) {
                auto r = validate_one(kind, name);
                ok = ok && r.ok();
                if (report)
                    out << "entity " << kind << " " << name << " " << (r.ok() ? "ok" : "fail")
                        << "\n";
                print_report(kind + " '" + name + "'", r);
            }
            if (!report) out << "workspace: " << (ok ? "ok" : "invalid") << "\n";
        } else {
            std::string found_kind;
            for (const auto& [kind, name] : ws.order)
                if (name == args[0]) found_kind = kind;
            if (found_kind.empty()) throw UsageError("unknown entity '" + args[0] + "'");
            auto r = validate_one(found_kind, args[0]);
            ok = r.ok();
            print_report(found_kind + " '" + args[0] + "'", r);
        }
        return finish(ok);
    }

    int cmd_enumerate(const std::vector<std::string>& args) {
        if (args.size() != 3 || args[0] != "nerve")
            throw UsageError("usage: enumerate nerve CROSSED DIM");
        auto it = ws.crossed.find(args[1]);
        if (it == ws.crossed.end()) throw UsageError("unknown crossed complex '" + args[1] + "'");
        int dim = std::atoi(args[2].c_str());
        if (dim < 0) throw UsageError("dimension must be non-negative");
        header("enumerate");
        auto simplices = fmc::enumerate_simplices(it->second, dim, cli_budget());
        if (report)
            out << "dimension " << dim << "\ncount " << simplices.size() << "\n";
        else
            out << simplices.size() << "\n";
        return finish(true);
    }

    int cmd_homotopy(const std::vector<std::string>& args) {
        if (args.size() != 2) throw UsageError("usage: homotopy MAP MAP");
        const auto& f0 = map_arg(args[0]);
        const auto& f1 = map_arg(args[1]);
        header("homotopy");
        auto witness = fmc::search_simplicial_homotopy(f0, f1, cli_budget());
        bool found = witness.has_value();
        if (found) found = fmc::check_equivalence_witness(*witness, f0, f1).ok();
        if (report)
            out << "homotopic " << (found ? "yes" : "no") << "\n";
        else
            out << (found ? "homotopic" : "no homotopy over the standard cylinder") << "\n";
        return finish(found);
    }

    void emit_transported(const std::string& name, const fmc::FormalMap& g,
                          const std::string& crossed_name) {
        if (report) {
            for (const auto& [s, v] : g.labels)
                out << "label " << fmc::seq_name(g.domain, s) << " "
                    << g.complex->group((int)s.size() - 1)->names[v] << "\n";
        } else {
            fmc::write_complex_section(out, name + ".domain", g.domain);
            fmc::write_map_section(out, name, name + ".domain", crossed_name, g);
        }
    }

    std::string crossed_name_of(const fmc::CrossedRef& c) {
        for (const auto& [name, cc] : ws.crossed)
            if (cc == c) return name;
        return "?";
    }

    int cmd_transport(const std::vector<std::string>& args) {
        if (args.empty()) throw UsageError("usage: transport reorder|subdivide MAP ...");
        const std::string& mode = args[0];
        if (mode == "reorder") {
            if (args.size() < 2) throw UsageError("usage: transport reorder MAP R0 R1 ...");
            const auto& f = map_arg(args[1]);
            std::vector<int> ranks;
            for (size_t i = 2; i < args.size(); ++i) ranks.push_back(std::atoi(args[i].c_str()));
            if ((int)ranks.size() != f.domain.vertex_count())
                throw UsageError("expected one rank per vertex (" +
                                 std::to_string(f.domain.vertex_count()) + ")");
            header("transport");
            auto [g, w] = fmc::transport_reorder(f, ranks, cli_budget());
            bool ok = fmc::check_equivalence_witness(w, f, g).ok();
            out << (report ? "witness " : "witness: ") << (ok ? "ok" : "fail") << "\n";
            emit_transported(args[1] + ".reordered", g, crossed_name_of(f.complex));
            return finish(ok);
        }
        if (mode == "subdivide") {
            if (args.size() != 2 && args.size() != 4)
                throw UsageError("usage: transport subdivide MAP [V0 V1]");
            const auto& f = map_arg(args[1]);
            fmc::SubdivisionResult sub;
            if (args.size() == 2) {
                sub = fmc::barycentric_subdivide(f.domain);
            } else {
                fmc::Simplex edge;
                for (size_t i = 2; i < args.size(); ++i) {
                    int v = -1;
                    for (int u = 0; u < f.domain.vertex_count(); ++u)
                        if (f.domain.vertex_names[u] == args[i]) v = u;
                    if (v < 0) throw UsageError("unknown vertex '" + args[i] + "'");
                    edge.push_back(v);
                }
                sub = fmc::stellar_subdivide_edge(f.domain, f.domain.sorted(edge));
            }
            header("transport");
            auto [g, w] = fmc::transport_subdivide(f, sub, cli_budget());
            bool ok = fmc::check_equivalence_witness(w, f, g).ok();
            out << (report ? "witness " : "witness: ") << (ok ? "ok" : "fail") << "\n";
            emit_transported(args[1] + ".subdivided", g, crossed_name_of(f.complex));
            return finish(ok);
        }
        throw UsageError("unknown transport mode '" + mode + "'");
    }

    int cmd_bundle(const std::vector<std::string>& args) {
        if (args.size() != 1) throw UsageError("usage: bundle MAP");
        const auto& f = map_arg(args[0]);
        header("bundle");
        auto tp = fmc::twisted_product(f);
        auto r = fmc::verify_principal(tp);
        int components = fmc::total_space_components(tp);
        int edges = 0;
        for (int s = 0; s < (int)tp.cells[1].size(); ++s)
            if (tp.total.nondeg[1][s]) ++edges;
        if (report) {
            out << "principal " << (r.ok() ? "ok" : "fail") << "\n";
            for (const auto& v : r.violations) out << "violation " << v << "\n";
            out << "components " << components << "\n";
            out << "nondegenerate-edges " << edges << "\n";
            for (int n = 0; n <= tp.total.cap; ++n)
                out << "cells " << n << " " << tp.cells[n].size() << "\n";
        } else {
            print_report("principal", r);
            out << "components: " << components << "\n";
            out << "nondegenerate edges: " << edges << "\n";
            emit_total_complex(args[0], tp);
        }
        return finish(r.ok());
    }

    void emit_total_complex(const std::string& name, const fmc::TwistedProduct& tp) {
        // Recover an ordered complex from the nondegenerate total cells by
        // reading off each cell's vertices through iterated faces.
        const auto& x = tp.total;
        std::vector<fmc::Simplex> maximal;
        for (int n = 1; n <= x.cap; ++n)
            for (int s = 0; s < (int)tp.cells[n].size(); ++s) {
                if (!x.nondeg[n][s]) continue;
                fmc::Simplex verts;
                std::set<int> seen;
                for (int j = 0; j <= n; ++j) {
                    int cell = s, lev = n;
                    while (lev > j) {
                        cell = x.face[lev][cell][lev];
                        --lev;
                    }
                    while (lev > 0) {
                        cell = x.face[lev][cell][0];
                        --lev;
                    }
                    verts.push_back(cell);
                    seen.insert(cell);
                }
                if ((int)seen.size() != n + 1) {
                    out << "# total space has a nondegenerate cell with repeated vertices; "
                           "no complex emitted\n";
                    return;
                }
                maximal.push_back(std::move(verts));
            }
        auto k = fmc::make_complex(x.names[0], maximal);
        fmc::write_complex_section(out, name + ".total", k);
    }

    int cmd_hqft(const std::vector<std::string>& args) {
        if (args.empty()) throw UsageError("usage: hqft validate|push ...");
        if (args[0] == "validate") {
            if (args.size() != 2) throw UsageError("usage: hqft validate FRAGMENT");
            auto it = ws.fragments.find(args[1]);
            if (it == ws.fragments.end()) throw UsageError("unknown fragment '" + args[1] + "'");
            header("hqft");
            auto r = fmc::validate_fragment(it->second);
            print_report("fragment '" + args[1] + "'", r);
            return finish(r.ok());
        }
        if (args[0] == "push") {
            if (args.size() != 4) throw UsageError("usage: hqft push FRAGMENT MORPHISM MAP");
            auto ft = ws.fragments.find(args[1]);
            if (ft == ws.fragments.end()) throw UsageError("unknown fragment '" + args[1] + "'");
            auto mt = ws.morphisms.find(args[2]);
            if (mt == ws.morphisms.end()) throw UsageError("unknown morphism '" + args[2] + "'");
            const auto& lambda = map_arg(args[3]);
            header("hqft");
            auto res = fmc::pushforward(mt->second, ft->second, lambda, cli_budget());
            const char* sep = report ? " " : ": ";
            out << "lifts" << sep << res.lifts.size() << "\n";
            for (size_t i = 0; i < res.lift_keys.size(); ++i)
                out << "lift " << res.lift_keys[i] << " dim " << res.dims[i] << "\n";
            out << "total" << sep << res.total_dim << "\n";
            out << "relation-rank" << sep << res.relation_rank << "\n";
            out << "rank" << sep << res.rank << "\n";
            return finish(true);
        }
        throw UsageError("unknown hqft command '" + args[0] + "'");
    }

    int run(const std::vector<std::string>& args) {
        if (args.empty()) throw UsageError("no command given");
        const std::string& cmd = args[0];
        std::vector<std::string> rest(args.begin() + 1, args.end());
        if (cmd == "list") return cmd_list();
        if (cmd == "validate") return cmd_validate(rest);
        if (cmd == "transport") return cmd_transport(rest);
        if (cmd == "homotopy") return cmd_homotopy(rest);
        if (cmd == "enumerate") return cmd_enumerate(rest);
        if (cmd == "bundle") return cmd_bundle(rest);
        if (cmd == "hqft") return cmd_hqft(rest);
        throw UsageError("unknown command '" + cmd + "'");
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"formal-map calculus workspace driver"};
    bool report = false;
    std::string workspace_path;
    std::vector<std::string> command;
    app.add_flag("--report", report, "emit a stable machine-readable report");
    app.add_option("workspace", workspace_path, "workspace file")->required();
    app.add_option("command", command, "command and arguments");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kUsage : kOk;
    }
    try {
        Driver d{fmc::load_workspace(workspace_path), report};
        return d.run(command);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const fmc::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBudget;
    } catch (const fmc::StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
