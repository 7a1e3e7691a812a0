#pragma once

// Command line front end. Every command parses JSON inputs, embeds its full
// run configuration in each artifact, and writes atomically, so identical
// invocations produce identical bytes. Exit codes: 0 success, 1 property
// failure, 2 input error, 3 inconclusive at the given scale or caps.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "build.hpp"
#include "dot.hpp"
#include "hyperbolicity.hpp"
#include "json_io.hpp"
#include "splitting.hpp"

namespace amalg {
namespace cli {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kBadInput = 2;
constexpr int kInconclusive = 3;

namespace detail {

inline std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

struct Emitter {
    std::string outDir;
    std::string dotDir;

    void json(const std::string& name, const ordered_json& j) const {
        if (outDir.empty()) {
            std::cout << j.dump(2) << "\n";
            return;
        }
        std::filesystem::create_directories(outDir);
        std::string p = (std::filesystem::path(outDir) / name).string();
        write_json_atomic(p, j);
        std::cout << "wrote " << p << "\n";
    }

    void dot(const std::string& name, const std::string& text) const {
        if (dotDir.empty()) return;
        std::filesystem::create_directories(dotDir);
        std::string p = (std::filesystem::path(dotDir) / name).string();
        write_text_atomic(p, text);
        std::cout << "wrote " << p << "\n";
    }
};

}  // namespace detail

inline int run(int argc, const char* const* argv) {
    CLI::App app{"analyses over tree amalgamations of graphs"};
    app.require_subcommand(1);

    std::string specPath, graphPath, tdPath;
    int radius = 3;
    int scale = 1;
    unsigned seed = 1;
    int depth = 3;
    std::size_t cap = 100000;
    std::string outDir, dotDir;

    auto addIo = [&](CLI::App* sub) {
        sub->add_option("--out", outDir, "directory for JSON artifacts (default: print to stdout)");
        sub->add_option("--dot", dotDir, "directory for DOT artifacts");
    };

    CLI::App* cmdValidate = app.add_subcommand("validate", "check a spec, graph, or decomposition file");
    cmdValidate->add_option("--spec", specPath, "amalgamation data file");
    cmdValidate->add_option("--graph", graphPath, "graph file");
    cmdValidate->add_option("--td", tdPath, "tree-decomposition file");
    addIo(cmdValidate);

    CLI::App* cmdBuild = app.add_subcommand("build", "build the truncated amalgam of a spec");
    cmdBuild->add_option("--spec", specPath)->required();
    cmdBuild->add_option("-R,--radius", radius, "tree radius");
    cmdBuild->add_option("--seed", seed, "labelling seed");
    addIo(cmdBuild);

    CLI::App* cmdVerifyTd = app.add_subcommand("verify-td", "check decomposition axioms against a graph");
    cmdVerifyTd->add_option("--graph", graphPath)->required();
    cmdVerifyTd->add_option("--td", tdPath)->required();
    addIo(cmdVerifyTd);

    CLI::App* cmdClosure = app.add_subcommand("closure", "geodesically close a decomposition");
    cmdClosure->add_option("--graph", graphPath)->required();
    cmdClosure->add_option("--td", tdPath)->required();
    addIo(cmdClosure);

    CLI::App* cmdSplit = app.add_subcommand("split", "find an invariant separation of a build");
    cmdSplit->add_option("--spec", specPath)->required();
    cmdSplit->add_option("-R,--radius", radius);
    cmdSplit->add_option("--seed", seed);
    cmdSplit->add_option("-k,--scale", scale, "separator size bound");
    cmdSplit->add_option("--cap", cap, "separator enumeration cap");
    addIo(cmdSplit);

    CLI::App* cmdFactorise = app.add_subcommand("factorise", "split repeatedly until terminal factors");
    cmdFactorise->add_option("--spec", specPath)->required();
    cmdFactorise->add_option("-R,--radius", radius);
    cmdFactorise->add_option("--seed", seed);
    cmdFactorise->add_option("-k,--scale", scale);
    cmdFactorise->add_option("--depth", depth, "maximum split depth");
    cmdFactorise->add_option("--cap", cap);
    addIo(cmdFactorise);

    CLI::App* cmdEnds = app.add_subcommand("ends", "end regions past a tight separator");
    cmdEnds->add_option("--spec", specPath, "build a spec and analyse the patch");
    cmdEnds->add_option("--graph", graphPath, "analyse a plain graph instead");
    cmdEnds->add_option("-R,--radius", radius);
    cmdEnds->add_option("--seed", seed);
    cmdEnds->add_option("-k,--scale", scale);
    cmdEnds->add_option("--cap", cap);
    addIo(cmdEnds);

    CLI::App* cmdSeparators = app.add_subcommand("separators", "list tight separators up to a size bound");
    cmdSeparators->add_option("--spec", specPath);
    cmdSeparators->add_option("--graph", graphPath);
    cmdSeparators->add_option("-R,--radius", radius);
    cmdSeparators->add_option("--seed", seed);
    cmdSeparators->add_option("-k,--scale", scale);
    cmdSeparators->add_option("--cap", cap);
    addIo(cmdSeparators);

    CLI::App* cmdHyper = app.add_subcommand("hyperbolicity", "thinness constant and quasi-geodesic check");
    cmdHyper->add_option("--spec", specPath, "run the build experiment");
    cmdHyper->add_option("--graph", graphPath, "measure a plain graph");
    cmdHyper->add_option("-R,--radius", radius);
    cmdHyper->add_option("--seed", seed);
    addIo(cmdHyper);

    CLI::App* cmdRoundtrip = app.add_subcommand("roundtrip", "split a build and rebuild from the result");
    cmdRoundtrip->add_option("--spec", specPath)->required();
    cmdRoundtrip->add_option("-R,--radius", radius);
    cmdRoundtrip->add_option("--seed", seed);
    cmdRoundtrip->add_option("-k,--scale", scale);
    cmdRoundtrip->add_option("--cap", cap);
    addIo(cmdRoundtrip);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    detail::Emitter emit{outDir, dotDir};
    auto runcfg = [&](const std::string& command, std::initializer_list<std::string> params) {
        ordered_json rc;
        rc["command"] = command;
        if (!specPath.empty()) rc["spec"] = specPath;
        if (!graphPath.empty()) rc["graph"] = graphPath;
        if (!tdPath.empty()) rc["td"] = tdPath;
        for (const std::string& p : params) {
            if (p == "radius") rc["radius"] = radius;
            if (p == "seed") rc["seed"] = seed;
            if (p == "scale") rc["scale"] = scale;
            if (p == "depth") rc["depth"] = depth;
            if (p == "cap") rc["cap"] = cap;
        }
        if (!outDir.empty()) rc["out"] = outDir;
        if (!dotDir.empty()) rc["dot"] = dotDir;
        return rc;
    };

    try {
        if (app.got_subcommand(cmdValidate)) {
            int given = (!specPath.empty()) + (!graphPath.empty()) + (!tdPath.empty());
            if (given != 1) throw InputError("validate needs exactly one of --spec, --graph, --td");
            ordered_json body;
            body["run"] = runcfg("validate", {});
            bool ok = true;
            std::string name;
            if (!specPath.empty()) {
                AmalgamationSpec spec = spec_from_json(read_json_file(specPath));
                ValidationReport rep = validate_spec(spec);
                ok = rep.ok();
                body["report"] = validation_to_json(rep);
                if (ok) body["trivial"] = is_trivial(spec);
                name = detail::stem(specPath);
            } else if (!graphPath.empty()) {
                FiniteGraph g = graph_from_json(read_json_file(graphPath));
                ValidationReport rep = validate_graph(g);
                ok = rep.ok();
                body["report"] = validation_to_json(rep);
                name = detail::stem(graphPath);
            } else {
                TreeDecomposition td = td_from_json(read_json_file(tdPath));
                ordered_json rep;
                bool tree = is_tree(td.tree);
                bool sorted = true;
                for (const auto& part : td.parts)
                    if (!std::is_sorted(part.begin(), part.end())) sorted = false;
                rep["tree"] = tree;
                rep["partsSorted"] = sorted;
                ok = tree && sorted;
                rep["ok"] = ok;
                body["report"] = std::move(rep);
                name = detail::stem(tdPath);
            }
            emit.json(name + ".validate.json", body);
            return ok ? kOk : kFail;
        }

        if (app.got_subcommand(cmdBuild)) {
            SpecBundle b = spec_bundle_from_json(read_json_file(specPath));
            BuildResult build = build_amalgam(b.spec, build_tree_patch(b.spec, radius, seed));
            ordered_json body;
            body["run"] = runcfg("build", {"radius", "seed"});
            body["build"] = build_to_json(build);
            std::string name = detail::stem(specPath);
            emit.json(name + ".build.json", body);
            emit.dot(name + ".build.patch.dot", dot_patch(build.patch, b.spec.name));
            emit.dot(name + ".build.parts.dot", dot_td(build.inducedTd, b.spec.name + " parts"));
            return kOk;
        }

        if (app.got_subcommand(cmdVerifyTd)) {
            FiniteGraph g = graph_from_json(read_json_file(graphPath));
            TreeDecomposition td = td_from_json(read_json_file(tdPath));
            TdReport rep = verify_td(g, td);
            ordered_json body;
            body["run"] = runcfg("verify-td", {});
            body["report"] = td_report_to_json(rep);
            emit.json(detail::stem(tdPath) + ".verify.json", body);
            return rep.ok() ? kOk : kFail;
        }

        if (app.got_subcommand(cmdClosure)) {
            FiniteGraph g = graph_from_json(read_json_file(graphPath));
            TreeDecomposition td = td_from_json(read_json_file(tdPath));
            TdReport pre = verify_td(g, td);
            if (!pre.ok()) {
                ordered_json body;
                body["run"] = runcfg("closure", {});
                body["input"] = td_report_to_json(pre);
                emit.json(detail::stem(tdPath) + ".closure.json", body);
                return kFail;
            }
            TreeDecomposition closed = geodesic_closure(g, td);
            TdReport post = verify_td(g, closed);
            ConnectedPartsReport parts = check_connected_parts(g, closed);
            ordered_json body;
            body["run"] = runcfg("closure", {});
            body["td"] = td_to_json(closed);
            body["report"] = td_report_to_json(post);
            body["allAdhesionsConnected"] = parts.allAdhesionsConnected;
            body["allPartsConnected"] = parts.allPartsConnected;
            emit.json(detail::stem(tdPath) + ".closure.json", body);
            emit.dot(detail::stem(tdPath) + ".closure.dot", dot_td(closed));
            return post.ok() && parts.allAdhesionsConnected && parts.allPartsConnected ? kOk : kFail;
        }

        if (app.got_subcommand(cmdSplit)) {
            SpecBundle b = spec_bundle_from_json(read_json_file(specPath));
            BuildResult build = build_amalgam(b.spec, build_tree_patch(b.spec, radius, seed));
            DerivedAction derived = derive_host_action(b.spec, build, b.side1, b.side2);
            SplitResult res = stallings_split(build.patch, derived.action, scale, cap);
            ordered_json body;
            body["run"] = runcfg("split", {"radius", "seed", "scale", "cap"});
            body["actionNotes"] = derived.notes;
            body["split"] = split_to_json(res);
            std::string name = detail::stem(specPath);
            emit.json(name + ".split.json", body);
            if (res.status == SplitStatus::Split) emit.dot(name + ".split.dot", dot_td(res.td));
            return res.status == SplitStatus::Split ? kOk : kInconclusive;
        }

        if (app.got_subcommand(cmdFactorise)) {
            SpecBundle b = spec_bundle_from_json(read_json_file(specPath));
            BuildResult build = build_amalgam(b.spec, build_tree_patch(b.spec, radius, seed));
            DerivedAction derived = derive_host_action(b.spec, build, b.side1, b.side2);
            FactorisationResult res = terminal_factorisation(build.patch, derived.action, scale, depth, cap);
            ordered_json body;
            body["run"] = runcfg("factorise", {"radius", "seed", "scale", "depth", "cap"});
            body["factorisation"] = factorisation_to_json(res);
            emit.json(detail::stem(specPath) + ".factorise.json", body);
            return res.allTerminal ? kOk : kInconclusive;
        }

        if (app.got_subcommand(cmdEnds) || app.got_subcommand(cmdSeparators)) {
            bool endsMode = app.got_subcommand(cmdEnds);
            if (specPath.empty() == graphPath.empty())
                throw InputError("give exactly one of --spec (build) or --graph");
            Patch patch;
            std::string name;
            if (!specPath.empty()) {
                SpecBundle b = spec_bundle_from_json(read_json_file(specPath));
                patch = build_amalgam(b.spec, build_tree_patch(b.spec, radius, seed)).patch;
                name = detail::stem(specPath);
            } else {
                patch = Patch::whole_graph(graph_from_json(read_json_file(graphPath)));
                name = detail::stem(graphPath);
            }
            TightSeparatorList seps = tight_separators(patch.graph, scale, cap, patch.boundary);
            ordered_json body;
            body["run"] = runcfg(endsMode ? "ends" : "separators", {"radius", "seed", "scale", "cap"});
            if (!endsMode) {
                ordered_json sets = ordered_json::array();
                for (const TightSeparator& s : seps.separators) sets.push_back(s.vertices);
                body["separators"] = std::move(sets);
                body["truncated"] = seps.truncated;
                emit.json(name + ".separators.json", body);
                return kOk;
            }
            if (seps.separators.empty()) {
                body["message"] = "no tight separator at this scale";
                emit.json(name + ".ends.json", body);
                return kInconclusive;
            }
            const std::vector<int>& sep = seps.separators.front().vertices;
            std::vector<EndRegion> regions = ends_at_scale(patch, sep);
            body["separator"] = sep;
            body["regions"] = ends_to_json(regions);
            ordered_json degrees = ordered_json::array();
            for (const EndRegion& r : regions)
                if (r.reachesBoundary) degrees.push_back(end_degree_estimate(patch, r, sep));
            body["endDegrees"] = std::move(degrees);
            emit.json(name + ".ends.json", body);
            return kOk;
        }

        if (app.got_subcommand(cmdHyper)) {
            if (specPath.empty() == graphPath.empty())
                throw InputError("give exactly one of --spec (experiment) or --graph (measure)");
            ordered_json body;
            if (!graphPath.empty()) {
                FiniteGraph g = graph_from_json(read_json_file(graphPath));
                body["run"] = runcfg("hyperbolicity", {});
                body["delta"] = delta_to_json(delta_thin(g));
                emit.json(detail::stem(graphPath) + ".hyperbolicity.json", body);
                return kOk;
            }
            SpecBundle b = spec_bundle_from_json(read_json_file(specPath));
            HyperbolicityExperiment rep = amalgam_hyperbolicity_experiment(b.spec, radius, seed);
            body["run"] = runcfg("hyperbolicity", {"radius", "seed"});
            body["experiment"] = experiment_to_json(rep);
            emit.json(detail::stem(specPath) + ".hyperbolicity.json", body);
            return rep.violations == 0 ? kOk : kFail;
        }

        if (app.got_subcommand(cmdRoundtrip)) {
            SpecBundle b = spec_bundle_from_json(read_json_file(specPath));
            BuildResult build = build_amalgam(b.spec, build_tree_patch(b.spec, radius, seed));
            DerivedAction derived = derive_host_action(b.spec, build, b.side1, b.side2);
            SplitResult res = stallings_split(build.patch, derived.action, scale, cap);
            ordered_json body;
            body["run"] = runcfg("roundtrip", {"radius", "seed", "scale", "cap"});
            body["split"] = split_to_json(res);
            std::string name = detail::stem(specPath);
            if (res.status != SplitStatus::Split) {
                emit.json(name + ".roundtrip.json", body);
                return kInconclusive;
            }
            BuildResult rebuilt = build_amalgam(res.derived.spec, build_tree_patch(res.derived.spec, radius, seed));
            int cmpDepth = std::min({radius - 1, build.patch.innerRadius, rebuilt.patch.innerRadius});
            auto iso = boundary_tolerant_isomorphic(build.patch, rebuilt.patch, cmpDepth);
            body["depth"] = cmpDepth;
            body["isomorphic"] = iso.has_value();
            emit.json(name + ".roundtrip.json", body);
            return iso ? kOk : kFail;
        }
        throw InputError("no command given");
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
}

}  // namespace cli
}  // namespace amalg
