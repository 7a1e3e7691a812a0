#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>

#include <amalg/fixtures.hpp>
#include <amalg/json_io.hpp>

using namespace amalg;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(AMALGAM_BIN) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name + ".json"; }

struct Workspace {
    std::string dir = "cli_work";
    Workspace() {
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
    }
    std::string file(const std::string& name) const { return dir + "/" + name; }
};

}  // namespace

TEST_CASE("validate accepts shipped data and rejects junk") {
    Workspace ws;
    CHECK(run_cli("validate --spec " + fixture_path("double-ray")) == 0);

    write_json_atomic(ws.file("c6.json"), graph_to_json(cycle_graph(6)));
    CHECK(run_cli("validate --graph " + ws.file("c6.json")) == 0);

    SpecBundle broken = spec_bundle_from_json(read_json_file(fixture_path("double-ray")));
    broken.spec.bondingImages[{0, 1}] = {0};
    write_json_atomic(ws.file("broken.json"), spec_to_json(broken.spec));
    CHECK(run_cli("validate --spec " + ws.file("broken.json")) == 1);

    CHECK(run_cli("validate --spec no_such_file.json") == 2);
    CHECK(run_cli("validate") == 2);
    CHECK(run_cli("definitely-not-a-command") == 2);
}

TEST_CASE("build writes parseable artifacts and honours flags") {
    Workspace ws;
    int rc = run_cli("build --spec " + fixture_path("double-ray") + " -R 3 --seed 1 --out " + ws.dir + " --dot " +
                     ws.dir);
    CHECK(rc == 0);

    ordered_json art = read_json_file(ws.file("double-ray.build.json"));
    CHECK(art.at("run").at("command") == "build");
    CHECK(art.at("run").at("radius") == 3);
    CHECK(art.at("build").at("patch").at("graph").at("n") == 8);

    Patch p = patch_from_json(art.at("build").at("patch"));
    CHECK(p.graph.n == 8);
    TreeDecomposition td = td_from_json(art.at("build").at("inducedTd"));
    CHECK(verify_td(p.graph, td).ok());

    CHECK(slurp(ws.file("double-ray.build.patch.dot")).find("doublecircle") != std::string::npos);
}

TEST_CASE("verify-td and closure run end to end") {
    Workspace ws;
    write_json_atomic(ws.file("c6.json"), graph_to_json(cycle_graph(6)));
    TreeDecomposition td;
    td.tree = FiniteGraph::from_edges(2, {{0, 1}});
    td.parts = {{0, 1, 2, 3}, {0, 3, 4, 5}};
    write_json_atomic(ws.file("td.json"), td_to_json(td));

    CHECK(run_cli("verify-td --graph " + ws.file("c6.json") + " --td " + ws.file("td.json")) == 0);

    TreeDecomposition bad = td;
    bad.parts[1] = {3, 4, 5};  // drops the edge {5,0}
    write_json_atomic(ws.file("bad.json"), td_to_json(bad));
    CHECK(run_cli("verify-td --graph " + ws.file("c6.json") + " --td " + ws.file("bad.json")) == 1);

    CHECK(run_cli("closure --graph " + ws.file("c6.json") + " --td " + ws.file("td.json") + " --out " + ws.dir) == 0);
    ordered_json art = read_json_file(ws.file("td.closure.json"));
    CHECK(art.at("allAdhesionsConnected") == true);
    TreeDecomposition closed = td_from_json(art.at("td"));
    CHECK(closed.parts[0].size() == 6);
}

TEST_CASE("split and roundtrip succeed on the double ray") {
    Workspace ws;
    CHECK(run_cli("split --spec " + fixture_path("double-ray") + " -R 4 -k 1 --out " + ws.dir) == 0);
    ordered_json art = read_json_file(ws.file("double-ray.split.json"));
    CHECK(art.at("split").at("status") == "split");
    CHECK(art.at("split").at("basicAtScale") == true);

    CHECK(run_cli("roundtrip --spec " + fixture_path("double-ray") + " -R 4 -k 1 --out " + ws.dir) == 0);
    ordered_json rt = read_json_file(ws.file("double-ray.roundtrip.json"));
    CHECK(rt.at("isomorphic") == true);
}

TEST_CASE("split reports an inconclusive scale with exit three") {
    CHECK(run_cli("split --spec " + fixture_path("double-ray") + " -R 3 -k 0") == 3);
}

TEST_CASE("ends and separators commands") {
    Workspace ws;
    write_json_atomic(ws.file("p5.json"), graph_to_json(path_graph(5)));
    CHECK(run_cli("separators --graph " + ws.file("p5.json") + " -k 1 --out " + ws.dir) == 0);
    ordered_json seps = read_json_file(ws.file("p5.separators.json"));
    CHECK(seps.at("separators") == ordered_json::array({{1}, {2}, {3}}));

    CHECK(run_cli("ends --spec " + fixture_path("double-ray") + " -R 4 -k 1 --out " + ws.dir) == 0);
    ordered_json ends = read_json_file(ws.file("double-ray.ends.json"));
    CHECK(ends.at("regions").size() == 2);

    write_json_atomic(ws.file("k4.json"), graph_to_json(complete_graph(4)));
    CHECK(run_cli("ends --graph " + ws.file("k4.json") + " -k 1") == 3);

    CHECK(run_cli("ends --graph " + ws.file("p5.json") + " --spec " + fixture_path("double-ray")) == 2);
}

TEST_CASE("hyperbolicity measures graphs and builds") {
    Workspace ws;
    write_json_atomic(ws.file("c4.json"), graph_to_json(cycle_graph(4)));
    CHECK(run_cli("hyperbolicity --graph " + ws.file("c4.json") + " --out " + ws.dir) == 0);
    ordered_json art = read_json_file(ws.file("c4.hyperbolicity.json"));
    CHECK(art.at("delta").at("delta") == 1);

    CHECK(run_cli("hyperbolicity --spec " + fixture_path("square-cactus") + " -R 3 --out " + ws.dir) == 0);
    ordered_json exp = read_json_file(ws.file("square-cactus.hyperbolicity.json"));
    CHECK(exp.at("experiment").at("violations") == 0);
}

TEST_CASE("factorise terminates on the triangle cactus") {
    Workspace ws;
    CHECK(run_cli("factorise --spec " + fixture_path("triangle-cactus") + " -R 4 -k 1 --depth 3 --out " + ws.dir) ==
          0);
    ordered_json art = read_json_file(ws.file("triangle-cactus.factorise.json"));
    CHECK(art.at("factorisation").at("allTerminal") == true);
}

TEST_CASE("identical runs write identical bytes") {
    Workspace ws;
    std::string cmd = "build --spec " + fixture_path("one-sided-ray") + " -R 4 --seed 3 --out " + ws.dir;
    CHECK(run_cli(cmd) == 0);
    std::map<std::string, std::string> first;
    for (const auto& entry : std::filesystem::directory_iterator(ws.dir))
        first[entry.path().string()] = slurp(entry.path().string());
    REQUIRE(!first.empty());
    CHECK(run_cli(cmd) == 0);
    for (const auto& [path, bytes] : first) CHECK(slurp(path) == bytes);
}
