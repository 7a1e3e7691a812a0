// Regenerates the shipped fixture files. Run from the repository root:
//   build/make_fixtures fixtures
// Output is deterministic, so a clean checkout reproduces byte-identical files.

#include <iostream>
#include <string>

#include <amalg/fixtures.hpp>
#include <amalg/json_io.hpp>

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(dir);
    for (const amalg::fixtures::Fixture& f : amalg::fixtures::all_fixtures()) {
        std::string path = dir + "/" + f.spec.name + ".json";
        amalg::write_json_atomic(path, amalg::spec_bundle_to_json(f.spec, f.side1Group, f.side2Group));
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}
