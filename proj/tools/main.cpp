#include <amalg/cli.hpp>

int main(int argc, char** argv) { return amalg::cli::run(argc, argv); }
