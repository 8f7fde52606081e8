#include "cli/commands.hpp"

int main(int argc, char** argv) { return hypharm::cli::run_cli(argc, argv); }
