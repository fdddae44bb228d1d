#include "hodge/commands.hpp"

int main(int argc, char** argv) { return hodge::run_cli(argc, argv); }
