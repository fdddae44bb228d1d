#pragma once

// Entry point of the `hodge` command-line tool.  One command per process;
// reports are JSON on stdout, errors are JSON on stderr.  Exit codes:
// 0 pass, 1 check failure, 2 invalid input, 3 numerical underflow.

namespace hodge {

int run_cli(int argc, const char* const* argv);

}  // namespace hodge
