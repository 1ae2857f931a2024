#pragma once

namespace lazyoco {

// Entry point for the command-line tool. Returns the process exit code:
// 0 success, 1 usage error, 2 runtime or validation failure.
int run_cli(int argc, char** argv);

}  // namespace lazyoco
